#pragma once

// Seeding, finding, cleaning and selection run in sequence.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ctf/cleaning.hpp"
#include "ctf/config.hpp"
#include "ctf/event.hpp"
#include "ctf/finding.hpp"
#include "ctf/seeding.hpp"
#include "ctf/selection.hpp"

namespace ctf {

enum class CleaningVariant { kOriginal, kImproved };

/// Stage sizes and primitive-operation counts: triplets examined, chi^2
/// evaluations, pair comparisons or tree operations, smoothing layer steps.
struct StageStats {
  std::size_t k_seed = 0;
  std::size_t k_find = 0;
  std::size_t k_clean = 0;
  std::size_t k_select = 0;
  std::uint64_t seed_ops = 0;
  std::uint64_t find_ops = 0;
  std::uint64_t clean_ops = 0;
  std::uint64_t select_ops = 0;
  /// Informational only.
  double wall_seconds = 0.0;
  std::vector<std::string> diagnostics;

  std::uint64_t total_ops() const { return seed_ops + find_ops + clean_ops + select_ops; }
};

struct PipelineResult {
  std::vector<TrackCandidate> tracks;
  StageStats stats;
};

inline std::vector<TrackCandidate> clean_tracks(std::vector<TrackCandidate> cands,
                                                const CtfConfig& config, CleaningVariant variant,
                                                CleaningStats* stats) {
  if (variant == CleaningVariant::kOriginal) {
    sort_by_quality(cands);
    return clean_original(cands, config.share_fraction, stats);
  }
  return clean_improved(std::move(cands), config.share_fraction, stats);
}

/// Runs the four classical stages after the given seeds.
inline PipelineResult run_from_seeds(const std::vector<Seed>& seeds, const SurfaceView& view,
                                     const CtfConfig& config, CleaningVariant variant,
                                     StageStats stats = {}) {
  FindingStats fstats;
  auto found = find_tracks(seeds, view, config, &fstats);
  stats.k_seed = seeds.size();
  stats.k_find = found.size();
  stats.find_ops = fstats.chi2_evaluations;

  CleaningStats cstats;
  auto cleaned = clean_tracks(std::move(found), config, variant, &cstats);
  stats.k_clean = cleaned.size();
  stats.clean_ops = cstats.operations;

  SelectionStats sstats;
  PipelineResult out;
  out.tracks = select_tracks(cleaned, view, config, config.quality_threshold, &sstats);
  stats.k_select = out.tracks.size();
  stats.select_ops = sstats.layer_steps;
  stats.diagnostics = std::move(sstats.diagnostics);
  out.stats = std::move(stats);
  return out;
}

inline PipelineResult run_pipeline(const EventRecord& event, const CtfConfig& config,
                                   CleaningVariant variant) {
  config.validate();
  event.geometry.validate();
  const auto start = std::chrono::steady_clock::now();
  const SurfaceView view(event);
  StageStats stats;
  const auto seeds = generate_seeds(event, config, &stats.seed_ops);
  PipelineResult out = run_from_seeds(seeds, view, config, variant, std::move(stats));
  out.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace ctf
