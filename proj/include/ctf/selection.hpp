#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctf/config.hpp"
#include "ctf/smoother.hpp"

namespace ctf {

struct SelectionStats {
  std::uint64_t layer_steps = 0;
  std::vector<std::string> diagnostics;
};

/// Smooths every candidate and keeps those whose rescored quality reaches the
/// threshold. The kept candidates carry the smoothed chi^2 and quality.
inline std::vector<TrackCandidate> select_tracks(const std::vector<TrackCandidate>& cands,
                                                 const SurfaceView& view, const CtfConfig& config,
                                                 double threshold,
                                                 SelectionStats* stats = nullptr) {
  std::vector<TrackCandidate> out;
  for (const auto& c : cands) {
    try {
      const SmoothResult s = smooth_track(c, view, config);
      if (stats != nullptr) stats->layer_steps += s.layer_steps;
      if (s.quality >= threshold) {
        TrackCandidate kept = c;
        kept.chi2_total = s.chi2_total;
        kept.quality = s.quality;
        out.push_back(std::move(kept));
      }
    } catch (const Error& e) {
      if (stats != nullptr) {
        stats->diagnostics.push_back("seed " + std::to_string(c.seed_id) + ": " + e.what());
      }
    }
  }
  return out;
}

}  // namespace ctf
