#pragma once

// Scaling benchmarks: per-n trials of one stage or pipeline, the median of a
// deterministic cost metric per n, and a log-log fit of the medians.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ctf/cleaning.hpp"
#include "ctf/event.hpp"
#include "ctf/harness/fit.hpp"
#include "ctf/io/config_io.hpp"
#include "ctf/io/event_io.hpp"
#include "ctf/pipeline.hpp"
#include "ctf/quantum/finding.hpp"
#include "ctf/quantum/seeding.hpp"
#include "ctf/quantum/superposition.hpp"

namespace ctf {

enum class BenchTarget {
  kSeed,
  kFind,
  kCleanOriginal,
  kCleanImproved,
  kPipeline,
  kQSeed,
  kQFind,
  kQSuper,
  kDensity,
};

inline const char* target_name(BenchTarget t) {
  switch (t) {
    case BenchTarget::kSeed: return "seed";
    case BenchTarget::kFind: return "find";
    case BenchTarget::kCleanOriginal: return "clean-orig";
    case BenchTarget::kCleanImproved: return "clean-impr";
    case BenchTarget::kPipeline: return "pipeline";
    case BenchTarget::kQSeed: return "q-seed";
    case BenchTarget::kQFind: return "q-find";
    case BenchTarget::kQSuper: return "q-super";
    case BenchTarget::kDensity: return "density";
  }
  return "?";
}

inline BenchTarget parse_target(const std::string& s) {
  for (auto t : {BenchTarget::kSeed, BenchTarget::kFind, BenchTarget::kCleanOriginal,
                 BenchTarget::kCleanImproved, BenchTarget::kPipeline, BenchTarget::kQSeed,
                 BenchTarget::kQFind, BenchTarget::kQSuper, BenchTarget::kDensity}) {
    if (s == target_name(t)) return t;
  }
  throw ConfigError("unknown bench target " + s);
}

struct BenchOptions {
  BenchTarget target = BenchTarget::kSeed;
  std::vector<std::size_t> ns;
  std::size_t trials = 3;
  std::uint64_t master_seed = 1;
  RunConfig config;
  /// Detector layers of classical and q-find events.
  std::size_t layers = 8;
  /// Good-seed exponent of q-seed events: k_seed = n^a.
  double bundle_a = 1.0;
  /// Seeds handed to q-find.
  std::size_t fixed_seeds = 8;
  /// Layers and branch limit of q-super events.
  std::size_t super_layers = 6;
  std::size_t super_lambda = 2;

  void validate() const {
    if (ns.empty()) throw ConfigError("bench needs at least one n");
    for (std::size_t i = 0; i < ns.size(); ++i) {
      if (ns[i] == 0) throw ConfigError("n must be positive");
      if (i > 0 && ns[i] <= ns[i - 1]) throw ConfigError("ns must be strictly ascending");
    }
    if (trials == 0) throw ConfigError("trials must be positive");
    if (layers < 4 || super_layers < 4) throw ConfigError("events need at least 4 layers");
    config.validate();
  }
};

/// Cost of one trial. `metric` is the fitted quantity: the stage's
/// operation count, the query charge, or the hit count for density.
struct TrialStats {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  StageStats stages;
  quantum::QueryLedger ledger;
  double metric = 0.0;
  /// Informational only.
  double wall_seconds = 0.0;
};

struct BenchResult {
  BenchTarget target = BenchTarget::kSeed;
  std::vector<std::size_t> ns;
  /// Sorted by (n, trial).
  std::vector<TrialStats> trials;
  std::vector<double> medians;
  std::optional<ScalingFit> fit;
};

inline std::uint64_t trial_seed(std::uint64_t master, std::size_t n, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(trial)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

/// k candidate tracks over `layers` layers with hits drawn from k per layer,
/// about 5% ghosts beyond the seed layers, and one in four a near copy of an
/// earlier candidate. Quality is random.
inline std::vector<TrackCandidate> synthetic_candidates(std::size_t k, std::size_t layers,
                                                        std::mt19937_64& rng) {
  std::vector<TrackCandidate> out;
  out.reserve(k);
  std::uniform_int_distribution<std::int32_t> hit(0, static_cast<std::int32_t>(std::max<std::size_t>(k, 1) - 1));
  std::uniform_real_distribution<double> quality(-10.0, 0.0);
  std::bernoulli_distribution ghost(0.05);
  std::bernoulli_distribution copy(0.25);
  std::uniform_int_distribution<std::size_t> layer_pick(0, layers - 1);
  for (std::size_t i = 0; i < k; ++i) {
    TrackCandidate t;
    if (i > 0 && copy(rng)) {
      t.hits = out[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)].hits;
      for (int c = 0; c < 2; ++c) t.hits[layer_pick(rng)] = hit(rng);
    } else {
      t.hits.resize(layers);
      for (std::size_t l = 0; l < layers; ++l) {
        t.hits[l] = l >= 3 && ghost(rng) ? kGhost : hit(rng);
      }
    }
    t.m_ghost = layers - t.real_hits();
    t.quality = quality(rng);
    t.seed_id = i;
    out.push_back(std::move(t));
  }
  return out;
}

/// Seeds of the first `count` particles whose true triplet passes the cuts.
inline std::vector<Seed> truth_seeds(const EventRecord& event, const CtfConfig& config,
                                     std::size_t count) {
  if (!event.truth) throw NoTruthError();
  std::vector<Seed> out;
  for (std::size_t p = 0; p < event.truth->particles.size() && out.size() < count; ++p) {
    const auto hits = truth_hits(event, static_cast<std::int64_t>(p));
    const std::array<std::int32_t, 3> t{hits[0], hits[1], hits[2]};
    if (t[0] == kGhost || t[1] == kGhost || t[2] == kGhost) continue;
    if (!triplet_passes(event, t, config.cuts)) continue;
    try {
      out.push_back(make_seed(event, t, config));
    } catch (const Error&) {
    }
  }
  return out;
}

namespace detail {

inline EventRecord bench_event(const BenchOptions& o, std::size_t n, std::size_t layers,
                               std::uint64_t seed, bool adversarial) {
  GeneratorConfig g = o.config.generator;
  g.n = n;
  g.rng_seed = seed;
  g.adversarial = adversarial;
  return generate_event(g, DetectorGeometry::uniform(layers));
}

}  // namespace detail

inline TrialStats run_trial(const BenchOptions& o, std::size_t n, std::size_t trial) {
  TrialStats s;
  s.n = n;
  s.trial = trial;
  s.seed = trial_seed(o.master_seed, n, trial);
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(s.seed);
  CtfConfig adversarial = o.config.ctf;
  adversarial.cuts = SeedCuts::disabled();
  switch (o.target) {
    case BenchTarget::kSeed: {
      const auto event = detail::bench_event(o, n, o.layers, s.seed, true);
      s.stages.k_seed = generate_seeds(event, adversarial, &s.stages.seed_ops).size();
      s.metric = static_cast<double>(s.stages.seed_ops);
      break;
    }
    case BenchTarget::kFind: {
      const auto event = detail::bench_event(o, n, o.layers, s.seed, true);
      const SurfaceView view(event);
      const auto seeds = generate_seeds(event, adversarial, &s.stages.seed_ops);
      FindingStats fs;
      s.stages.k_seed = seeds.size();
      s.stages.k_find = find_tracks(seeds, view, adversarial, &fs).size();
      s.stages.find_ops = fs.chi2_evaluations;
      s.metric = static_cast<double>(s.stages.find_ops);
      break;
    }
    case BenchTarget::kCleanOriginal:
    case BenchTarget::kCleanImproved: {
      auto cands = synthetic_candidates(n, o.layers, rng);
      CleaningStats cs;
      s.stages.k_find = cands.size();
      const auto variant = o.target == BenchTarget::kCleanOriginal ? CleaningVariant::kOriginal
                                                                   : CleaningVariant::kImproved;
      s.stages.k_clean = clean_tracks(std::move(cands), o.config.ctf, variant, &cs).size();
      s.stages.clean_ops = cs.operations;
      s.metric = static_cast<double>(cs.operations);
      break;
    }
    case BenchTarget::kPipeline: {
      const auto event = detail::bench_event(o, n, o.layers, s.seed, true);
      s.stages = run_pipeline(event, adversarial, CleaningVariant::kImproved).stats;
      s.metric = static_cast<double>(s.stages.total_ops());
      break;
    }
    case BenchTarget::kQSeed: {
      const auto event = make_bundle_event(n, o.bundle_a, s.seed);
      CtfConfig c = o.config.ctf;
      c.cuts = bundle_seed_cuts();
      const auto r = quantum::q_generate_seeds(event, c, o.config.quantum, rng);
      s.stages.k_seed = r.seeds.size();
      s.ledger = r.ledger;
      s.metric = static_cast<double>(r.ledger.charge);
      break;
    }
    case BenchTarget::kQFind: {
      const auto event = detail::bench_event(o, n, o.layers, s.seed, false);
      const SurfaceView view(event);
      const auto seeds = truth_seeds(event, o.config.ctf, o.fixed_seeds);
      if (seeds.empty()) throw DataError("no seeds for q-find trial");
      const auto r = quantum::q_find_tracks(seeds, view, o.config.ctf, o.config.quantum, rng);
      s.stages.k_seed = seeds.size();
      s.stages.k_find = r.tracks.size();
      s.ledger = r.ledger;
      s.metric = static_cast<double>(r.ledger.charge) / static_cast<double>(seeds.size());
      break;
    }
    case BenchTarget::kQSuper: {
      const auto event = detail::bench_event(o, n, o.super_layers, s.seed, false);
      CtfConfig c = o.config.ctf;
      c.lambda = o.super_lambda;
      const auto sc = quantum::SuperpositionConfig::from(c, o.config.quantum);
      const auto r = quantum::reconstruct_superposition(event, c, sc, o.config.quantum, rng);
      s.stages.k_select = r.tracks.size();
      s.ledger = r.ledger;
      s.metric = static_cast<double>(r.ledger.charge);
      break;
    }
    case BenchTarget::kDensity: {
      const auto event = detail::bench_event(o, n, o.layers, s.seed, false);
      s.metric = static_cast<double>(hits_in_patch(event, 3, 0.0, 0.5, -20.0, 20.0));
      break;
    }
  }
  s.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

/// Trials run sequentially in (n, trial) order.
inline BenchResult bench_scaling(const BenchOptions& o) {
  o.validate();
  BenchResult r;
  r.target = o.target;
  r.ns = o.ns;
  for (std::size_t n : o.ns) {
    std::vector<double> metrics;
    for (std::size_t t = 0; t < o.trials; ++t) {
      r.trials.push_back(run_trial(o, n, t));
      metrics.push_back(r.trials.back().metric);
    }
    r.medians.push_back(median(metrics));
  }
  if (o.ns.size() >= 4) {
    std::vector<double> xs(o.ns.begin(), o.ns.end());
    bool positive = true;
    for (double m : r.medians) positive = positive && m > 0.0;
    if (positive) r.fit = fit_loglog(xs, r.medians);
  }
  return r;
}

/// Deterministic columns only; wall time is left out.
inline std::string bench_to_csv(const BenchResult& r) {
  std::string out =
      "target,n,trial,seed,metric,k_seed,k_find,k_clean,k_select,seed_ops,find_ops,clean_ops,"
      "select_ops,oracle_calls,diffusion_calls,classical_verifications,charge\n";
  for (const auto& t : r.trials) {
    const auto& s = t.stages;
    out += std::string(target_name(r.target)) + "," + std::to_string(t.n) + "," +
           std::to_string(t.trial) + "," + std::to_string(t.seed) + "," +
           detail::format_double(t.metric) + "," + std::to_string(s.k_seed) + "," +
           std::to_string(s.k_find) + "," + std::to_string(s.k_clean) + "," +
           std::to_string(s.k_select) + "," + std::to_string(s.seed_ops) + "," +
           std::to_string(s.find_ops) + "," + std::to_string(s.clean_ops) + "," +
           std::to_string(s.select_ops) + "," + std::to_string(t.ledger.oracle_calls) + "," +
           std::to_string(t.ledger.diffusion_calls) + "," +
           std::to_string(t.ledger.classical_verifications) + "," +
           std::to_string(t.ledger.charge) + "\n";
  }
  return out;
}

}  // namespace ctf
