#pragma once

// Reconstruction over the superposition of all track candidates.
//
// Every candidate of the fixed-branching finding tree has an index: a seed
// triplet and one slate position per layer 3 .. L-1. A candidate scores -q
// when classical finding keeps it and it passes selection, +inf otherwise or
// when it overlaps an accepted track. Each round picks the minimum score by
// repeated minimum finding and registers the winner in the tuple forest.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "ctf/cleaning.hpp"
#include "ctf/config.hpp"
#include "ctf/event.hpp"
#include "ctf/finding.hpp"
#include "ctf/quantum/ledger.hpp"
#include "ctf/quantum/search.hpp"
#include "ctf/seeding.hpp"
#include "ctf/selection.hpp"

namespace ctf::quantum {

struct SuperpositionConfig {
  std::size_t lambda = 2;
  /// Error-branch probability of each simulated U_i call.
  double epsilon = 0.0;
  /// Charge of one U_i call in units of sqrt(n).
  double oracle_cost = 1.0;

  static constexpr double kInfScore = kInf;

  static SuperpositionConfig from(const CtfConfig& config, const QuantumConfig& q) {
    return {config.lambda, q.epsilon, q.oracle_cost};
  }

  void validate() const {
    if (lambda == 0) throw ConfigError("lambda must be positive");
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must be in [0, 1)");
    if (!(oracle_cost > 0.0)) throw ConfigError("oracle_cost must be positive");
  }
};

/// Seed triplet index plus one slate position per layer 3 .. L-1.
struct CandidateIndex {
  std::uint64_t seed_flat = 0;
  std::vector<std::uint32_t> branch_choices;

  bool operator==(const CandidateIndex&) const = default;
};

/// Flat index seed_flat * lambda^(L-3) + choices in mixed radix, first
/// choice most significant.
inline std::uint64_t encode(const CandidateIndex& idx, std::size_t lambda) {
  std::uint64_t v = idx.seed_flat;
  for (std::uint32_t c : idx.branch_choices) {
    if (c >= lambda) throw ConfigError("branch choice out of range");
    v = v * lambda + c;
  }
  return v;
}

inline CandidateIndex decode(std::uint64_t flat, std::size_t layers, std::size_t lambda) {
  CandidateIndex idx;
  idx.branch_choices.assign(layers - 3, 0);
  for (std::size_t i = layers - 3; i-- > 0;) {
    idx.branch_choices[i] = static_cast<std::uint32_t>(flat % lambda);
    flat /= lambda;
  }
  idx.seed_flat = flat;
  return idx;
}

inline std::uint64_t candidate_space_size(std::size_t base, std::size_t layers,
                                          std::size_t lambda) {
  std::uint64_t n = static_cast<std::uint64_t>(base) * base * base;
  for (std::size_t l = 3; l < layers; ++l) n *= lambda;
  return n;
}

/// Slate entry that leads to no candidate.
inline constexpr std::int32_t kNoBranch = -2;

/// The lambda children formed at one layer: the lambda lowest-chi^2 hits when
/// any hit passes the gate, else a ghost and the lambda-1 lowest. Short
/// layers pad with kNoBranch.
inline std::vector<Branch> slate(const ResidualGate& gate, std::size_t layer,
                                 const SurfaceView& view, const CtfConfig& config) {
  const auto& hits = view.layer(layer);
  std::vector<Branch> all(hits.size());
  for (std::size_t j = 0; j < hits.size(); ++j) {
    all[j] = {static_cast<std::int32_t>(j), gate.chi2(hits[j].x(), hits[j].y())};
  }
  const std::size_t keep = std::min(all.size(), config.lambda);
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                    branch_less);
  all.resize(keep);
  std::vector<Branch> out;
  if (all.empty() || !(all.front().chi2 < config.chi2_0)) {
    out.push_back({kGhost, 0.0});
    if (all.size() == config.lambda) all.pop_back();
  }
  out.insert(out.end(), all.begin(), all.end());
  out.resize(config.lambda, Branch{kNoBranch, 0.0});
  return out;
}

namespace detail {

/// Walks the slates of one seed along `choices`; nullopt when a step fails or
/// lands on kNoBranch.
inline std::optional<TrackCandidate> replay(const Seed& seed, const std::vector<std::uint32_t>& choices,
                                            const SurfaceView& view, const CtfConfig& config) {
  TrackCandidate t = seed_candidate(seed);
  for (std::size_t l = 3; l < view.num_layers(); ++l) {
    try {
      const KalmanStep step =
          kf_predict(t.state, t.cov, l - 1, l, view.geometry(), config.kalman);
      const auto s = slate(ResidualGate(step), l, view, config);
      const Branch b = s[choices[l - 3]];
      if (b.hit == kNoBranch) return std::nullopt;
      t = make_child(t, step, b, view, config);
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return t;
}

/// Slate positions that reproduce a surviving candidate of its seed.
inline std::vector<std::uint32_t> choices_of(const Seed& seed, const TrackCandidate& target,
                                             const SurfaceView& view, const CtfConfig& config) {
  std::vector<std::uint32_t> choices;
  TrackCandidate t = seed_candidate(seed);
  for (std::size_t l = 3; l < view.num_layers(); ++l) {
    const KalmanStep step = kf_predict(t.state, t.cov, l - 1, l, view.geometry(), config.kalman);
    const auto s = slate(ResidualGate(step), l, view, config);
    const auto it = std::find_if(s.begin(), s.end(),
                                 [&](const Branch& b) { return b.hit == target.hits[l]; });
    if (it == s.end()) throw Error("surviving candidate is missing from its slate");
    choices.push_back(static_cast<std::uint32_t>(it - s.begin()));
    t = make_child(t, step, *it, view, config);
  }
  return choices;
}

inline CtfConfig with_lambda(CtfConfig config, std::size_t lambda) {
  config.lambda = lambda;
  return config;
}

}  // namespace detail

struct CandidateScore {
  /// Track of the index, when the slates admit one.
  std::optional<TrackCandidate> track;
  double score = kInf;
};

/// Scores one candidate index against the accepted tracks in `forest` (which
/// may be null). The index doubles as the ghost ordinal.
inline CandidateScore enumerate_candidate(const CandidateIndex& idx, const EventRecord& event,
                                          const SurfaceView& view, const CtfConfig& base_config,
                                          std::size_t lambda, TupleCleaner* forest) {
  const CtfConfig config = detail::with_lambda(base_config, lambda);
  CandidateScore out;
  const std::size_t base = seed_index_base(event);
  if (idx.branch_choices.size() + 3 != view.num_layers()) throw ConfigError("wrong choice count");
  if (idx.seed_flat >= static_cast<std::uint64_t>(base) * base * base) return out;
  const auto triplet = seed_triplet(idx.seed_flat, base);
  if (!triplet_passes(event, triplet, config.cuts)) return out;
  Seed seed;
  try {
    seed = make_seed(event, triplet, config);
  } catch (const Error&) {
    return out;
  }
  out.track = detail::replay(seed, idx.branch_choices, view, config);
  if (!out.track) return out;
  ClassicalSelector selector;
  const auto survivors = extend_seed(seed, view, config, selector);
  const bool survives = std::any_of(survivors.begin(), survivors.end(), [&](const TrackCandidate& s) {
    return s.hits == out.track->hits;
  });
  if (!survives) return out;
  if (select_tracks({*out.track}, view, config, config.quality_threshold).empty()) return out;
  if (forest != nullptr && forest->conflicts(*out.track, encode(idx, lambda))) return out;
  out.score = -out.track->quality;
  return out;
}

/// A candidate with finite score before any track is accepted.
struct FiniteCandidate {
  std::uint64_t index = 0;
  TrackCandidate track;
  double score = kInf;
};

/// Every finite-score candidate, by ascending index.
inline std::vector<FiniteCandidate> finite_candidates(const EventRecord& event,
                                                      const SurfaceView& view,
                                                      const CtfConfig& base_config,
                                                      std::size_t lambda) {
  const CtfConfig config = detail::with_lambda(base_config, lambda);
  std::vector<FiniteCandidate> out;
  ClassicalSelector selector;
  for (const Seed& seed : generate_seeds(event, config)) {
    const auto survivors = extend_seed(seed, view, config, selector);
    for (const auto& s : select_tracks(survivors, view, config, config.quality_threshold)) {
      // Selection rescored s; keep the finding quality of the survivor.
      const auto it = std::find_if(survivors.begin(), survivors.end(),
                                   [&](const TrackCandidate& c) { return c.hits == s.hits; });
      CandidateIndex idx{seed.id, detail::choices_of(seed, *it, view, config)};
      out.push_back({encode(idx, lambda), *it, -it->quality});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const FiniteCandidate& a, const FiniteCandidate& b) { return a.index < b.index; });
  return out;
}

struct SuperpositionResult {
  std::vector<TrackCandidate> tracks;
  /// Candidate index of each output track.
  std::vector<std::uint64_t> indices;
  QueryLedger ledger;
  std::uint64_t rounds = 0;
  std::uint64_t repetitions = 0;
  std::uint64_t space_size = 0;
  std::size_t finite_candidates = 0;
};

/// ceil(log2(2 lambda n^3)) minimum findings per round.
inline std::uint64_t superposition_repetitions(std::size_t base, std::size_t lambda) {
  const double n = static_cast<double>(std::max<std::size_t>(base, 1));
  return static_cast<std::uint64_t>(
      std::ceil(std::log2(2.0 * static_cast<double>(lambda) * n * n * n)));
}

inline SuperpositionResult reconstruct_superposition(const EventRecord& event,
                                                     const CtfConfig& config,
                                                     const SuperpositionConfig& sconfig,
                                                     const QuantumConfig& qconfig,
                                                     std::mt19937_64& rng) {
  config.validate();
  qconfig.validate();
  sconfig.validate();
  if (event.num_layers() < 4) throw DataError("superposition reconstruction needs 4 layers");
  const SurfaceView view(event);
  const std::size_t base = seed_index_base(event);
  const std::size_t layers = event.num_layers();
  auto finite = finite_candidates(event, view, config, sconfig.lambda);

  SuperpositionResult out;
  out.space_size = candidate_space_size(base, layers, sconfig.lambda);
  out.finite_candidates = finite.size();
  out.repetitions = superposition_repetitions(base, sconfig.lambda);
  if (out.space_size == 0) return out;
  std::vector<std::pair<std::uint64_t, double>> keys;
  keys.reserve(finite.size());
  for (const auto& c : finite) keys.emplace_back(c.index, c.score);
  KeyedSpace space(out.space_size, std::move(keys));

  const auto weight = static_cast<std::uint64_t>(
      std::ceil(sconfig.oracle_cost * std::sqrt(static_cast<double>(base))));
  SearchOptions options = SearchOptions::from(qconfig, std::max<std::uint64_t>(weight, 1));
  options.epsilon = sconfig.epsilon;
  TupleCleaner forest(layers, config.share_fraction);
  std::vector<char> live(finite.size(), 1);

  while (true) {
    ++out.rounds;
    std::optional<std::uint64_t> best;
    for (std::uint64_t rep = 0; rep < out.repetitions; ++rep) {
      const auto found = durr_hoyer_min(space, kInf, rng, out.ledger, options, qconfig.dh_budget);
      if (!found) continue;
      out.ledger.verify();
      if (!best || space.key(*found) < space.key(*best)) best = found;
    }
    if (!best || !(space.key(*best) < kInf)) break;
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(finite.begin(), finite.end(), *best,
                         [](const FiniteCandidate& c, std::uint64_t i) { return c.index < i; }) -
        finite.begin());
    const TrackCandidate& winner = finite[pos].track;
    forest.accept(winner, finite[pos].index);
    out.tracks.push_back(winner);
    out.indices.push_back(finite[pos].index);
    // The accepted track and everything overlapping it leave the finite class.
    for (std::size_t i = 0; i < finite.size(); ++i) {
      if (!live[i]) continue;
      if (i == pos || forest.conflicts(finite[i].track, finite[i].index)) {
        live[i] = 0;
        space.lift(finite[i].index);
      }
    }
  }
  return out;
}

/// Exact-minimum counterpart: finite candidates in score order, each kept
/// unless it overlaps an already kept one.
inline std::vector<TrackCandidate> superposition_reference(const EventRecord& event,
                                                           const CtfConfig& config,
                                                           std::size_t lambda) {
  const SurfaceView view(event);
  auto finite = finite_candidates(event, view, config, lambda);
  std::sort(finite.begin(), finite.end(), [](const FiniteCandidate& a, const FiniteCandidate& b) {
    return a.score != b.score ? a.score < b.score : a.index < b.index;
  });
  TupleCleaner forest(event.num_layers(), config.share_fraction);
  std::vector<TrackCandidate> out;
  for (const auto& c : finite) {
    if (forest.conflicts(c.track, c.index)) continue;
    forest.accept(c.track, c.index);
    out.push_back(c.track);
  }
  return out;
}

}  // namespace ctf::quantum
