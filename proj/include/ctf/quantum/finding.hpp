#pragma once

// Quantum track finding: the classical layer loop with the per-layer hit
// choice done by repeated minimum finding over the layer's hits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ctf/config.hpp"
#include "ctf/event.hpp"
#include "ctf/finding.hpp"
#include "ctf/quantum/ledger.hpp"
#include "ctf/quantum/search.hpp"
#include "ctf/seeding.hpp"

namespace ctf::quantum {

/// ceil(log2(3 L lambda^2 k)): repetitions per minimum that keep the union of
/// all failures below 1/3 over k seeds.
inline std::uint64_t find_repetitions(std::size_t layers, std::size_t lambda, std::size_t seeds) {
  const double arg = 3.0 * static_cast<double>(layers) * static_cast<double>(lambda) *
                     static_cast<double>(lambda) * static_cast<double>(std::max<std::size_t>(seeds, 1));
  return static_cast<std::uint64_t>(std::ceil(std::log2(arg)));
}

/// Picks up to lambda hits below chi2_0 one at a time: each pick is the best
/// of `repetitions` minimum-finding runs, and picked hits are lifted out of
/// the key space before the next pick.
struct MinimumFindingSelector {
  std::mt19937_64* rng = nullptr;
  QuantumConfig qconfig;
  std::uint64_t repetitions = 1;
  QueryLedger ledger;
  std::uint64_t minimum_findings = 0;

  std::vector<Branch> operator()(const ResidualGate& gate, std::size_t layer,
                                 const SurfaceView& view, const CtfConfig& config) {
    const auto& hits = view.layer(layer);
    std::vector<Branch> picked;
    if (hits.empty()) return picked;
    std::vector<double> keys(hits.size());
    for (std::size_t j = 0; j < hits.size(); ++j) keys[j] = gate.chi2(hits[j].x(), hits[j].y());
    KeyedSpace space = KeyedSpace::dense(keys);
    const SearchOptions options = SearchOptions::from(qconfig);
    for (std::size_t it = 0; it < config.lambda; ++it) {
      std::optional<std::uint64_t> best;
      for (std::uint64_t rep = 0; rep < repetitions; ++rep) {
        const auto found =
            durr_hoyer_min(space, config.chi2_0, *rng, ledger, options, qconfig.dh_budget);
        ++minimum_findings;
        if (!found) continue;
        ledger.verify();
        if (!best || space.key(*found) < space.key(*best)) best = found;
      }
      if (best && space.key(*best) < config.chi2_0) {
        picked.push_back({static_cast<std::int32_t>(*best), space.key(*best)});
        space.lift(*best);
      }
    }
    return picked;
  }
};

struct QuantumFindResult {
  std::vector<TrackCandidate> tracks;
  QueryLedger ledger;
  std::uint64_t repetitions = 0;
  std::uint64_t minimum_findings = 0;
};

/// Quantum counterpart of find_tracks; output grouped by seed in input order.
inline QuantumFindResult q_find_tracks(const std::vector<Seed>& seeds, const SurfaceView& view,
                                       const CtfConfig& config, const QuantumConfig& qconfig,
                                       std::mt19937_64& rng) {
  config.validate();
  qconfig.validate();
  MinimumFindingSelector select;
  select.rng = &rng;
  select.qconfig = qconfig;
  select.repetitions = find_repetitions(view.num_layers(), config.lambda, seeds.size());
  QuantumFindResult out;
  for (const Seed& seed : seeds) {
    auto tracks = extend_seed(seed, view, config, select);
    for (auto& t : tracks) out.tracks.push_back(std::move(t));
  }
  out.ledger = select.ledger;
  out.repetitions = select.repetitions;
  out.minimum_findings = select.minimum_findings;
  return out;
}

}  // namespace ctf::quantum
