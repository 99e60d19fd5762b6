#pragma once

// Combinatorial Kalman-filter track finding.
//
// Each seed is extended layer by layer. Every live candidate branches on the
// hits picked by a branch selector (or on one ghost hit when none is picked);
// the children are ranked by quality and at most lambda survive per layer.
// The classical selector evaluates the predicted chi^2 of every hit; the
// quantum finder plugs in a minimum-finding selector.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ctf/config.hpp"
#include "ctf/event.hpp"
#include "ctf/kalman.hpp"
#include "ctf/seeding.hpp"
#include "ctf/track.hpp"

namespace ctf {

struct Branch {
  std::int32_t hit = kGhost;
  double chi2 = 0.0;
};

inline bool branch_less(const Branch& a, const Branch& b) {
  return a.chi2 != b.chi2 ? a.chi2 < b.chi2 : a.hit < b.hit;
}

/// Chooses the hits a candidate branches on at one layer. The returned
/// branches all have chi2 < chi2_0.
template <class S>
concept BranchSelector = requires(S& s, const ResidualGate& gate, std::size_t layer,
                                  const SurfaceView& view, const CtfConfig& config) {
  { s(gate, layer, view, config) } -> std::same_as<std::vector<Branch>>;
};

/// Gates every hit of the layer and keeps the lambda lowest-chi^2 passes
/// (only those can survive the per-layer pruning).
struct ClassicalSelector {
  std::uint64_t chi2_evaluations = 0;

  std::vector<Branch> operator()(const ResidualGate& gate, std::size_t layer,
                                 const SurfaceView& view, const CtfConfig& config) {
    std::vector<Branch> passed;
    const auto& hits = view.layer(layer);
    for (std::size_t j = 0; j < hits.size(); ++j) {
      const double chi2 = gate.chi2(hits[j].x(), hits[j].y());
      if (chi2 < config.chi2_0) passed.push_back({static_cast<std::int32_t>(j), chi2});
    }
    chi2_evaluations += hits.size();
    if (passed.size() > config.lambda) {
      std::partial_sort(passed.begin(), passed.begin() + static_cast<std::ptrdiff_t>(config.lambda),
                        passed.end(), branch_less);
      passed.resize(config.lambda);
    }
    return passed;
  }
};

inline TrackCandidate seed_candidate(const Seed& seed) {
  TrackCandidate t;
  t.hits.assign(seed.triplet.begin(), seed.triplet.end());
  t.state = seed.state;
  t.cov = seed.cov;
  t.chi2_total = seed.chi2;
  t.m_ghost = 0;
  t.quality = seed.q2;
  t.seed_id = seed.id;
  return t;
}

namespace detail {

struct ChildStub {
  std::size_t parent = 0;
  std::size_t step = 0;
  Branch branch;
  double chi2_total = 0.0;
  std::size_t ghosts = 0;
  double quality = 0.0;
};

}  // namespace detail

/// Child of `parent` on the step's layer: the filtered state for a hit, the
/// predicted state for a ghost.
inline TrackCandidate make_child(const TrackCandidate& parent, const KalmanStep& step,
                                 const Branch& branch, const SurfaceView& view,
                                 const CtfConfig& config) {
  TrackCandidate child;
  child.hits = parent.hits;
  child.hits.push_back(branch.hit);
  child.seed_id = parent.seed_id;
  if (branch.hit == kGhost) {
    child.state = step.predicted_state;
    child.cov = step.predicted_cov;
    child.chi2_total = parent.chi2_total;
    child.m_ghost = parent.m_ghost + 1;
  } else {
    const auto& uv = view.uv(step.layer, static_cast<std::size_t>(branch.hit));
    const SurfaceMeasurement m{step.layer, uv.x(), uv.y(), config.kalman.measurement_cov()};
    const FilterResult f = kf_filter(step, m);
    child.state = f.state;
    child.cov = f.cov;
    child.chi2_total = parent.chi2_total + branch.chi2;
    child.m_ghost = parent.m_ghost;
  }
  child.quality = quality_score(step.layer, child.m_ghost, child.chi2_total, config.omega);
  return child;
}

/// Runs the layer loop for one seed with the given selector.
template <BranchSelector Selector>
std::vector<TrackCandidate> extend_seed(const Seed& seed, const SurfaceView& view,
                                        const CtfConfig& config, Selector& select) {
  const std::size_t layers = view.num_layers();
  const double cap = config.chi2_cap(layers);
  std::vector<TrackCandidate> live{seed_candidate(seed)};
  for (std::size_t l = 3; l < layers && !live.empty(); ++l) {
    std::vector<KalmanStep> steps;
    std::vector<detail::ChildStub> stubs;
    for (std::size_t i = 0; i < live.size(); ++i) {
      KalmanStep step;
      std::vector<Branch> branches;
      try {
        step = kf_predict(live[i].state, live[i].cov, l - 1, l, view.geometry(), config.kalman);
        branches = select(ResidualGate(step), l, view, config);
      } catch (const Error&) {
        continue;
      }
      if (branches.empty()) branches.push_back({kGhost, 0.0});
      steps.push_back(step);
      for (const Branch& b : branches) {
        detail::ChildStub c;
        c.parent = i;
        c.step = steps.size() - 1;
        c.branch = b;
        c.chi2_total = live[i].chi2_total + (b.hit == kGhost ? 0.0 : b.chi2);
        c.ghosts = live[i].m_ghost + (b.hit == kGhost ? 1 : 0);
        c.quality = quality_score(l, c.ghosts, c.chi2_total, config.omega);
        if (c.ghosts <= config.max_ghosts && c.chi2_total <= cap) stubs.push_back(c);
      }
    }
    std::sort(stubs.begin(), stubs.end(), [&](const detail::ChildStub& a, const detail::ChildStub& b) {
      if (a.quality != b.quality) return a.quality > b.quality;
      if (a.chi2_total != b.chi2_total) return a.chi2_total < b.chi2_total;
      if (a.parent != b.parent) return live[a.parent].hits < live[b.parent].hits;
      return a.branch.hit < b.branch.hit;
    });
    std::vector<TrackCandidate> next;
    for (const auto& c : stubs) {
      if (next.size() == config.lambda) break;
      try {
        next.push_back(make_child(live[c.parent], steps[c.step], c.branch, view, config));
      } catch (const Error&) {
        // A failed update drops this branch only.
      }
    }
    live = std::move(next);
  }
  return live;
}

struct FindingStats {
  std::uint64_t chi2_evaluations = 0;
};

/// Classical track finding over all seeds; output grouped by seed in input order.
inline std::vector<TrackCandidate> find_tracks(const std::vector<Seed>& seeds,
                                               const SurfaceView& view, const CtfConfig& config,
                                               FindingStats* stats = nullptr) {
  std::vector<TrackCandidate> out;
  ClassicalSelector selector;
  for (const Seed& seed : seeds) {
    auto tracks = extend_seed(seed, view, config, selector);
    for (auto& t : tracks) out.push_back(std::move(t));
  }
  if (stats != nullptr) stats->chi2_evaluations += selector.chi2_evaluations;
  return out;
}

}  // namespace ctf
