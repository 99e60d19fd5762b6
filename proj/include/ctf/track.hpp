#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "ctf/helix.hpp"

namespace ctf {

/// Hit index of a layer without a measurement on the candidate.
inline constexpr std::int32_t kGhost = -1;

/// Candidate track built from a seed. hits[l] is the hit index on layer l
/// (or kGhost); the state and covariance refer to the last layer.
struct TrackCandidate {
  std::vector<std::int32_t> hits;
  StateVector state = StateVector::Zero();
  Covariance5 cov = Covariance5::Zero();
  double chi2_total = 0.0;
  std::size_t m_ghost = 0;
  double quality = 0.0;
  std::uint64_t seed_id = 0;

  std::size_t last_layer() const { return hits.empty() ? 0 : hits.size() - 1; }

  std::size_t real_hits() const {
    return static_cast<std::size_t>(
        std::count_if(hits.begin(), hits.end(), [](std::int32_t j) { return j != kGhost; }));
  }
};

/// Total order used for pruning, cleaning and selection:
/// quality descending, then chi2_total ascending, then hit sequence.
inline bool ranks_before(const TrackCandidate& a, const TrackCandidate& b) {
  if (a.quality != b.quality) {
    return a.quality > b.quality;
  }
  if (a.chi2_total != b.chi2_total) {
    return a.chi2_total < b.chi2_total;
  }
  return a.hits < b.hits;
}

inline void sort_by_quality(std::vector<TrackCandidate>& tracks) {
  std::sort(tracks.begin(), tracks.end(), ranks_before);
}

/// Number of layers on which both tracks carry the same real hit.
inline std::size_t shared_hits(const TrackCandidate& a, const TrackCandidate& b) {
  const std::size_t n = std::min(a.hits.size(), b.hits.size());
  std::size_t shared = 0;
  for (std::size_t l = 0; l < n; ++l) {
    shared += static_cast<std::size_t>(a.hits[l] != kGhost && a.hits[l] == b.hits[l]);
  }
  return shared;
}

}  // namespace ctf
