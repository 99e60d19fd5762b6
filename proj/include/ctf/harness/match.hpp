#pragma once

// Truth matching of reconstructed tracks.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "ctf/errors.hpp"
#include "ctf/event.hpp"
#include "ctf/track.hpp"

namespace ctf {

struct MatchReport {
  double efficiency = 0.0;
  double fake_rate = 0.0;
  double min_shared_fraction = 0.75;
  std::size_t particles = 0;
  std::size_t tracks = 0;
  std::size_t matched = 0;
  /// Particle matched by each track in input order, or -1.
  std::vector<std::int64_t> track_particle;
};

/// A track matches a particle when at least `min_shared_fraction` of its real
/// hits belong to it. Tracks are visited by quality and each particle is
/// matched at most once; unmatched tracks are fakes.
inline MatchReport match_truth(const std::vector<TrackCandidate>& tracks,
                               const EventRecord& event, double min_shared_fraction = 0.75) {
  if (!event.truth) throw NoTruthError();
  const auto& labels = event.truth->hit_particle;
  MatchReport report;
  report.min_shared_fraction = min_shared_fraction;
  report.particles = event.truth->particles.size();
  report.tracks = tracks.size();
  report.track_particle.assign(tracks.size(), -1);

  std::vector<std::size_t> order(tracks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ranks_before(tracks[a], tracks[b]);
  });

  std::vector<char> taken(report.particles, 0);
  for (std::size_t i : order) {
    const auto& t = tracks[i];
    std::map<std::int64_t, std::size_t> counts;
    std::size_t real = 0;
    for (std::size_t l = 0; l < t.hits.size() && l < labels.size(); ++l) {
      if (t.hits[l] == kGhost) continue;
      ++real;
      const auto j = static_cast<std::size_t>(t.hits[l]);
      if (j >= labels[l].size()) throw DataError("track hit index outside the event");
      ++counts[labels[l][j]];
    }
    for (const auto& [particle, count] : counts) {
      if (particle < 0 || static_cast<std::size_t>(particle) >= report.particles) continue;
      if (static_cast<double>(count) >= min_shared_fraction * static_cast<double>(real) &&
          !taken[static_cast<std::size_t>(particle)]) {
        taken[static_cast<std::size_t>(particle)] = 1;
        report.track_particle[i] = particle;
        ++report.matched;
        break;
      }
    }
  }
  report.efficiency = report.particles == 0
                          ? 0.0
                          : static_cast<double>(report.matched) / static_cast<double>(report.particles);
  report.fake_rate = report.tracks == 0 ? 0.0
                                        : static_cast<double>(report.tracks - report.matched) /
                                              static_cast<double>(report.tracks);
  return report;
}

}  // namespace ctf
