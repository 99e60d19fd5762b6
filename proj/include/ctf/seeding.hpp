#pragma once

// Triplet seeding over the three innermost layers.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ctf/config.hpp"
#include "ctf/event.hpp"
#include "ctf/seed_fit.hpp"

namespace ctf {

struct Seed {
  std::array<std::int32_t, 3> triplet{};
  /// Flat index (j0 * n + j1) * n + j2 with n the largest seeding-layer size.
  std::uint64_t id = 0;
  StateVector state = StateVector::Zero();
  Covariance5 cov = Covariance5::Zero();
  double chi2 = 0.0;
  double q2 = 0.0;
};

/// Cuts matching make_bundle_event: straight tracks from the origin.
inline SeedCuts bundle_seed_cuts() {
  SeedCuts c;
  c.min_radius = 1000.0;
  c.max_d0 = 0.1;
  c.max_z0 = 1.0;
  return c;
}

/// Side length of the flat triplet index space.
inline std::size_t seed_index_base(const EventRecord& event) {
  std::size_t n = 0;
  for (std::size_t l = 0; l < 3; ++l) n = std::max(n, event.layer_size(l));
  return n;
}

inline std::uint64_t seed_flat_index(const std::array<std::int32_t, 3>& t, std::size_t base) {
  const auto b = static_cast<std::uint64_t>(base);
  return (static_cast<std::uint64_t>(t[0]) * b + static_cast<std::uint64_t>(t[1])) * b +
         static_cast<std::uint64_t>(t[2]);
}

inline std::array<std::int32_t, 3> seed_triplet(std::uint64_t flat, std::size_t base) {
  const auto b = static_cast<std::uint64_t>(base);
  return {static_cast<std::int32_t>(flat / (b * b)), static_cast<std::int32_t>((flat / b) % b),
          static_cast<std::int32_t>(flat % b)};
}

inline bool passes_cuts(const StateVector& state, double radius2, const SeedCuts& cuts) {
  if (!cuts.enabled) return true;
  if (std::abs(state[kKappa]) * cuts.min_radius > 1.0) return false;
  const HelixParams h = helix_from_state(state, radius2);
  return std::abs(h.d0) <= cuts.max_d0 && std::abs(h.z0) <= cuts.max_z0;
}

/// True iff the triplet exists in the event and its fitted helix passes the cuts.
inline bool triplet_passes(const EventRecord& event, const std::array<std::int32_t, 3>& t,
                           const SeedCuts& cuts) {
  for (std::size_t l = 0; l < 3; ++l) {
    if (t[l] < 0 || static_cast<std::size_t>(t[l]) >= event.layer_size(l)) return false;
  }
  if (!cuts.enabled) return true;
  const double r2 = event.geometry.radius(2);
  try {
    return passes_cuts(seed_state(event.hits[0][t[0]], event.hits[1][t[1]], event.hits[2][t[2]], r2),
                       r2, cuts);
  } catch (const DataError&) {
    return false;
  }
}

/// Fitted seed for a triplet known to pass.
inline Seed make_seed(const EventRecord& event, const std::array<std::int32_t, 3>& t,
                      const CtfConfig& config) {
  const SeedFit fit = seed_fit(event.hits[0][t[0]], event.hits[1][t[1]], event.hits[2][t[2]],
                               event.geometry, config.kalman);
  Seed s;
  s.triplet = t;
  s.id = seed_flat_index(t, seed_index_base(event));
  s.state = fit.state;
  s.cov = fit.cov;
  s.chi2 = fit.chi2;
  s.q2 = quality_score(2, 0, fit.chi2, config.omega);
  return s;
}

/// Every triplet of layers 0, 1, 2 whose fit passes the cuts, in ascending
/// (j0, j1, j2) order. `triplet_ops` receives the number of triplets examined.
inline std::vector<Seed> generate_seeds(const EventRecord& event, const CtfConfig& config,
                                        std::uint64_t* triplet_ops = nullptr) {
  if (event.num_layers() < 3) throw DataError("seeding needs at least 3 layers");
  std::vector<Seed> seeds;
  const std::size_t n0 = event.layer_size(0);
  const std::size_t n1 = event.layer_size(1);
  const std::size_t n2 = event.layer_size(2);
  for (std::size_t a = 0; a < n0; ++a) {
    for (std::size_t b = 0; b < n1; ++b) {
      for (std::size_t c = 0; c < n2; ++c) {
        const std::array<std::int32_t, 3> t{static_cast<std::int32_t>(a),
                                            static_cast<std::int32_t>(b),
                                            static_cast<std::int32_t>(c)};
        if (triplet_passes(event, t, config.cuts)) {
          try {
            seeds.push_back(make_seed(event, t, config));
          } catch (const Error&) {
            // Coincident or non-finite triplets cannot seed a track.
          }
        }
      }
    }
  }
  if (triplet_ops != nullptr) *triplet_ops += n0 * n1 * n2;
  return seeds;
}

}  // namespace ctf
