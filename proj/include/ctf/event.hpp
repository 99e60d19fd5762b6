#pragma once

// Synthetic events: helical particles from a distribution over the parameter
// cuboid, one hit per traversed layer with Gaussian on-surface noise.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "ctf/errors.hpp"
#include "ctf/helix.hpp"
#include "ctf/track.hpp"

namespace ctf {

/// Ground truth. hit_particle[l][j] is the particle that produced hit j on
/// layer l.
struct EventTruth {
  std::vector<HelixParams> particles;
  std::vector<std::vector<std::int64_t>> hit_particle;

  bool operator==(const EventTruth&) const = default;
};

struct EventRecord {
  DetectorGeometry geometry;
  /// hits[l][j] is hit j on layer l.
  std::vector<std::vector<Point3>> hits;
  std::optional<EventTruth> truth;

  std::size_t num_layers() const { return hits.size(); }
  std::size_t layer_size(std::size_t l) const { return hits.at(l).size(); }

  /// Largest per-layer hit count.
  std::size_t max_layer_size() const {
    std::size_t m = 0;
    for (const auto& layer : hits) m = std::max(m, layer.size());
    return m;
  }

  bool operator==(const EventRecord&) const = default;
};

/// Per-layer hit coordinates on the layer surface, computed once per event.
class SurfaceView {
 public:
  explicit SurfaceView(const EventRecord& event) : event_(&event) {
    const std::size_t layers = event.num_layers();
    if (event.geometry.num_layers() != layers) {
      throw DataError("event has " + std::to_string(layers) + " layers but geometry has " +
                      std::to_string(event.geometry.num_layers()));
    }
    uv_.resize(layers);
    for (std::size_t l = 0; l < layers; ++l) {
      const double r = event.geometry.radius(l);
      uv_[l].reserve(event.hits[l].size());
      for (const Point3& p : event.hits[l]) {
        uv_[l].push_back(surface_coordinates(p, r));
      }
    }
  }

  const EventRecord& event() const { return *event_; }
  const DetectorGeometry& geometry() const { return event_->geometry; }
  std::size_t num_layers() const { return uv_.size(); }
  std::size_t layer_size(std::size_t l) const { return uv_[l].size(); }
  const std::vector<Eigen::Vector2d>& layer(std::size_t l) const { return uv_[l]; }
  const Eigen::Vector2d& uv(std::size_t l, std::size_t j) const { return uv_[l][j]; }
  const Point3& point(std::size_t l, std::size_t j) const { return event_->hits[l][j]; }

 private:
  const EventRecord* event_;
  std::vector<std::vector<Eigen::Vector2d>> uv_;
};

struct ParamBounds {
  HelixParams lo{-0.1, -1.0, -std::numbers::pi, -1.0, -1.0 / 400.0};
  HelixParams hi{0.1, 1.0, std::numbers::pi, 1.0, 1.0 / 400.0};

  static std::array<double, 5> as_array(const HelixParams& h) {
    return {h.d0, h.z0, h.phi0, h.cot_theta, h.kappa};
  }
  static HelixParams from_array(const std::array<double, 5>& a) {
    return {a[0], a[1], a[2], a[3], a[4]};
  }
};

enum class Distribution { kUniform, kClustered };

struct GeneratorConfig {
  std::size_t n = 100;
  ParamBounds bounds;
  Distribution distribution = Distribution::kUniform;
  /// Mixture components and their width relative to the cuboid edge.
  std::size_t clusters = 4;
  double cluster_width = 0.05;
  double hit_sigma = 0.01;
  double efficiency = 1.0;
  std::uint64_t rng_seed = 1;
  /// Draw every particle from a sub-cuboid of relative edge adversarial_width
  /// around the cuboid centre, so that all hits of a layer are mutually
  /// compatible.
  bool adversarial = false;
  double adversarial_width = 1e-6;

  void validate() const {
    const auto lo = ParamBounds::as_array(bounds.lo);
    const auto hi = ParamBounds::as_array(bounds.hi);
    for (std::size_t i = 0; i < 5; ++i) {
      if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || !(lo[i] < hi[i])) {
        throw ConfigError("parameter bounds must be finite with lo < hi");
      }
    }
    if (bounds.lo.phi0 < -std::numbers::pi || bounds.hi.phi0 > std::numbers::pi) {
      throw ConfigError("phi0 bounds must lie in [-pi, pi]");
    }
    if (!(efficiency > 0.0 && efficiency <= 1.0)) {
      throw ConfigError("efficiency must be in (0, 1]");
    }
    if (!(hit_sigma >= 0.0) || !std::isfinite(hit_sigma)) {
      throw ConfigError("hit_sigma must be finite and non-negative");
    }
    if (distribution == Distribution::kClustered && (clusters == 0 || !(cluster_width > 0.0))) {
      throw ConfigError("clustered distribution needs clusters >= 1 and positive width");
    }
    if (adversarial && !(adversarial_width > 0.0 && adversarial_width <= 1.0)) {
      throw ConfigError("adversarial_width must be in (0, 1]");
    }
  }
};

namespace detail {

inline HelixParams sample_params(const GeneratorConfig& config,
                                 const std::vector<std::array<double, 5>>& centres,
                                 std::mt19937_64& rng) {
  auto lo = ParamBounds::as_array(config.bounds.lo);
  auto hi = ParamBounds::as_array(config.bounds.hi);
  if (config.adversarial) {
    for (std::size_t i = 0; i < 5; ++i) {
      const double mid = 0.5 * (lo[i] + hi[i]);
      const double half = 0.5 * config.adversarial_width * (hi[i] - lo[i]);
      lo[i] = mid - half;
      hi[i] = mid + half;
    }
  }
  std::array<double, 5> p{};
  if (config.distribution == Distribution::kUniform || config.adversarial) {
    for (std::size_t i = 0; i < 5; ++i) {
      p[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
    }
    return ParamBounds::from_array(p);
  }
  // Truncated Gaussian mixture: resample each coordinate until inside.
  const auto& centre =
      centres[std::uniform_int_distribution<std::size_t>(0, centres.size() - 1)(rng)];
  for (std::size_t i = 0; i < 5; ++i) {
    std::normal_distribution<double> gauss(centre[i], config.cluster_width * (hi[i] - lo[i]));
    double x = gauss(rng);
    while (x < lo[i] || x > hi[i]) x = gauss(rng);
    p[i] = x;
  }
  return ParamBounds::from_array(p);
}

/// Applies a random permutation to each layer's hits (and truth labels).
inline void permute_layers(std::vector<std::vector<Point3>>& hits,
                           std::vector<std::vector<std::int64_t>>& labels, std::mt19937_64& rng) {
  for (std::size_t l = 0; l < hits.size(); ++l) {
    std::vector<std::size_t> order(hits[l].size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Point3> h;
    std::vector<std::int64_t> p;
    h.reserve(order.size());
    p.reserve(order.size());
    for (std::size_t k : order) {
      h.push_back(hits[l][k]);
      p.push_back(labels[l][k]);
    }
    hits[l] = std::move(h);
    labels[l] = std::move(p);
  }
}

inline EventRecord assemble_event(const DetectorGeometry& geometry,
                                  const std::vector<HelixParams>& particles, double sigma,
                                  double efficiency, std::mt19937_64& rng) {
  const std::size_t layers = geometry.num_layers();
  std::vector<std::vector<Point3>> hits(layers);
  std::vector<std::vector<std::int64_t>> labels(layers);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::bernoulli_distribution keep(efficiency);
  for (std::size_t i = 0; i < particles.size(); ++i) {
    for (std::size_t l = 0; l < layers; ++l) {
      const auto crossing = intersect_layer(particles[i], l, geometry);
      const double du = noise(rng);
      const double dv = noise(rng);
      const bool kept = keep(rng);
      if (!crossing || std::abs(crossing->point.z()) > geometry.half_length || !kept) {
        continue;
      }
      const double r = geometry.radius(l);
      const Eigen::Vector2d uv = surface_coordinates(crossing->point, r);
      hits[l].push_back(point_on_surface(uv.x() + sigma * du, uv.y() + sigma * dv, r));
      labels[l].push_back(static_cast<std::int64_t>(i));
    }
  }
  permute_layers(hits, labels, rng);
  EventRecord event;
  event.geometry = geometry;
  event.hits = std::move(hits);
  event.truth = EventTruth{particles, std::move(labels)};
  return event;
}

}  // namespace detail

/// Deterministic in config.rng_seed. Truth parameters are recorded for every
/// particle, including those whose hits were dropped by inefficiency.
inline EventRecord generate_event(const GeneratorConfig& config,
                                  const DetectorGeometry& geometry) {
  config.validate();
  geometry.validate();
  std::mt19937_64 rng(config.rng_seed);
  std::vector<std::array<double, 5>> centres;
  if (config.distribution == Distribution::kClustered) {
    const auto lo = ParamBounds::as_array(config.bounds.lo);
    const auto hi = ParamBounds::as_array(config.bounds.hi);
    for (std::size_t c = 0; c < config.clusters; ++c) {
      std::array<double, 5> centre{};
      for (std::size_t i = 0; i < 5; ++i) {
        centre[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
      }
      centres.push_back(centre);
    }
  }
  std::vector<HelixParams> particles;
  particles.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    particles.push_back(detail::sample_params(config, centres, rng));
  }
  return detail::assemble_event(geometry, particles, config.hit_sigma, config.efficiency, rng);
}

/// Number of hits on `layer` with azimuth in [phi_lo, phi_hi) and z in [z_lo, z_hi).
inline std::size_t hits_in_patch(const EventRecord& event, std::size_t layer, double phi_lo,
                                 double phi_hi, double z_lo, double z_hi) {
  std::size_t count = 0;
  for (const Point3& p : event.hits.at(layer)) {
    const double phi = std::atan2(p.y(), p.x());
    count += static_cast<std::size_t>(phi >= phi_lo && phi < phi_hi && p.z() >= z_lo &&
                                      p.z() < z_hi);
  }
  return count;
}

/// Hit sequence of a truth particle (kGhost where it left no hit).
inline std::vector<std::int32_t> truth_hits(const EventRecord& event, std::int64_t particle) {
  if (!event.truth) throw NoTruthError();
  std::vector<std::int32_t> out(event.num_layers(), kGhost);
  for (std::size_t l = 0; l < event.num_layers(); ++l) {
    const auto& labels = event.truth->hit_particle[l];
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] == particle) out[l] = static_cast<std::int32_t>(j);
    }
  }
  return out;
}

/// Noise-free event whose number of good seeds is n * b^2 with
/// b = round(n^((a-1)/2)): n/b bundles of b nearly identical straight tracks.
/// Bundles sit on a grid in (phi0, cot_theta) coarse enough that no triplet
/// mixing two bundles passes `bundle_seed_cuts()`.
struct BundleLayout {
  std::size_t n = 0;
  std::size_t bundle_size = 1;
  std::size_t bundles = 0;
  std::size_t expected_seeds() const { return n * bundle_size * bundle_size; }
};

inline BundleLayout bundle_layout(std::size_t n, double a) {
  BundleLayout out;
  out.n = n;
  out.bundle_size = static_cast<std::size_t>(
      std::llround(std::pow(static_cast<double>(n), 0.5 * (a - 1.0))));
  out.bundle_size = std::max<std::size_t>(out.bundle_size, 1);
  if (n == 0 || n % out.bundle_size != 0) {
    throw ConfigError("bundle size must divide n");
  }
  out.bundles = n / out.bundle_size;
  return out;
}

inline EventRecord make_bundle_event(std::size_t n, double a, std::uint64_t seed,
                                     std::size_t layers = 4) {
  const BundleLayout layout = bundle_layout(n, a);
  const DetectorGeometry geometry = DetectorGeometry::uniform(layers);
  std::mt19937_64 rng(seed);
  constexpr std::size_t kMaxColumns = 256;
  const std::size_t cols = std::min(layout.bundles, kMaxColumns);
  const std::size_t rows = (layout.bundles + cols - 1) / cols;
  std::uniform_real_distribution<double> jitter(-1e-6, 1e-6);
  std::vector<HelixParams> particles;
  for (std::size_t k = 0; k < layout.bundles; ++k) {
    // Half-open half circle: no two bundles are back to back.
    const double phi = -0.45 * std::numbers::pi + (static_cast<double>(k % cols) + 0.5) * 0.9 *
                                                      std::numbers::pi / static_cast<double>(cols);
    const double cot =
        rows == 1 ? 0.0
                  : -0.8 + 1.6 * static_cast<double>(k / cols) / static_cast<double>(rows - 1);
    for (std::size_t m = 0; m < layout.bundle_size; ++m) {
      particles.push_back({0.0, 0.0, phi + jitter(rng), cot + jitter(rng), 0.0});
    }
  }
  return detail::assemble_event(geometry, particles, 0.0, 1.0, rng);
}

}  // namespace ctf
