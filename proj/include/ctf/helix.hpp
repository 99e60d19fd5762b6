#pragma once

// Helix geometry in a uniform axial field and layer-to-layer propagation.
//
// A trajectory is described by perigee parameters (d0, z0, phi0, cot_theta,
// kappa) with respect to the beam axis. The transverse arc length s is the
// path parameter. On a layer of radius R the same trajectory is described by
// the surface state (u = R*Phi, z, phi, cot_theta, kappa), where Phi is the
// azimuth of the crossing point and phi the direction azimuth there.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "ctf/errors.hpp"

namespace ctf {

using Point3 = Eigen::Vector3d;
using StateVector = Eigen::Matrix<double, 5, 1>;
using Matrix5 = Eigen::Matrix<double, 5, 5>;
using Covariance5 = Matrix5;

enum StateIndex : int { kU = 0, kZ = 1, kPhi = 2, kCotTheta = 3, kKappa = 4 };

struct HelixParams {
  double d0 = 0.0;
  double z0 = 0.0;
  double phi0 = 0.0;
  double cot_theta = 0.0;
  double kappa = 0.0;

  bool valid() const {
    return std::isfinite(d0) && std::isfinite(z0) && std::isfinite(phi0) &&
           std::isfinite(cot_theta) && std::isfinite(kappa) &&
           std::abs(phi0) <= std::numbers::pi;
  }
  bool operator==(const HelixParams&) const = default;
};

struct DetectorGeometry {
  std::vector<double> layer_radii;
  double half_length = 200.0;

  std::size_t num_layers() const { return layer_radii.size(); }
  double radius(std::size_t layer) const { return layer_radii.at(layer); }

  void validate() const {
    if (layer_radii.size() < 4) {
      throw ConfigError("detector needs at least 4 layers");
    }
    double prev = 0.0;
    for (double r : layer_radii) {
      if (!(r > prev) || !std::isfinite(r)) {
        throw ConfigError("layer radii must be positive and strictly increasing");
      }
      prev = r;
    }
    if (!(half_length > 0.0)) {
      throw ConfigError("half_length must be positive");
    }
  }

  /// Evenly spaced barrel: radii spacing, 2*spacing, ...
  static DetectorGeometry uniform(std::size_t layers, double spacing = 10.0,
                                  double half_length = 200.0) {
    DetectorGeometry g;
    for (std::size_t l = 0; l < layers; ++l) {
      g.layer_radii.push_back(spacing * static_cast<double>(l + 1));
    }
    g.half_length = half_length;
    return g;
  }

  bool operator==(const DetectorGeometry&) const = default;
};

/// Maps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (a > -std::numbers::pi && a <= std::numbers::pi) {
    return a;
  }
  a = std::remainder(a, kTwoPi);
  if (a <= -std::numbers::pi) {
    a += kTwoPi;
  }
  return a;
}

namespace detail {

/// sin(x)/x, stable near zero.
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

/// asin(x)/x, stable near zero.
inline double asinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 6.0 + 3.0 * x2 * x2 / 40.0;
  }
  return std::asin(x) / x;
}

/// (h cos h - sin h) / h^2, stable near zero.
inline double chord_slope_factor(double h) {
  if (std::abs(h) < 1e-3) {
    const double h2 = h * h;
    return -h / 3.0 + h * h2 / 30.0;
  }
  return (h * std::cos(h) - std::sin(h)) / (h * h);
}

inline Eigen::Vector2d unit(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline Eigen::Vector2d normal(double angle) { return {-std::sin(angle), std::cos(angle)}; }

inline double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace detail

/// Point on the helix at transverse arc length s from the perigee.
inline Point3 helix_point(const HelixParams& h, double s) {
  const double half = 0.5 * h.kappa * s;
  const double chord = s * detail::sinc(half);
  const double dir = h.phi0 + half;
  return {-h.d0 * std::sin(h.phi0) + chord * std::cos(dir),
          h.d0 * std::cos(h.phi0) + chord * std::sin(dir), h.z0 + s * h.cot_theta};
}

/// Direction azimuth at arc length s.
inline double helix_direction(const HelixParams& h, double s) { return h.phi0 + h.kappa * s; }

struct LayerCrossing {
  double s = 0.0;
  Point3 point = Point3::Zero();
};

/// First crossing (smallest positive s) of the helix with a cylinder of the
/// given radius, or nullopt when the helix cannot reach it.
///
/// Uses r^2(s) = d0^2 + c^2 (1 + kappa d0) with chord c = 2 sin(kappa s/2)/kappa.
inline std::optional<LayerCrossing> intersect_radius(const HelixParams& h, double radius) {
  const double d0sq = h.d0 * h.d0;
  const double r2 = radius * radius;
  const double scale = 1.0 + h.kappa * h.d0;
  if (!(r2 > d0sq) || !(scale > 0.0)) {
    return std::nullopt;
  }
  const double chord = std::sqrt((r2 - d0sq) / scale);
  const double x = 0.5 * h.kappa * chord;
  if (!(std::abs(x) <= 1.0)) {
    return std::nullopt;
  }
  LayerCrossing out;
  out.s = chord * detail::asinc(x);
  out.point = helix_point(h, out.s);
  return out;
}

inline std::optional<LayerCrossing> intersect_layer(const HelixParams& h, std::size_t layer,
                                                    const DetectorGeometry& geometry) {
  return intersect_radius(h, geometry.radius(layer));
}

/// Surface coordinates (u = R*Phi, z) of a point on a cylinder of radius R.
inline Eigen::Vector2d surface_coordinates(const Point3& p, double radius) {
  return {radius * std::atan2(p.y(), p.x()), p.z()};
}

inline Point3 point_on_surface(double u, double v, double radius) {
  const double phi = u / radius;
  return {radius * std::cos(phi), radius * std::sin(phi), v};
}

/// Surface state of the helix where it first crosses the given radius.
inline std::optional<StateVector> state_at_radius(const HelixParams& h, double radius) {
  const auto crossing = intersect_radius(h, radius);
  if (!crossing) {
    return std::nullopt;
  }
  StateVector p;
  p[kU] = radius * std::atan2(crossing->point.y(), crossing->point.x());
  p[kZ] = crossing->point.z();
  p[kPhi] = wrap_angle(helix_direction(h, crossing->s));
  p[kCotTheta] = h.cot_theta;
  p[kKappa] = h.kappa;
  return p;
}

/// Perigee parameters of the helix passing through a surface state, plus the
/// arc length from the perigee to the surface point.
struct PerigeeFromState {
  HelixParams helix;
  double s_at_state = 0.0;
};

inline PerigeeFromState perigee_from_state(const StateVector& p, double radius) {
  using namespace detail;
  const double big_phi = p[kU] / radius;
  const Eigen::Vector2d pos = radius * unit(big_phi);
  const double kappa = p[kKappa];
  const Eigen::Vector2d n_a = normal(p[kPhi]);
  // kappa * (centre of curvature) = kappa * pos + n_a
  const Eigen::Vector2d w = kappa * pos + n_a;
  const double w_norm = w.norm();

  PerigeeFromState out;
  HelixParams& h = out.helix;
  h.kappa = kappa;
  h.cot_theta = p[kCotTheta];
  h.d0 = (kappa * radius * radius + 2.0 * pos.dot(n_a)) / (1.0 + w_norm);
  h.phi0 = std::atan2(-w.x(), w.y());

  const Eigen::Vector2d pca = h.d0 * normal(h.phi0);
  const Eigen::Vector2d chord_vec = pos - pca;
  const double chord = chord_vec.norm();
  double s = chord * asinc(std::clamp(0.5 * kappa * chord, -1.0, 1.0));
  if (chord_vec.dot(unit(h.phi0)) < 0.0) {
    s = -s;
  }
  out.s_at_state = s;
  h.z0 = p[kZ] - h.cot_theta * s;
  return out;
}

inline HelixParams helix_from_state(const StateVector& p, double radius) {
  return perigee_from_state(p, radius).helix;
}

struct Propagation {
  StateVector state = StateVector::Zero();
  Matrix5 jacobian = Matrix5::Identity();
  double path_length = 0.0;
};

/// Transports surface states between cylinders along the exact helix.
///
/// The transport goes through the perigee representation and intersect_radius;
/// the Jacobian is evaluated analytically by implicit differentiation of the
/// crossing condition |x(s)| = R_to in the frame of the starting surface.
class HelixPropagator {
 public:
  static std::optional<StateVector> transport(const StateVector& from, double r_from,
                                              double r_to, double* path_length = nullptr) {
    const PerigeeFromState perigee = perigee_from_state(from, r_from);
    const auto crossing = intersect_radius(perigee.helix, r_to);
    if (!crossing) {
      return std::nullopt;
    }
    StateVector to;
    to[kU] = r_to * std::atan2(crossing->point.y(), crossing->point.x());
    to[kZ] = crossing->point.z();
    to[kPhi] = wrap_angle(helix_direction(perigee.helix, crossing->s));
    to[kCotTheta] = from[kCotTheta];
    to[kKappa] = from[kKappa];
    if (path_length != nullptr) {
      *path_length = crossing->s - perigee.s_at_state;
    }
    return to;
  }

  static Matrix5 jacobian(const StateVector& from, double r_from, double r_to, double s) {
    using namespace detail;
    const double big_phi = from[kU] / r_from;
    const double phi = from[kPhi];
    const double t = from[kCotTheta];
    const double kappa = from[kKappa];

    const double h = 0.5 * kappa * s;
    const double chord = s * sinc(h);
    const double psi = phi + h;
    const Eigen::Vector2d pos = r_from * unit(big_phi);
    const Eigen::Vector2d end = pos + chord * unit(psi);
    const Eigen::Vector2d tangent = unit(phi + kappa * s);

    // Partials of the end point at fixed s, columns ordered as the state.
    Eigen::Matrix<double, 2, 5> dpos = Eigen::Matrix<double, 2, 5>::Zero();
    dpos.col(kU) = normal(big_phi);
    dpos.col(kPhi) = chord * normal(psi);
    dpos.col(kKappa) = 0.5 * s * s * chord_slope_factor(h) * unit(psi) +
                       chord * 0.5 * s * normal(psi);

    const double denom = end.dot(tangent);
    const Eigen::Matrix<double, 1, 5> ds = -(end.transpose() * dpos) / denom;
    const Eigen::Matrix<double, 2, 5> dend = dpos + tangent * ds;

    Matrix5 jac = Matrix5::Zero();
    jac.row(kU) = (end.x() * dend.row(1) - end.y() * dend.row(0)) / r_to;
    jac.row(kZ) = t * ds;
    jac(kZ, kZ) += 1.0;
    jac(kZ, kCotTheta) += s;
    jac.row(kPhi) = kappa * ds;
    jac(kPhi, kPhi) += 1.0;
    jac(kPhi, kKappa) += s;
    jac(kCotTheta, kCotTheta) = 1.0;
    jac(kKappa, kKappa) = 1.0;
    return jac;
  }

  std::optional<Propagation> operator()(const StateVector& from, double r_from,
                                        double r_to) const {
    Propagation out;
    const auto to = transport(from, r_from, r_to, &out.path_length);
    if (!to) {
      return std::nullopt;
    }
    out.state = *to;
    out.jacobian = jacobian(from, r_from, r_to, out.path_length);
    return out;
  }
};

}  // namespace ctf
