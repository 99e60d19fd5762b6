#pragma once

// Helix through three hits on the three innermost layers.
//
// The transverse circle is the circumcircle of the projections (kappa is the
// signed Menger curvature, zero for collinear points). cot_theta comes from a
// least-squares line z(s) over the arc lengths along that circle. The state is
// expressed on the surface of the third hit.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>

#include "ctf/errors.hpp"
#include "ctf/helix.hpp"
#include "ctf/kalman.hpp"

namespace ctf {

struct SeedFit {
  StateVector state = StateVector::Zero();
  Covariance5 cov = Covariance5::Zero();
  /// Sum of squared longitudinal residuals of the line fit, in units of sigma_z.
  double chi2 = 0.0;
};

namespace detail {

/// Arc length along a circle of curvature kappa subtending a chord of length c.
inline double arc_from_chord(double chord, double kappa) {
  return chord * asinc(std::clamp(0.5 * kappa * chord, -1.0, 1.0));
}

struct TripletGeometry {
  StateVector state = StateVector::Zero();
  double chi2 = 0.0;
};

inline TripletGeometry fit_triplet(const Point3& a, const Point3& b, const Point3& c,
                                   double radius, double sigma_z) {
  const Eigen::Vector2d pa = a.head<2>();
  const Eigen::Vector2d pb = b.head<2>();
  const Eigen::Vector2d pc = c.head<2>();
  const Eigen::Vector2d ab = pb - pa;
  const Eigen::Vector2d bc = pc - pb;
  const double l_ab = ab.norm();
  const double l_bc = bc.norm();
  const double l_ac = (pc - pa).norm();
  if (!(l_ab > 0.0) || !(l_bc > 0.0) || !(l_ac > 0.0)) {
    throw DataError("seed triplet has coincident transverse points");
  }
  const double kappa = 2.0 * cross(ab, bc) / (l_ab * l_bc * l_ac);

  // Tangent at c: chord direction rotated by half the subtended turning angle.
  const double half_turn = std::asin(std::clamp(0.5 * kappa * l_bc, -1.0, 1.0));
  const double phi = wrap_angle(std::atan2(bc.y(), bc.x()) + half_turn);

  // Line fit z = z_c + t (s - s_c) with s measured from a.
  const double s1 = arc_from_chord(l_ab, kappa);
  const std::array<double, 3> s{0.0, s1, s1 + arc_from_chord(l_bc, kappa)};
  const std::array<double, 3> z{a.z(), b.z(), c.z()};
  const double s_mean = (s[0] + s[1] + s[2]) / 3.0;
  const double z_mean = (z[0] + z[1] + z[2]) / 3.0;
  double sxx = 0.0;
  double sxz = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxx += (s[i] - s_mean) * (s[i] - s_mean);
    sxz += (s[i] - s_mean) * (z[i] - z_mean);
  }
  const double t = sxz / sxx;
  double chi2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double res = z[i] - (z_mean + t * (s[i] - s_mean));
    chi2 += res * res;
  }

  TripletGeometry out;
  out.state[kU] = radius * std::atan2(c.y(), c.x());
  out.state[kZ] = z_mean + t * (s[2] - s_mean);
  out.state[kPhi] = phi;
  out.state[kCotTheta] = t;
  out.state[kKappa] = kappa;
  out.chi2 = chi2 / (sigma_z * sigma_z);
  return out;
}

}  // namespace detail

/// Fitted state only; skips the covariance.
inline StateVector seed_state(const Point3& h0, const Point3& h1, const Point3& h2,
                              double radius2) {
  return detail::fit_triplet(h0, h1, h2, radius2, 1.0).state;
}

/// Seed covariance: measurement noise of the six surface coordinates mapped
/// through a central-difference Jacobian of the fit, unless overridden.
inline Covariance5 seed_covariance(const std::array<Point3, 3>& hits,
                                   const std::array<double, 3>& radii,
                                   const KalmanConfig& config) {
  if (config.seed_sigma) {
    Covariance5 c = Covariance5::Zero();
    for (int i = 0; i < 5; ++i) {
      const double s = (*config.seed_sigma)[static_cast<std::size_t>(i)];
      c(i, i) = s * s;
    }
    return c;
  }
  Eigen::Matrix<double, 5, 6> jac;
  std::array<Eigen::Vector2d, 3> uv;
  for (int i = 0; i < 3; ++i) {
    uv[i] = surface_coordinates(hits[i], radii[i]);
  }
  constexpr double kStep = 1e-6;
  auto shifted = [&](int k, double delta) {
    std::array<Point3, 3> moved;
    for (int i = 0; i < 3; ++i) {
      Eigen::Vector2d q = uv[i];
      if (i == k / 2) {
        q[k % 2] += delta;
      }
      moved[i] = point_on_surface(q.x(), q.y(), radii[i]);
    }
    return detail::fit_triplet(moved[0], moved[1], moved[2], radii[2], 1.0).state;
  };
  for (int k = 0; k < 6; ++k) {
    StateVector d = shifted(k, kStep) - shifted(k, -kStep);
    d[kU] = radii[2] * wrap_angle(d[kU] / radii[2]);
    d[kPhi] = wrap_angle(d[kPhi]);
    jac.col(k) = d / (2.0 * kStep);
  }
  Eigen::Matrix<double, 6, 6> v6 = Eigen::Matrix<double, 6, 6>::Zero();
  for (int i = 0; i < 3; ++i) {
    v6(2 * i, 2 * i) = config.meas_sigma_u * config.meas_sigma_u;
    v6(2 * i + 1, 2 * i + 1) = config.meas_sigma_z * config.meas_sigma_z;
  }
  Covariance5 c = jac * v6 * jac.transpose();
  detail::symmetrize(c);
  return c;
}

/// Helix through three hits on layers 0, 1, 2 with its covariance and fit chi^2.
inline SeedFit seed_fit(const Point3& h0, const Point3& h1, const Point3& h2,
                        const DetectorGeometry& geometry, const KalmanConfig& config) {
  const std::array<double, 3> radii{geometry.radius(0), geometry.radius(1), geometry.radius(2)};
  const auto fit = detail::fit_triplet(h0, h1, h2, radii[2], config.meas_sigma_z);
  SeedFit out;
  out.state = fit.state;
  out.chi2 = fit.chi2;
  out.cov = seed_covariance({h0, h1, h2}, radii, config);
  if (!detail::all_finite(out.state, out.cov)) {
    throw NonFiniteError("seed fit");
  }
  return out;
}

}  // namespace ctf
