#pragma once

// Kalman filter primitives on the surface-state parameterization.
//
// Measurements are on-surface coordinates (u = R*Phi, z), so the measurement
// matrix is the constant projection H = [I2 0]. Residuals in u are wrapped to
// the cylinder circumference.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>

#include "ctf/errors.hpp"
#include "ctf/helix.hpp"

namespace ctf {

using Matrix2 = Eigen::Matrix2d;
using Vector2 = Eigen::Vector2d;
using KalmanGain = Eigen::Matrix<double, 5, 2>;

/// Noise model shared by fitting, finding and smoothing.
struct KalmanConfig {
  double meas_sigma_u = 0.01;
  double meas_sigma_z = 0.01;
  /// Process noise Q = q^2 diag(process_scale).
  double process_noise = 1e-4;
  std::array<double, 5> process_scale{1.0, 1.0, 1.0, 1.0, 1.0};
  /// Overrides the seed covariance with diag(seed_sigma^2) when set.
  std::optional<std::array<double, 5>> seed_sigma;

  Matrix2 measurement_cov() const {
    Matrix2 v = Matrix2::Zero();
    v(0, 0) = meas_sigma_u * meas_sigma_u;
    v(1, 1) = meas_sigma_z * meas_sigma_z;
    return v;
  }

  Covariance5 process_cov() const {
    Covariance5 q = Covariance5::Zero();
    for (int i = 0; i < 5; ++i) {
      q(i, i) = process_noise * process_noise * process_scale[static_cast<std::size_t>(i)];
    }
    return q;
  }
};

struct SurfaceMeasurement {
  std::size_t layer = 0;
  double u = 0.0;
  double v = 0.0;
  Matrix2 cov = Matrix2::Identity();
};

inline SurfaceMeasurement make_measurement(const Point3& hit, std::size_t layer, double radius,
                                           const Matrix2& cov) {
  const Vector2 uv = surface_coordinates(hit, radius);
  return {layer, uv.x(), uv.y(), cov};
}

struct KalmanStep {
  StateVector predicted_state = StateVector::Zero();
  Covariance5 predicted_cov = Covariance5::Zero();
  Vector2 predicted_meas = Vector2::Zero();
  Matrix2 residual_cov = Matrix2::Identity();
  Matrix5 jacobian = Matrix5::Identity();
  std::size_t layer = 0;
  double radius = 1.0;
};

struct FilterResult {
  StateVector state = StateVector::Zero();
  Covariance5 cov = Covariance5::Zero();
  double chi2 = 0.0;
};

namespace detail {

inline constexpr double kMaxResidualCondition = 1e12;

/// Inverse of a symmetric 2x2 matrix; throws when it is not positive definite
/// or its condition number exceeds 1e12.
inline Matrix2 checked_inverse(const Matrix2& m) {
  const double a = m(0, 0);
  const double d = m(1, 1);
  const double b = 0.5 * (m(0, 1) + m(1, 0));
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), b);
  const double lo = mean - radius;
  const double hi = mean + radius;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw NonFiniteError("residual covariance");
  }
  if (!(lo > 0.0) || hi / lo > kMaxResidualCondition) {
    throw SingularResidualCovError("eigenvalues " + std::to_string(lo) + ", " +
                                   std::to_string(hi));
  }
  const double det = a * d - b * b;
  Matrix2 inv;
  inv << d / det, -b / det, -b / det, a / det;
  return inv;
}

inline double quadratic_form(const Vector2& r, const Matrix2& inv) { return r.dot(inv * r); }

/// Measurement minus prediction, with the azimuthal part wrapped.
inline Vector2 surface_residual(double u, double v, const Vector2& predicted, double radius) {
  return {radius * wrap_angle((u - predicted.x()) / radius), v - predicted.y()};
}

inline void symmetrize(Covariance5& c) { c = 0.5 * (c + c.transpose()).eval(); }

inline bool all_finite(const StateVector& p, const Covariance5& c) {
  return p.allFinite() && c.allFinite();
}

}  // namespace detail

/// Layer-to-layer propagators return the transported state and its Jacobian.
template <class P>
concept Propagator = requires(const P& prop, const StateVector& s, double r) {
  { prop(s, r, r) } -> std::same_as<std::optional<Propagation>>;
};

/// Propagator with F = I, used to isolate the covariance algebra.
struct IdentityPropagator {
  std::optional<Propagation> operator()(const StateVector& s, double, double) const {
    Propagation p;
    p.state = s;
    return p;
  }
};

/// Prediction from a state on `from_layer` to the next layer.
template <Propagator Prop = HelixPropagator>
KalmanStep kf_predict(const StateVector& state, const Covariance5& cov, std::size_t from_layer,
                      std::size_t to_layer, const DetectorGeometry& geometry,
                      const KalmanConfig& config, const Prop& propagator = {}) {
  if (to_layer != from_layer + 1) {
    throw ConfigError("kf_predict requires adjacent layers");
  }
  const double r_from = geometry.radius(from_layer);
  const double r_to = geometry.radius(to_layer);
  const auto prop = propagator(state, r_from, r_to);
  if (!prop) {
    throw MissedLayerError("layer " + std::to_string(to_layer));
  }
  KalmanStep step;
  step.layer = to_layer;
  step.radius = r_to;
  step.jacobian = prop->jacobian;
  step.predicted_state = prop->state;
  step.predicted_cov = prop->jacobian * cov * prop->jacobian.transpose() + config.process_cov();
  detail::symmetrize(step.predicted_cov);
  if (!detail::all_finite(step.predicted_state, step.predicted_cov)) {
    throw NonFiniteError("prediction to layer " + std::to_string(to_layer));
  }
  step.predicted_meas = step.predicted_state.head<2>();
  step.residual_cov = config.measurement_cov() + step.predicted_cov.topLeftCorner<2, 2>();
  return step;
}

/// Predicted chi^2 evaluator with the residual covariance inverted once.
class ResidualGate {
 public:
  explicit ResidualGate(const KalmanStep& step)
      : predicted_(step.predicted_meas),
        inverse_(detail::checked_inverse(step.residual_cov)),
        radius_(step.radius) {}

  double chi2(double u, double v) const {
    return detail::quadratic_form(detail::surface_residual(u, v, predicted_, radius_), inverse_);
  }

  double chi2(const Point3& hit) const {
    const Vector2 uv = surface_coordinates(hit, radius_);
    return chi2(uv.x(), uv.y());
  }

 private:
  Vector2 predicted_;
  Matrix2 inverse_;
  double radius_;
};

inline double predicted_chi2(const KalmanStep& step, const SurfaceMeasurement& m) {
  if (m.layer != step.layer) {
    throw ConfigError("measurement layer does not match prediction");
  }
  const Vector2 r = detail::surface_residual(m.u, m.v, step.predicted_meas, step.radius);
  return detail::quadratic_form(r, detail::checked_inverse(step.residual_cov));
}

/// Gain-form update. The covariance uses the Joseph form; the filtered
/// residual covariance V - H C_f H^T is evaluated as V R^-1 V, which is the
/// same matrix without the cancellation.
inline FilterResult kf_filter(const KalmanStep& step, const SurfaceMeasurement& m) {
  if (m.layer != step.layer) {
    throw ConfigError("measurement layer does not match prediction");
  }
  const Matrix2& v = m.cov;
  const Matrix2 r_inv = detail::checked_inverse(v + step.predicted_cov.topLeftCorner<2, 2>());
  const KalmanGain gain = step.predicted_cov.leftCols<2>() * r_inv;
  const Vector2 r = detail::surface_residual(m.u, m.v, step.predicted_meas, step.radius);

  FilterResult out;
  out.state = step.predicted_state + gain * r;
  Matrix5 a = Matrix5::Identity();
  a.leftCols<2>() -= gain;
  out.cov = a * step.predicted_cov * a.transpose() + gain * v * gain.transpose();
  detail::symmetrize(out.cov);
  if (!detail::all_finite(out.state, out.cov)) {
    throw NonFiniteError("filter update on layer " + std::to_string(step.layer));
  }
  const Vector2 r_filtered =
      detail::surface_residual(m.u, m.v, out.state.head<2>(), step.radius);
  const Matrix2 filtered_res_cov = v * r_inv * v;
  out.chi2 = detail::quadratic_form(r_filtered, detail::checked_inverse(filtered_res_cov));
  return out;
}

inline double total_chi2(std::span<const double> chis) {
  return std::accumulate(chis.begin(), chis.end(), 0.0);
}

/// q = l - m_ghost - omega * chi2_total
inline double quality_score(std::size_t layer, std::size_t ghosts, double chi2_total,
                            double omega) {
  return static_cast<double>(layer) - static_cast<double>(ghosts) - omega * chi2_total;
}

}  // namespace ctf
