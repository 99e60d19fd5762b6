#pragma once

// Fixed-interval smoothing of a finished candidate.
//
// The forward filter is re-run from the refitted seed, then a backward
// Rauch-Tung-Striebel pass combines each filtered state with the smoothed
// state of the next layer. The smoothed chi^2 uses the smoothed residual
// r = m - H p_s with covariance V - H C_s H^T.

#include <Eigen/Cholesky>

#include <cstddef>
#include <vector>

#include "ctf/config.hpp"
#include "ctf/event.hpp"
#include "ctf/kalman.hpp"
#include "ctf/seed_fit.hpp"
#include "ctf/track.hpp"

namespace ctf {

struct SmoothResult {
  /// States and covariances on layers 2 .. L-1 (index 0 is layer 2).
  std::vector<StateVector> states;
  std::vector<Covariance5> covs;
  /// Forward filtered states on the same layers.
  std::vector<StateVector> filtered_states;
  /// Per-layer smoothed chi^2 (0 for ghost layers and layer 2).
  std::vector<double> chi2;
  /// Seed-fit chi^2 plus the smoothed chi^2 of layers 3 .. L-1.
  double chi2_total = 0.0;
  double quality = 0.0;
  /// Forward plus backward layer steps.
  std::size_t layer_steps = 0;
};

namespace detail {

/// a - b with the azimuthal components wrapped.
inline StateVector state_difference(const StateVector& a, const StateVector& b, double radius) {
  StateVector d = a - b;
  d[kU] = radius * wrap_angle(d[kU] / radius);
  d[kPhi] = wrap_angle(d[kPhi]);
  return d;
}

}  // namespace detail

inline SmoothResult smooth_track(const TrackCandidate& candidate, const SurfaceView& view,
                                 const CtfConfig& config) {
  const std::size_t layers = candidate.hits.size();
  if (layers < 3 || candidate.real_hits() < 3 || candidate.hits[0] == kGhost ||
      candidate.hits[1] == kGhost || candidate.hits[2] == kGhost) {
    throw DataError("smoothing needs the three seed hits");
  }
  const auto& geometry = view.geometry();
  const SeedFit seed =
      seed_fit(view.point(0, static_cast<std::size_t>(candidate.hits[0])),
               view.point(1, static_cast<std::size_t>(candidate.hits[1])),
               view.point(2, static_cast<std::size_t>(candidate.hits[2])), geometry, config.kalman);
  const Matrix2 v = config.kalman.measurement_cov();
  const std::size_t count = layers - 2;

  std::vector<StateVector> pf(count), pp(count);
  std::vector<Covariance5> cf(count), cp(count);
  std::vector<Matrix5> jac(count);
  pf[0] = seed.state;
  cf[0] = seed.cov;
  SmoothResult out;
  for (std::size_t k = 1; k < count; ++k) {
    const std::size_t l = k + 2;
    const KalmanStep step = kf_predict(pf[k - 1], cf[k - 1], l - 1, l, geometry, config.kalman);
    pp[k] = step.predicted_state;
    cp[k] = step.predicted_cov;
    jac[k] = step.jacobian;
    if (candidate.hits[l] == kGhost) {
      pf[k] = pp[k];
      cf[k] = cp[k];
    } else {
      const auto& uv = view.uv(l, static_cast<std::size_t>(candidate.hits[l]));
      const FilterResult f = kf_filter(step, {l, uv.x(), uv.y(), v});
      pf[k] = f.state;
      cf[k] = f.cov;
    }
    ++out.layer_steps;
  }

  out.states.resize(count);
  out.covs.resize(count);
  out.states[count - 1] = pf[count - 1];
  out.covs[count - 1] = cf[count - 1];
  for (std::size_t k = count - 1; k-- > 0;) {
    const double r_next = geometry.radius(k + 3);
    const Eigen::LLT<Matrix5> llt(cp[k + 1]);
    if (llt.info() != Eigen::Success) {
      throw SingularResidualCovError("predicted covariance on layer " + std::to_string(k + 3));
    }
    // A = C_f F^T C_p^-1
    const Matrix5 gain = llt.solve(jac[k + 1] * cf[k]).transpose();
    out.states[k] =
        pf[k] + gain * detail::state_difference(out.states[k + 1], pp[k + 1], r_next);
    out.covs[k] = cf[k] + gain * (out.covs[k + 1] - cp[k + 1]) * gain.transpose();
    detail::symmetrize(out.covs[k]);
    ++out.layer_steps;
  }

  out.chi2.assign(count, 0.0);
  out.chi2_total = seed.chi2;
  for (std::size_t k = 1; k < count; ++k) {
    const std::size_t l = k + 2;
    if (candidate.hits[l] == kGhost) continue;
    const auto& uv = view.uv(l, static_cast<std::size_t>(candidate.hits[l]));
    const Vector2 r =
        detail::surface_residual(uv.x(), uv.y(), out.states[k].head<2>(), geometry.radius(l));
    const Matrix2 res_cov = v - out.covs[k].topLeftCorner<2, 2>();
    out.chi2[k] = detail::quadratic_form(r, detail::checked_inverse(res_cov));
    out.chi2_total += out.chi2[k];
  }
  out.filtered_states = std::move(pf);
  out.quality = quality_score(layers - 1, candidate.m_ghost, out.chi2_total, config.omega);
  return out;
}

}  // namespace ctf
