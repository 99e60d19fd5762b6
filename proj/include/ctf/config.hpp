#pragma once

// Tunable parameters of the classical and simulated quantum pipelines.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>

#include "ctf/errors.hpp"
#include "ctf/kalman.hpp"

namespace ctf {

/// Triplet acceptance. All bounds must be positive; `disabled()` accepts
/// every triplet.
struct SeedCuts {
  /// Minimum radius of curvature |1/kappa| (transverse momentum proxy).
  double min_radius = 300.0;
  double max_d0 = 0.5;
  double max_z0 = 5.0;
  bool enabled = true;

  static SeedCuts disabled() {
    SeedCuts c;
    c.enabled = false;
    return c;
  }

  void validate() const {
    if (enabled && !(min_radius > 0.0 && max_d0 > 0.0 && max_z0 > 0.0)) {
      throw ConfigError("seed cuts must be positive");
    }
  }
};

struct CtfConfig {
  KalmanConfig kalman;
  SeedCuts cuts;
  /// Gate on the predicted chi^2 of a hit.
  double chi2_0 = 9.0;
  /// Candidates kept per seed per layer.
  std::size_t lambda = 5;
  std::size_t max_ghosts = 2;
  /// Weight of chi^2 in the quality score.
  double omega = 1.0;
  /// Candidates with chi2_total above chi2_cap_per_layer * L are dropped.
  double chi2_cap_per_layer = 10.0;
  /// Maximum allowed fraction of shared hits in cleaning.
  double share_fraction = 0.5;
  /// Minimum post-smoothing quality in selection.
  double quality_threshold = -20.0;

  double chi2_cap(std::size_t layers) const {
    return chi2_cap_per_layer * static_cast<double>(layers);
  }

  void validate() const {
    cuts.validate();
    if (!(chi2_0 > 0.0)) throw ConfigError("chi2_0 must be positive");
    if (lambda < 1) throw ConfigError("lambda must be at least 1");
    if (!(omega >= 0.0)) throw ConfigError("omega must be non-negative");
    if (!(chi2_cap_per_layer > 0.0)) throw ConfigError("chi2 cap must be positive");
    if (!(share_fraction > 0.0 && share_fraction <= 1.0)) {
      throw ConfigError("share_fraction must be in (0, 1]");
    }
    if (std::isnan(quality_threshold)) throw ConfigError("quality_threshold is NaN");
    if (!(kalman.meas_sigma_u > 0.0 && kalman.meas_sigma_z > 0.0)) {
      throw ConfigError("measurement sigmas must be positive");
    }
    if (!(kalman.process_noise >= 0.0)) throw ConfigError("process noise must be non-negative");
  }
};

/// Constants of the search simulators.
struct QuantumConfig {
  /// Growth factor of the exponential-search bound.
  double bbht_growth = 1.2;
  /// Charge cutoff of exponential search, in units of sqrt(N).
  double bbht_cutoff = 8.0;
  /// Hard budget of minimum finding, in units of sqrt(N).
  double dh_budget = 22.5;
  /// Phase-estimation register target, in units of sqrt((t+1)(N-t+1)).
  double count_precision = 20.0;
  /// Error-branch probability of each simulated U_i call.
  double epsilon = 0.0;
  /// Charge of one U_i call in units of sqrt(n).
  double oracle_cost = 1.0;

  void validate() const {
    if (!(bbht_growth > 1.0 && bbht_growth < 4.0 / 3.0)) {
      throw ConfigError("bbht_growth must be in (1, 4/3)");
    }
    if (!(bbht_cutoff > 0.0 && dh_budget > 0.0 && count_precision > 0.0 && oracle_cost > 0.0)) {
      throw ConfigError("quantum constants must be positive");
    }
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must be in [0, 1)");
  }
};

}  // namespace ctf
