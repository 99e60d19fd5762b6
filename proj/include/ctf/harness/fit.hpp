#pragma once

// Least-squares power-law fits in log-log space.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ctf/errors.hpp"

namespace ctf {

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double n_min = 0.0;
  double n_max = 0.0;
  std::size_t points = 0;
};

/// Fits log y = intercept + slope log x. r_squared is 1 when y is constant.
inline ScalingFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ConfigError("fit needs equally many x and y values");
  if (xs.size() < 4) throw ConfigError("fit needs at least 4 points");
  const std::size_t k = xs.size();
  std::vector<double> lx(k);
  std::vector<double> ly(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw ConfigError("fit needs positive finite values");
    }
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw ConfigError("fit needs at least two distinct x values");
  ScalingFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.n_min = *std::min_element(xs.begin(), xs.end());
  f.n_max = *std::max_element(xs.begin(), xs.end());
  f.points = k;
  return f;
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw ConfigError("median of an empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace ctf
