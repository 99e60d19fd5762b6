#include <gtest/gtest.h>

#include <random>

#include "ctf/helix.hpp"
#include "oracles.hpp"

using namespace ctf;

namespace {

HelixParams random_helix(std::mt19937_64& rng, double max_kappa = 1.0 / 400.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {0.1 * u(rng), u(rng), M_PI * u(rng), u(rng), max_kappa * u(rng)};
}

}  // namespace

TEST(Helix, WrapAngleRange) {
  for (double a : {-10.0, -M_PI, -1.0, 0.0, 3.0, M_PI, 7.0, 100.0}) {
    const double w = wrap_angle(a);
    EXPECT_GT(w, -M_PI);
    EXPECT_LE(w, M_PI);
    EXPECT_NEAR(std::remainder(w - a, 2 * M_PI), 0.0, 1e-12);
  }
}

TEST(Helix, CrossingMatchesIntegratedTrajectory) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const HelixParams h = random_helix(rng, 1.0 / 100.0);
    for (double radius : {10.0, 40.0, 80.0}) {
      const auto analytic = intersect_radius(h, radius);
      const auto ode = oracle::ode_crossing(h, radius);
      ASSERT_EQ(analytic.has_value(), ode.has_value());
      if (!analytic) continue;
      EXPECT_NEAR(analytic->point.x(), ode->x, 1e-7);
      EXPECT_NEAR(analytic->point.y(), ode->y, 1e-7);
      EXPECT_NEAR(analytic->point.z(), ode->z, 1e-7);
      EXPECT_NEAR(oracle::wrap(helix_direction(h, analytic->s) - ode->phi), 0.0, 1e-9);
    }
  }
}

TEST(Helix, LowMomentumMissesOuterLayer) {
  const HelixParams h{0.0, 0.0, 0.0, 0.0, 1.0 / 10.0};  // circle of diameter 20
  EXPECT_TRUE(intersect_radius(h, 15.0).has_value());
  EXPECT_FALSE(intersect_radius(h, 25.0).has_value());
  EXPECT_FALSE(oracle::ode_crossing(h, 25.0).has_value());
}

TEST(Helix, StateRoundTripsThroughPerigee) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 500; ++i) {
    const HelixParams h = random_helix(rng);
    const auto s = state_at_radius(h, 30.0);
    ASSERT_TRUE(s);
    const HelixParams back = helix_from_state(*s, 30.0);
    EXPECT_NEAR(back.d0, h.d0, 1e-9);
    EXPECT_NEAR(back.z0, h.z0, 1e-9);
    EXPECT_NEAR(oracle::wrap(back.phi0 - h.phi0), 0.0, 1e-9);
    EXPECT_DOUBLE_EQ(back.cot_theta, h.cot_theta);
    EXPECT_DOUBLE_EQ(back.kappa, h.kappa);
  }
}

TEST(Helix, TransportMatchesIntegratedTrajectory) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    const HelixParams h = random_helix(rng, 1.0 / 100.0);
    const auto from = state_at_radius(h, 20.0);
    ASSERT_TRUE(from);
    const auto to = HelixPropagator::transport(*from, 20.0, 30.0);
    const auto ode = oracle::ode_crossing(h, 30.0);
    ASSERT_EQ(to.has_value(), ode.has_value());
    if (!to) continue;
    EXPECT_NEAR(oracle::wrap((*to)[kU] / 30.0 - std::atan2(ode->y, ode->x)), 0.0, 1e-9);
    EXPECT_NEAR((*to)[kZ], ode->z, 1e-7);
    EXPECT_NEAR(oracle::wrap((*to)[kPhi] - ode->phi), 0.0, 1e-9);
  }
}

TEST(Helix, JacobianMatchesFiniteDifferences) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 200; ++i) {
    const HelixParams h = random_helix(rng);
    const auto from = state_at_radius(h, 20.0);
    ASSERT_TRUE(from);
    const auto prop = HelixPropagator{}(*from, 20.0, 30.0);
    ASSERT_TRUE(prop);
    const std::array<double, 5> step{1e-5, 1e-5, 1e-7, 1e-7, 1e-9};
    for (int c = 0; c < 5; ++c) {
      StateVector lo = *from;
      StateVector hi = *from;
      lo[c] -= step[static_cast<std::size_t>(c)];
      hi[c] += step[static_cast<std::size_t>(c)];
      const auto a = HelixPropagator::transport(lo, 20.0, 30.0);
      const auto b = HelixPropagator::transport(hi, 20.0, 30.0);
      ASSERT_TRUE(a && b);
      StateVector d = *b - *a;
      d[kU] = 30.0 * oracle::wrap(d[kU] / 30.0);
      d[kPhi] = oracle::wrap(d[kPhi]);
      const StateVector fd = d / (2.0 * step[static_cast<std::size_t>(c)]);
      for (int r = 0; r < 5; ++r) {
        EXPECT_NEAR(prop->jacobian(r, c), fd[r], 1e-5 * (1.0 + std::abs(fd[r])))
            << "row " << r << " col " << c;
      }
    }
  }
}

TEST(Helix, GeometryValidation) {
  EXPECT_NO_THROW(DetectorGeometry::uniform(4).validate());
  EXPECT_THROW(DetectorGeometry::uniform(3).validate(), ConfigError);
  DetectorGeometry g = DetectorGeometry::uniform(5);
  g.layer_radii[2] = g.layer_radii[1];
  EXPECT_THROW(g.validate(), ConfigError);
  g = DetectorGeometry::uniform(5);
  g.half_length = 0.0;
  EXPECT_THROW(g.validate(), ConfigError);
}
