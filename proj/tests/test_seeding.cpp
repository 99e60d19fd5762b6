#include <gtest/gtest.h>

#include <random>

#include "ctf/event.hpp"
#include "ctf/seeding.hpp"
#include "oracles.hpp"

using namespace ctf;

TEST(SeedFit, RecoversNoiselessHelix) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const DetectorGeometry geo = DetectorGeometry::uniform(6);
  const KalmanConfig config;
  for (int i = 0; i < 300; ++i) {
    const HelixParams h{0.1 * u(rng), u(rng), M_PI * u(rng), u(rng), u(rng) / 400.0};
    std::array<Point3, 3> p;
    for (std::size_t l = 0; l < 3; ++l) p[l] = intersect_layer(h, l, geo)->point;
    const SeedFit fit = seed_fit(p[0], p[1], p[2], geo, config);
    const StateVector truth = *state_at_radius(h, geo.radius(2));
    EXPECT_NEAR(oracle::wrap((fit.state[kU] - truth[kU]) / 30.0), 0.0, 1e-9);
    EXPECT_NEAR(fit.state[kZ], truth[kZ], 1e-9);
    EXPECT_NEAR(oracle::wrap(fit.state[kPhi] - truth[kPhi]), 0.0, 1e-9);
    EXPECT_NEAR(fit.state[kCotTheta], truth[kCotTheta], 1e-9);
    EXPECT_NEAR(fit.state[kKappa], truth[kKappa], 1e-11);
    EXPECT_LT(fit.chi2, 1e-12);
    EXPECT_EQ(fit.cov, fit.cov.transpose());
    Eigen::SelfAdjointEigenSolver<Covariance5> es(fit.cov);
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-18);
  }
}

TEST(SeedFit, CurvatureIsSignedMenger) {
  // Points on the circle of radius 50 centred at (0, 50): counterclockwise.
  const double r = 50.0;
  auto on = [&](double a) { return Point3(r * std::sin(a), r - r * std::cos(a), 0.0); };
  const auto g = detail::fit_triplet(on(0.1), on(0.2), on(0.3), 1.0, 1.0);
  EXPECT_NEAR(g.state[kKappa], 1.0 / r, 1e-12);
  const auto m = detail::fit_triplet(on(0.3), on(0.2), on(0.1), 1.0, 1.0);
  EXPECT_NEAR(m.state[kKappa], -1.0 / r, 1e-12);
}

TEST(SeedFit, ZResidualChi2) {
  // Straight line in xy; z off the line by +d, -2d, +d gives residuals of that shape.
  const double d = 0.03;
  const auto g = detail::fit_triplet({10, 0, d}, {20, 0, -2 * d}, {30, 0, d}, 30.0, 0.01);
  EXPECT_NEAR(g.chi2, (d * d + 4 * d * d + d * d) / 1e-4, 1e-9);
  EXPECT_NEAR(g.state[kCotTheta], 0.0, 1e-12);
}

TEST(SeedFit, CoincidentPointsAreRejected) {
  EXPECT_THROW(detail::fit_triplet({10, 0, 0}, {10, 0, 1}, {30, 0, 0}, 30.0, 1.0), DataError);
}

TEST(SeedFit, CovarianceOverride) {
  KalmanConfig config;
  config.seed_sigma = std::array<double, 5>{1, 2, 3, 4, 5};
  const auto c = seed_covariance({Point3(10, 0, 0), Point3(20, 0, 0), Point3(30, 0, 0)},
                                 {10, 20, 30}, config);
  EXPECT_DOUBLE_EQ(c(4, 4), 25.0);
  EXPECT_DOUBLE_EQ(c(0, 1), 0.0);
}

TEST(Seeding, CutsDisabledKeepsEveryTriplet) {
  GeneratorConfig g;
  g.n = 6;
  g.adversarial = true;
  const auto event = generate_event(g, DetectorGeometry::uniform(5));
  CtfConfig config;
  config.cuts = SeedCuts::disabled();
  std::uint64_t ops = 0;
  const auto seeds = generate_seeds(event, config, &ops);
  EXPECT_EQ(seeds.size(), 216u);
  EXPECT_EQ(ops, 216u);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    EXPECT_EQ(seeds[i].id, i);
    EXPECT_EQ(seed_triplet(seeds[i].id, 6), seeds[i].triplet);
    EXPECT_DOUBLE_EQ(seeds[i].q2, 2.0 - seeds[i].chi2);
  }
}

TEST(Seeding, TrueTripletsPassDefaultCuts) {
  GeneratorConfig g;
  g.n = 40;
  g.rng_seed = 5;
  const auto event = generate_event(g, DetectorGeometry::uniform(6));
  const CtfConfig config;
  const auto seeds = generate_seeds(event, config);
  std::set<std::array<std::int32_t, 3>> found;
  for (const auto& s : seeds) found.insert(s.triplet);
  for (std::size_t p = 0; p < g.n; ++p) {
    const auto hits = truth_hits(event, static_cast<std::int64_t>(p));
    if (hits[0] == kGhost || hits[1] == kGhost || hits[2] == kGhost) continue;
    EXPECT_TRUE(found.count({hits[0], hits[1], hits[2]})) << "particle " << p;
  }
}

TEST(Seeding, CutPredicateMatchesPerigeeOracle) {
  GeneratorConfig g;
  g.n = 12;
  g.rng_seed = 6;
  const auto event = generate_event(g, DetectorGeometry::uniform(5));
  const CtfConfig config;
  const std::size_t n = seed_index_base(event);
  for (std::size_t a = 0; a < event.layer_size(0); ++a)
    for (std::size_t b = 0; b < event.layer_size(1); ++b)
      for (std::size_t c = 0; c < event.layer_size(2); ++c) {
        const std::array<std::int32_t, 3> t{int(a), int(b), int(c)};
        const StateVector s = seed_state(event.hits[0][a], event.hits[1][b], event.hits[2][c], 30.0);
        const HelixParams h = helix_from_state(s, 30.0);
        const bool expect = std::abs(h.kappa) <= 1.0 / config.cuts.min_radius &&
                            std::abs(h.d0) <= config.cuts.max_d0 &&
                            std::abs(h.z0) <= config.cuts.max_z0;
        EXPECT_EQ(triplet_passes(event, t, config.cuts), expect);
      }
  EXPECT_FALSE(triplet_passes(event, {int(n), 0, 0}, config.cuts));
  EXPECT_FALSE(triplet_passes(event, {-1, 0, 0}, config.cuts));
}
