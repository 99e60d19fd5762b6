#include <gtest/gtest.h>

#include "ctf/event.hpp"
#include "ctf/seeding.hpp"

using namespace ctf;

TEST(Event, DeterministicInSeed) {
  GeneratorConfig g;
  g.n = 25;
  g.rng_seed = 77;
  const auto geo = DetectorGeometry::uniform(8);
  EXPECT_EQ(generate_event(g, geo), generate_event(g, geo));
  g.rng_seed = 78;
  EXPECT_NE(generate_event(g, geo), generate_event(GeneratorConfig{}, geo));
}

TEST(Event, HitsLieOnTheirLayers) {
  GeneratorConfig g;
  g.n = 50;
  const auto event = generate_event(g, DetectorGeometry::uniform(8));
  ASSERT_TRUE(event.truth);
  for (std::size_t l = 0; l < event.num_layers(); ++l) {
    EXPECT_EQ(event.truth->hit_particle[l].size(), event.hits[l].size());
    for (const auto& p : event.hits[l]) {
      EXPECT_NEAR(p.head<2>().norm(), event.geometry.radius(l), 1e-9);
      EXPECT_LE(std::abs(p.z()), event.geometry.half_length);
    }
  }
}

TEST(Event, NoiselessHitsMatchTruthHelix) {
  GeneratorConfig g;
  g.n = 20;
  g.hit_sigma = 0.0;
  const auto event = generate_event(g, DetectorGeometry::uniform(6));
  for (std::size_t l = 0; l < event.num_layers(); ++l) {
    for (std::size_t j = 0; j < event.hits[l].size(); ++j) {
      const auto pid = static_cast<std::size_t>(event.truth->hit_particle[l][j]);
      const auto c = intersect_layer(event.truth->particles[pid], l, event.geometry);
      ASSERT_TRUE(c);
      EXPECT_LT((c->point - event.hits[l][j]).norm(), 1e-9);
    }
  }
}

TEST(Event, InefficiencyDropsHits) {
  GeneratorConfig g;
  g.n = 400;
  g.efficiency = 0.5;
  const auto event = generate_event(g, DetectorGeometry::uniform(4));
  for (std::size_t l = 0; l < 4; ++l) {
    EXPECT_GT(event.layer_size(l), 140u);
    EXPECT_LT(event.layer_size(l), 260u);
  }
}

TEST(Event, AdversarialParticlesAreNearlyIdentical) {
  GeneratorConfig g;
  g.n = 30;
  g.adversarial = true;
  const auto event = generate_event(g, DetectorGeometry::uniform(4));
  const auto& ps = event.truth->particles;
  for (const auto& p : ps) {
    EXPECT_NEAR(p.phi0, ps[0].phi0, 2 * M_PI * 1e-6);
    EXPECT_NEAR(p.kappa, ps[0].kappa, 1e-8);
  }
}

TEST(Event, ConfigValidation) {
  GeneratorConfig g;
  g.efficiency = 0.0;
  EXPECT_THROW(g.validate(), ConfigError);
  g = GeneratorConfig{};
  g.bounds.lo.d0 = g.bounds.hi.d0;
  EXPECT_THROW(g.validate(), ConfigError);
}

TEST(Event, BundleEventHasExactGoodSeedCount) {
  const CtfConfig base;
  CtfConfig config = base;
  config.cuts = bundle_seed_cuts();
  for (double a : {1.0, 2.0}) {
    for (std::size_t n : {16u, 36u, 64u}) {
      const auto event = make_bundle_event(n, a, 3);
      EXPECT_EQ(event.layer_size(0), n);
      EXPECT_EQ(generate_seeds(event, config).size(), bundle_layout(n, a).expected_seeds())
          << "n=" << n << " a=" << a;
    }
  }
  EXPECT_THROW(bundle_layout(10, 2.0), ConfigError);
}

TEST(Event, PatchCountMatchesBruteForce) {
  GeneratorConfig g;
  g.n = 300;
  const auto event = generate_event(g, DetectorGeometry::uniform(5));
  std::size_t brute = 0;
  for (const auto& p : event.hits[3]) {
    const double phi = std::atan2(p.y(), p.x());
    if (phi >= 0.0 && phi < 1.0 && p.z() >= -10.0 && p.z() < 10.0) ++brute;
  }
  EXPECT_EQ(hits_in_patch(event, 3, 0.0, 1.0, -10.0, 10.0), brute);
}
