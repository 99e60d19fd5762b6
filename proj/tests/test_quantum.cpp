#include <gtest/gtest.h>

#include <random>

#include "ctf/event.hpp"
#include "ctf/finding.hpp"
#include "ctf/quantum/finding.hpp"
#include "ctf/quantum/seeding.hpp"
#include "ctf/quantum/superposition.hpp"
#include "oracles.hpp"

using namespace ctf;
using namespace ctf::quantum;

namespace {

EventRecord benign_event(std::size_t n, std::size_t layers, std::uint64_t seed) {
  GeneratorConfig g;
  g.n = n;
  g.rng_seed = seed;
  return generate_event(g, DetectorGeometry::uniform(layers));
}

std::vector<std::uint64_t> ids(const std::vector<Seed>& seeds) {
  std::vector<std::uint64_t> out;
  for (const auto& s : seeds) out.push_back(s.id);
  return out;
}

}  // namespace

TEST(QuantumSeeding, AllMarkedSpaceReturnsEverySeed) {
  const auto event = benign_event(3, 4, 21);
  CtfConfig config;
  config.cuts = SeedCuts::disabled();
  const auto classical = generate_seeds(event, config);
  ASSERT_EQ(classical.size(), 27u);
  std::mt19937_64 rng(1);
  const auto r = q_generate_seeds(event, config, QuantumConfig{}, rng);
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.count_estimate, 27u);
  EXPECT_EQ(ids(r.seeds), ids(classical));
}

TEST(QuantumSeeding, OutputIsVerifiedSubsetOfClassical) {
  const auto event = benign_event(12, 4, 22);
  const CtfConfig config;
  const SeedSearchOracle oracle(event, config);
  const auto classical = ids(oracle.seeds());
  ASSERT_FALSE(classical.empty());
  std::mt19937_64 rng(2);
  int equal = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = q_generate_seeds(oracle, QuantumConfig{}, rng);
    const auto got = ids(r.seeds);
    EXPECT_TRUE(std::includes(classical.begin(), classical.end(), got.begin(), got.end()));
    EXPECT_EQ(r.ledger.classical_verifications, r.samples);
    equal += got == classical;
  }
  EXPECT_GE(equal, 40);
}

TEST(QuantumSeeding, SingleGoodSeedIsFoundMostOfTheTime) {
  const auto event = make_bundle_event(1, 1.0, 7);
  CtfConfig config;
  config.cuts = bundle_seed_cuts();
  const SeedSearchOracle oracle(event, config);
  ASSERT_EQ(oracle.marked_count(), 1u);
  std::mt19937_64 rng(3);
  int found = 0;
  for (int trial = 0; trial < 200; ++trial) found += q_generate_seeds(oracle, QuantumConfig{}, rng).seeds.size() == 1;
  EXPECT_GE(found, 100);
}

TEST(QuantumSeeding, OracleRejectsUnmarkedIndex) {
  const auto event = benign_event(4, 4, 23);
  const SeedSearchOracle oracle(event, CtfConfig{});
  std::mt19937_64 rng(4);
  EXPECT_THROW(oracle.seed(oracle.sample_unmarked(rng)), DataError);
  EXPECT_EQ(oracle.size(), 64u);
}

TEST(QuantumFinding, SingleParticleMatchesClassical) {
  const auto event = benign_event(1, 8, 24);
  const SurfaceView view(event);
  const CtfConfig config;
  const auto seeds = generate_seeds(event, config);
  const auto classical = find_tracks(seeds, view, config);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto r = q_find_tracks(seeds, view, config, QuantumConfig{}, rng);
    ASSERT_EQ(oracle::hit_sets(r.tracks), oracle::hit_sets(classical));
  }
}

TEST(QuantumFinding, RepetitionCount) {
  EXPECT_EQ(find_repetitions(8, 2, 1), 7u);   // log2(96)
  EXPECT_EQ(find_repetitions(8, 2, 8), 10u);  // log2(768)
}

TEST(Superposition, IndexRoundTrip) {
  const CandidateIndex idx{17, {1, 0, 2}};
  const auto flat = encode(idx, 3);
  EXPECT_EQ(flat, ((17u * 3 + 1) * 3 + 0) * 3 + 2);
  EXPECT_EQ(decode(flat, 6, 3), idx);
  EXPECT_EQ(candidate_space_size(4, 6, 2), 64u * 8u);
  EXPECT_THROW(encode({0, {2}}, 2), ConfigError);
}

TEST(Superposition, SingleParticleCandidate) {
  const auto event = benign_event(1, 6, 25);
  const SurfaceView view(event);
  const CtfConfig config;
  const auto truth = truth_hits(event, 0);
  ASSERT_EQ(std::count(truth.begin(), truth.end(), kGhost), 0);
  const CandidateIndex idx{0, {0, 0, 0}};
  const auto c = enumerate_candidate(idx, event, view, config, 2, nullptr);
  ASSERT_TRUE(c.track.has_value());
  EXPECT_EQ(c.track->hits, truth);
  EXPECT_EQ(c.score, -c.track->quality);

  TupleCleaner forest(6, config.share_fraction);
  forest.accept(*c.track, 99);
  EXPECT_EQ(enumerate_candidate(idx, event, view, config, 2, &forest).score, kInf);
}

TEST(Superposition, FiniteCandidatesMatchExhaustiveEnumeration) {
  for (std::uint64_t seed : {26u, 27u, 28u}) {
    const auto event = benign_event(3, 5, seed);
    const SurfaceView view(event);
    const CtfConfig config;
    const std::size_t lambda = 2;
    const auto size = candidate_space_size(seed_index_base(event), 5, lambda);
    std::vector<std::pair<std::uint64_t, double>> exhaustive;
    for (std::uint64_t i = 0; i < size; ++i) {
      const auto c = enumerate_candidate(decode(i, 5, lambda), event, view, config, lambda, nullptr);
      if (c.score < kInf) exhaustive.emplace_back(i, c.score);
    }
    const auto finite = finite_candidates(event, view, config, lambda);
    ASSERT_EQ(finite.size(), exhaustive.size());
    for (std::size_t k = 0; k < finite.size(); ++k) {
      EXPECT_EQ(finite[k].index, exhaustive[k].first);
      EXPECT_EQ(finite[k].score, exhaustive[k].second);
    }
  }
}

TEST(Superposition, ReferenceEqualsPairwiseGreedy) {
  for (double f : {0.01, 0.5}) {
    const auto event = benign_event(6, 6, 29);
    const SurfaceView view(event);
    CtfConfig config;
    config.share_fraction = f;
    auto finite = finite_candidates(event, view, config, 2);
    std::stable_sort(finite.begin(), finite.end(),
                     [](const auto& a, const auto& b) { return a.score < b.score; });
    std::vector<TrackCandidate> expect;
    for (const auto& c : finite) {
      bool ok = true;
      for (const auto& k : expect) ok = ok && !oracle::conflict(c.track, k, f);
      if (ok) expect.push_back(c.track);
    }
    EXPECT_EQ(oracle::hit_sets(superposition_reference(event, config, 2)), oracle::hit_sets(expect));
  }
}

TEST(Superposition, QuantumRunsAgreeWithReference) {
  const auto event = benign_event(4, 6, 30);
  const CtfConfig config;
  const auto reference = oracle::hit_sets(superposition_reference(event, config, 2));
  ASSERT_FALSE(reference.empty());
  std::mt19937_64 rng(6);
  int equal = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = reconstruct_superposition(event, config, SuperpositionConfig{}, QuantumConfig{}, rng);
    for (std::size_t i = 0; i < r.tracks.size(); ++i)
      for (std::size_t j = i + 1; j < r.tracks.size(); ++j)
        EXPECT_FALSE(oracle::conflict(r.tracks[i], r.tracks[j], config.share_fraction));
    equal += oracle::hit_sets(r.tracks) == reference;
  }
  EXPECT_GE(equal, 8);
}

TEST(Superposition, DeterministicLedger) {
  const auto event = benign_event(4, 6, 31);
  std::mt19937_64 a(7);
  std::mt19937_64 b(7);
  const auto ra = reconstruct_superposition(event, CtfConfig{}, SuperpositionConfig{}, QuantumConfig{}, a);
  const auto rb = reconstruct_superposition(event, CtfConfig{}, SuperpositionConfig{}, QuantumConfig{}, b);
  EXPECT_EQ(ra.ledger, rb.ledger);
  EXPECT_EQ(ra.indices, rb.indices);
}

TEST(Superposition, EmptyEventFindsNothing) {
  EventRecord event;
  event.geometry = DetectorGeometry::uniform(5);
  event.hits.assign(5, {});
  std::mt19937_64 rng(8);
  const auto r = reconstruct_superposition(event, CtfConfig{}, SuperpositionConfig{}, QuantumConfig{}, rng);
  EXPECT_TRUE(r.tracks.empty());
  EXPECT_EQ(r.ledger.charge, 0u);
}
