#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ctf/event.hpp"
#include "ctf/io/config_io.hpp"
#include "ctf/io/event_io.hpp"
#include "ctf/io/track_io.hpp"
#include "ctf/pipeline.hpp"

using namespace ctf;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("ctf_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(EventIo, JsonRoundTripIsExact) {
  GeneratorConfig g;
  g.n = 25;
  g.rng_seed = 70;
  g.efficiency = 0.9;
  const auto event = generate_event(g, DetectorGeometry::uniform(7));
  const auto path = temp_file("event.json");
  write_event_json(event, path);
  EXPECT_EQ(read_event_json(path), event);
  fs::remove(path);

  EventRecord stripped = event;
  stripped.truth.reset();
  EXPECT_EQ(event_from_json(event_to_json(stripped)), stripped);
}

TEST(EventIo, CsvHasOneLinePerHit) {
  GeneratorConfig g;
  g.n = 10;
  const auto event = generate_event(g, DetectorGeometry::uniform(5));
  const auto csv = event_to_csv(event);
  std::size_t hits = 0;
  for (const auto& l : event.hits) hits += l.size();
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), hits + 1);
  EXPECT_EQ(csv.rfind("layer,index,x,y,z,particle\n", 0), 0u);
}

TEST(EventIo, MalformedInputIsDataError) {
  EXPECT_THROW(event_from_json(nlohmann::json::parse(R"({"hits": []})")), DataError);
  EXPECT_THROW(event_from_json(nlohmann::json::parse(
                   R"({"geometry": {"layer_radii": [1, 2, 3, 4]}, "hits": [[], []]})")),
               DataError);
  EXPECT_THROW(event_from_json(nlohmann::json::parse(
                   R"({"geometry": {"layer_radii": [4, 3, 2, 1]}, "hits": [[], [], [], []]})")),
               DataError);
  const auto path = temp_file("broken.json");
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(read_event_json(path), DataError);
  EXPECT_THROW(read_tracks_json(path), DataError);
  fs::remove(path);
  EXPECT_THROW(read_event_json(temp_file("missing.json")), DataError);
}

TEST(ConfigIo, RoundTripAndDefaults) {
  RunConfig c;
  c.ctf.lambda = 3;
  c.ctf.kalman.seed_sigma = std::array<double, 5>{1, 2, 3, 4, 5};
  c.quantum.epsilon = 0.01;
  c.generator.distribution = Distribution::kClustered;
  c.generator.bounds.hi.kappa = 0.002;
  const auto back = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  EXPECT_EQ(back.ctf.lambda, 3u);
  EXPECT_EQ(config_to_json(config_from_json(nlohmann::json::object())), config_to_json(RunConfig{}));
}

TEST(ConfigIo, RejectsUnknownAndInvalid) {
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"ctf": {"lamda": 2}})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"extra": {}})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"ctf": {"lambda": "two"}})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"quantum": {"bbht_growth": 2.0}})")),
               ConfigError);
  const auto path = temp_file("bad_config.json");
  std::ofstream(path) << "[1, 2";
  EXPECT_THROW(read_config(path), ConfigError);
  fs::remove(path);
}

TEST(TrackIo, RoundTripKeepsHitsAndScores) {
  GeneratorConfig g;
  g.n = 15;
  const auto event = generate_event(g, DetectorGeometry::uniform(8));
  const auto tracks = run_pipeline(event, CtfConfig{}, CleaningVariant::kImproved).tracks;
  ASSERT_FALSE(tracks.empty());
  const auto path = temp_file("tracks.json");
  write_tracks_json(tracks, path);
  const auto back = read_tracks_json(path);
  fs::remove(path);
  ASSERT_EQ(back.size(), tracks.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].hits, tracks[i].hits);
    EXPECT_EQ(back[i].quality, tracks[i].quality);
    EXPECT_EQ(back[i].chi2_total, tracks[i].chi2_total);
    EXPECT_EQ(back[i].m_ghost, tracks[i].m_ghost);
    EXPECT_EQ(back[i].seed_id, tracks[i].seed_id);
  }
  const auto csv = tracks_to_csv(tracks);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), 1 + 8 * tracks.size());
}
