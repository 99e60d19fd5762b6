#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ctf/io/event_io.hpp"
#include "ctf/track.hpp"
#include "json.hpp"

namespace ctf {

inline nlohmann::json tracks_to_json(const std::vector<TrackCandidate>& tracks) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : tracks) {
    arr.push_back({{"hits", t.hits},
                   {"quality", t.quality},
                   {"chi2_total", t.chi2_total},
                   {"m_ghost", t.m_ghost},
                   {"seed_id", t.seed_id}});
  }
  return {{"tracks", std::move(arr)}};
}

/// Reads hit lists and scores; states and covariances are not stored.
inline std::vector<TrackCandidate> tracks_from_json(const nlohmann::json& j) {
  std::vector<TrackCandidate> out;
  try {
    for (const auto& t : j.at("tracks")) {
      TrackCandidate c;
      t.at("hits").get_to(c.hits);
      c.quality = t.value("quality", 0.0);
      c.chi2_total = t.value("chi2_total", 0.0);
      c.m_ghost = t.value("m_ghost", static_cast<std::size_t>(0));
      c.seed_id = t.value("seed_id", static_cast<std::uint64_t>(0));
      out.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad track JSON: ") + e.what());
  }
  return out;
}

inline void write_tracks_json(const std::vector<TrackCandidate>& tracks,
                              const std::filesystem::path& path) {
  detail::write_file(path, tracks_to_json(tracks).dump(1) + "\n");
}

inline std::vector<TrackCandidate> read_tracks_json(const std::filesystem::path& path) {
  return tracks_from_json(detail::parse_json(detail::read_file(path)));
}

/// One line per track and layer: track,layer,hit,quality,chi2_total.
inline std::string tracks_to_csv(const std::vector<TrackCandidate>& tracks) {
  std::string out = "track,layer,hit,quality,chi2_total\n";
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    for (std::size_t l = 0; l < tracks[i].hits.size(); ++l) {
      out += std::to_string(i) + "," + std::to_string(l) + "," + std::to_string(tracks[i].hits[l]) +
             "," + detail::format_double(tracks[i].quality) + "," +
             detail::format_double(tracks[i].chi2_total) + "\n";
    }
  }
  return out;
}

inline void write_tracks_csv(const std::vector<TrackCandidate>& tracks,
                             const std::filesystem::path& path) {
  detail::write_file(path, tracks_to_csv(tracks));
}

}  // namespace ctf
