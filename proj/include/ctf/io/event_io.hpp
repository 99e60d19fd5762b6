#pragma once

// Event records as JSON (geometry, hits, optional truth) or as a flat hit CSV.
// Doubles are written with 17 significant digits and round-trip exactly.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ctf/errors.hpp"
#include "ctf/event.hpp"
#include "json.hpp"

namespace ctf {

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed: " + path.string());
}

inline nlohmann::json parse_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const HelixParams& h) {
  j = {{"d0", h.d0}, {"z0", h.z0}, {"phi0", h.phi0}, {"cot_theta", h.cot_theta}, {"kappa", h.kappa}};
}

inline void from_json(const nlohmann::json& j, HelixParams& h) {
  j.at("d0").get_to(h.d0);
  j.at("z0").get_to(h.z0);
  j.at("phi0").get_to(h.phi0);
  j.at("cot_theta").get_to(h.cot_theta);
  j.at("kappa").get_to(h.kappa);
}

inline nlohmann::json event_to_json(const EventRecord& event) {
  nlohmann::json hits = nlohmann::json::array();
  for (const auto& layer : event.hits) {
    nlohmann::json l = nlohmann::json::array();
    for (const Point3& p : layer) l.push_back({p.x(), p.y(), p.z()});
    hits.push_back(std::move(l));
  }
  nlohmann::json j = {
      {"geometry",
       {{"layer_radii", event.geometry.layer_radii}, {"half_length", event.geometry.half_length}}},
      {"hits", std::move(hits)}};
  if (event.truth) {
    j["truth"] = {{"particles", event.truth->particles},
                  {"hit_particle", event.truth->hit_particle}};
  }
  return j;
}

inline EventRecord event_from_json(const nlohmann::json& j) {
  EventRecord event;
  try {
    j.at("geometry").at("layer_radii").get_to(event.geometry.layer_radii);
    event.geometry.half_length = j.at("geometry").value("half_length", 200.0);
    for (const auto& layer : j.at("hits")) {
      std::vector<Point3> l;
      for (const auto& p : layer) {
        if (p.size() != 3) throw DataError("hit must have 3 coordinates");
        l.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
      }
      event.hits.push_back(std::move(l));
    }
    if (j.contains("truth")) {
      EventTruth truth;
      j["truth"].at("particles").get_to(truth.particles);
      j["truth"].at("hit_particle").get_to(truth.hit_particle);
      event.truth = std::move(truth);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad event JSON: ") + e.what());
  }
  try {
    event.geometry.validate();
  } catch (const ConfigError& e) {
    throw DataError(e.what());
  }
  if (event.hits.size() != event.geometry.num_layers()) {
    throw DataError("hit layers do not match geometry");
  }
  if (event.truth) {
    if (event.truth->hit_particle.size() != event.hits.size()) {
      throw DataError("truth layers do not match hits");
    }
    for (std::size_t l = 0; l < event.hits.size(); ++l) {
      if (event.truth->hit_particle[l].size() != event.hits[l].size()) {
        throw DataError("truth hit count does not match layer " + std::to_string(l));
      }
    }
  }
  return event;
}

inline void write_event_json(const EventRecord& event, const std::filesystem::path& path) {
  detail::write_file(path, event_to_json(event).dump(1) + "\n");
}

inline EventRecord read_event_json(const std::filesystem::path& path) {
  return event_from_json(detail::parse_json(detail::read_file(path)));
}

/// One line per hit: layer,index,x,y,z,particle (particle -1 without truth).
inline std::string event_to_csv(const EventRecord& event) {
  std::string out = "layer,index,x,y,z,particle\n";
  for (std::size_t l = 0; l < event.hits.size(); ++l) {
    for (std::size_t j = 0; j < event.hits[l].size(); ++j) {
      const Point3& p = event.hits[l][j];
      const std::int64_t pid = event.truth ? event.truth->hit_particle[l][j] : -1;
      out += std::to_string(l) + "," + std::to_string(j) + "," + detail::format_double(p.x()) +
             "," + detail::format_double(p.y()) + "," + detail::format_double(p.z()) + "," +
             std::to_string(pid) + "\n";
    }
  }
  return out;
}

inline void write_event_csv(const EventRecord& event, const std::filesystem::path& path) {
  detail::write_file(path, event_to_csv(event));
}

}  // namespace ctf
