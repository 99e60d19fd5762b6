#pragma once

// All tunables as one JSON document. Missing keys keep their defaults;
// unknown keys are rejected.

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>

#include "ctf/config.hpp"
#include "ctf/event.hpp"
#include "ctf/io/event_io.hpp"
#include "json.hpp"

namespace ctf {

struct RunConfig {
  CtfConfig ctf;
  QuantumConfig quantum;
  GeneratorConfig generator;

  void validate() const {
    ctf.validate();
    quantum.validate();
    generator.validate();
  }
};

namespace detail {

inline void require_keys(const nlohmann::json& j, std::string_view where,
                         std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key " + std::string(where) + "." + key);
  }
}

template <class T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

inline nlohmann::json bounds_json(const HelixParams& h) {
  nlohmann::json j;
  to_json(j, h);
  return j;
}

inline void read_bounds(const nlohmann::json& j, std::string_view where, HelixParams& h) {
  require_keys(j, where, {"d0", "z0", "phi0", "cot_theta", "kappa"});
  read_opt(j, "d0", h.d0);
  read_opt(j, "z0", h.z0);
  read_opt(j, "phi0", h.phi0);
  read_opt(j, "cot_theta", h.cot_theta);
  read_opt(j, "kappa", h.kappa);
}

}  // namespace detail

inline nlohmann::json config_to_json(const RunConfig& c) {
  const auto& k = c.ctf.kalman;
  nlohmann::json seed_sigma = nullptr;
  if (k.seed_sigma) seed_sigma = *k.seed_sigma;
  const auto& g = c.generator;
  return {
      {"kalman",
       {{"meas_sigma_u", k.meas_sigma_u},
        {"meas_sigma_z", k.meas_sigma_z},
        {"process_noise", k.process_noise},
        {"process_scale", k.process_scale},
        {"seed_sigma", seed_sigma}}},
      {"cuts",
       {{"min_radius", c.ctf.cuts.min_radius},
        {"max_d0", c.ctf.cuts.max_d0},
        {"max_z0", c.ctf.cuts.max_z0},
        {"enabled", c.ctf.cuts.enabled}}},
      {"ctf",
       {{"chi2_0", c.ctf.chi2_0},
        {"lambda", c.ctf.lambda},
        {"max_ghosts", c.ctf.max_ghosts},
        {"omega", c.ctf.omega},
        {"chi2_cap_per_layer", c.ctf.chi2_cap_per_layer},
        {"share_fraction", c.ctf.share_fraction},
        {"quality_threshold", c.ctf.quality_threshold}}},
      {"quantum",
       {{"bbht_growth", c.quantum.bbht_growth},
        {"bbht_cutoff", c.quantum.bbht_cutoff},
        {"dh_budget", c.quantum.dh_budget},
        {"count_precision", c.quantum.count_precision},
        {"epsilon", c.quantum.epsilon},
        {"oracle_cost", c.quantum.oracle_cost}}},
      {"generator",
       {{"bounds_lo", detail::bounds_json(g.bounds.lo)},
        {"bounds_hi", detail::bounds_json(g.bounds.hi)},
        {"distribution", g.distribution == Distribution::kUniform ? "uniform" : "clustered"},
        {"clusters", g.clusters},
        {"cluster_width", g.cluster_width},
        {"hit_sigma", g.hit_sigma},
        {"efficiency", g.efficiency},
        {"adversarial_width", g.adversarial_width}}}};
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  using detail::read_opt;
  using detail::require_keys;
  RunConfig c;
  try {
    require_keys(j, "config", {"kalman", "cuts", "ctf", "quantum", "generator"});
    if (j.contains("kalman")) {
      const auto& k = j["kalman"];
      require_keys(k, "kalman",
                   {"meas_sigma_u", "meas_sigma_z", "process_noise", "process_scale", "seed_sigma"});
      auto& kc = c.ctf.kalman;
      read_opt(k, "meas_sigma_u", kc.meas_sigma_u);
      read_opt(k, "meas_sigma_z", kc.meas_sigma_z);
      read_opt(k, "process_noise", kc.process_noise);
      read_opt(k, "process_scale", kc.process_scale);
      if (k.contains("seed_sigma") && !k["seed_sigma"].is_null()) {
        kc.seed_sigma = k["seed_sigma"].get<std::array<double, 5>>();
      }
    }
    if (j.contains("cuts")) {
      const auto& s = j["cuts"];
      require_keys(s, "cuts", {"min_radius", "max_d0", "max_z0", "enabled"});
      read_opt(s, "min_radius", c.ctf.cuts.min_radius);
      read_opt(s, "max_d0", c.ctf.cuts.max_d0);
      read_opt(s, "max_z0", c.ctf.cuts.max_z0);
      read_opt(s, "enabled", c.ctf.cuts.enabled);
    }
    if (j.contains("ctf")) {
      const auto& s = j["ctf"];
      require_keys(s, "ctf",
                   {"chi2_0", "lambda", "max_ghosts", "omega", "chi2_cap_per_layer",
                    "share_fraction", "quality_threshold"});
      read_opt(s, "chi2_0", c.ctf.chi2_0);
      read_opt(s, "lambda", c.ctf.lambda);
      read_opt(s, "max_ghosts", c.ctf.max_ghosts);
      read_opt(s, "omega", c.ctf.omega);
      read_opt(s, "chi2_cap_per_layer", c.ctf.chi2_cap_per_layer);
      read_opt(s, "share_fraction", c.ctf.share_fraction);
      read_opt(s, "quality_threshold", c.ctf.quality_threshold);
    }
    if (j.contains("quantum")) {
      const auto& s = j["quantum"];
      require_keys(s, "quantum",
                   {"bbht_growth", "bbht_cutoff", "dh_budget", "count_precision", "epsilon",
                    "oracle_cost"});
      read_opt(s, "bbht_growth", c.quantum.bbht_growth);
      read_opt(s, "bbht_cutoff", c.quantum.bbht_cutoff);
      read_opt(s, "dh_budget", c.quantum.dh_budget);
      read_opt(s, "count_precision", c.quantum.count_precision);
      read_opt(s, "epsilon", c.quantum.epsilon);
      read_opt(s, "oracle_cost", c.quantum.oracle_cost);
    }
    if (j.contains("generator")) {
      const auto& s = j["generator"];
      require_keys(s, "generator",
                   {"bounds_lo", "bounds_hi", "distribution", "clusters", "cluster_width",
                    "hit_sigma", "efficiency", "adversarial_width"});
      auto& g = c.generator;
      if (s.contains("bounds_lo")) detail::read_bounds(s["bounds_lo"], "generator.bounds_lo", g.bounds.lo);
      if (s.contains("bounds_hi")) detail::read_bounds(s["bounds_hi"], "generator.bounds_hi", g.bounds.hi);
      if (s.contains("distribution")) {
        const auto d = s["distribution"].get<std::string>();
        if (d == "uniform") {
          g.distribution = Distribution::kUniform;
        } else if (d == "clustered") {
          g.distribution = Distribution::kClustered;
        } else {
          throw ConfigError("unknown distribution " + d);
        }
      }
      read_opt(s, "clusters", g.clusters);
      read_opt(s, "cluster_width", g.cluster_width);
      read_opt(s, "hit_sigma", g.hit_sigma);
      read_opt(s, "efficiency", g.efficiency);
      read_opt(s, "adversarial_width", g.adversarial_width);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

inline RunConfig read_config(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace ctf
