#pragma once

#include <cstdint>

#include "json.hpp"

namespace ctf::quantum {

/// Monotone query counters. One Grover iteration is one oracle call plus one
/// diffusion; `charge` weights each oracle call by its simulated cost.
struct QueryLedger {
  std::uint64_t oracle_calls = 0;
  std::uint64_t diffusion_calls = 0;
  std::uint64_t classical_verifications = 0;
  std::uint64_t charge = 0;

  void grover_iterations(std::uint64_t m, std::uint64_t weight = 1) {
    oracle_calls += m;
    diffusion_calls += m;
    charge += m * weight;
  }

  void verify(std::uint64_t count = 1) { classical_verifications += count; }

  QueryLedger& operator+=(const QueryLedger& o) {
    oracle_calls += o.oracle_calls;
    diffusion_calls += o.diffusion_calls;
    classical_verifications += o.classical_verifications;
    charge += o.charge;
    return *this;
  }

  bool operator==(const QueryLedger&) const = default;
};

inline void to_json(nlohmann::json& j, const QueryLedger& l) {
  j = nlohmann::json{{"oracle_calls", l.oracle_calls},
                     {"diffusion_calls", l.diffusion_calls},
                     {"classical_verifications", l.classical_verifications},
                     {"charge", l.charge}};
}

inline void from_json(const nlohmann::json& j, QueryLedger& l) {
  j.at("oracle_calls").get_to(l.oracle_calls);
  j.at("diffusion_calls").get_to(l.diffusion_calls);
  j.at("classical_verifications").get_to(l.classical_verifications);
  l.charge = j.value("charge", l.oracle_calls);
}

}  // namespace ctf::quantum
