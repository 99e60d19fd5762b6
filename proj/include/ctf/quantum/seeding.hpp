#pragma once

// Quantum seeding: count the good triplets, then sample them with amplified
// Grover runs until every one has been seen.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <unordered_set>
#include <vector>

#include "ctf/config.hpp"
#include "ctf/event.hpp"
#include "ctf/quantum/ledger.hpp"
#include "ctf/quantum/search.hpp"
#include "ctf/seeding.hpp"

namespace ctf::quantum {

/// Triplet index space [0, n^3) of an event; an index is marked iff its
/// triplet exists and passes the seeding stage. The marked set and its fits
/// are tabulated once at construction; reading them is the simulated oracle.
class SeedSearchOracle {
 public:
  SeedSearchOracle(const EventRecord& event, const CtfConfig& config)
      : base_(seed_index_base(event)),
        space_(build(event, config, base_, seeds_)) {}

  std::uint64_t size() const { return space_.size(); }
  std::uint64_t marked_count() const { return space_.marked_count(); }
  bool is_marked(std::uint64_t i) const { return space_.is_marked(i); }
  std::uint64_t sample_marked(std::mt19937_64& rng) const { return space_.sample_marked(rng); }
  std::uint64_t sample_unmarked(std::mt19937_64& rng) const { return space_.sample_unmarked(rng); }

  std::size_t base() const { return base_; }
  std::array<std::int32_t, 3> triplet(std::uint64_t i) const { return seed_triplet(i, base_); }

  /// Fitted seed of a marked index.
  const Seed& seed(std::uint64_t i) const {
    const auto& m = space_.marked();
    const auto it = std::lower_bound(m.begin(), m.end(), i);
    if (it == m.end() || *it != i) throw DataError("index is not a good seed");
    return seeds_[static_cast<std::size_t>(it - m.begin())];
  }

  /// All good seeds in index order.
  const std::vector<Seed>& seeds() const { return seeds_; }

 private:
  static MarkedSetSpace build(const EventRecord& event, const CtfConfig& config, std::size_t base,
                              std::vector<Seed>& seeds) {
    if (event.num_layers() < 3) throw DataError("seeding needs at least 3 layers");
    seeds = generate_seeds(event, config);
    std::vector<std::uint64_t> marked;
    marked.reserve(seeds.size());
    for (const Seed& s : seeds) marked.push_back(s.id);
    const auto b = static_cast<std::uint64_t>(base);
    return MarkedSetSpace(b * b * b, std::move(marked));
  }

  std::size_t base_;
  std::vector<Seed> seeds_;
  MarkedSetSpace space_;
};

struct QuantumSeedResult {
  std::vector<Seed> seeds;
  QueryLedger ledger;
  std::uint64_t count_estimate = 0;
  std::uint64_t iterations = 0;
  std::uint64_t samples = 0;
  /// False when the collection loop hit its sample limit.
  bool complete = true;
};

/// Sample limit of the collection loop for k expected items.
inline std::uint64_t collection_limit(std::uint64_t k) {
  return static_cast<std::uint64_t>(
      std::ceil(10.0 * static_cast<double>(k) * std::log(static_cast<double>(k) + 2.0)));
}

/// Collects distinct good seeds until the counted number is reached. Every
/// sample is verified classically; the output is sorted by index.
inline QuantumSeedResult q_generate_seeds(const SeedSearchOracle& oracle,
                                          const QuantumConfig& qconfig, std::mt19937_64& rng) {
  qconfig.validate();
  QuantumSeedResult out;
  if (oracle.size() == 0) return out;
  const CountResult count = quantum_count(oracle, rng, out.ledger, qconfig.count_precision);
  out.count_estimate = count.estimate;
  if (count.estimate == 0) return out;
  out.iterations = optimal_iterations(oracle.size(), count.estimate);
  const std::uint64_t limit = collection_limit(count.estimate);
  std::unordered_set<std::uint64_t> found;
  while (found.size() < count.estimate) {
    if (out.samples == limit) {
      out.complete = false;
      break;
    }
    const std::uint64_t x = grover_sample(oracle, out.iterations, rng, out.ledger);
    ++out.samples;
    out.ledger.verify();
    if (oracle.is_marked(x)) found.insert(x);
  }
  std::vector<std::uint64_t> ids(found.begin(), found.end());
  std::sort(ids.begin(), ids.end());
  out.seeds.reserve(ids.size());
  for (std::uint64_t i : ids) out.seeds.push_back(oracle.seed(i));
  return out;
}

inline QuantumSeedResult q_generate_seeds(const EventRecord& event, const CtfConfig& config,
                                          const QuantumConfig& qconfig, std::mt19937_64& rng) {
  return q_generate_seeds(SeedSearchOracle(event, config), qconfig, rng);
}

}  // namespace ctf::quantum
