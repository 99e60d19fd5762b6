#pragma once

// Outcome-distribution simulation of Grover search and its descendants.
//
// For a uniform start state and a phase oracle the state stays in the plane
// spanned by the uniform superpositions over marked and unmarked indices, so
// a measurement after m iterations is a marked index with probability
// sin^2((2m+1) theta), sin^2 theta = t/N, uniform within each class. The
// simulators draw from these distributions and charge the ledger instead of
// evolving state vectors.

#include <algorithm>
#include <bit>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "ctf/config.hpp"
#include "ctf/errors.hpp"
#include "ctf/quantum/ledger.hpp"

namespace ctf::quantum {

class EmptySpaceError : public Error {
 public:
  EmptySpaceError() : Error("search space is empty") {}
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// theta with sin^2 theta = t / N.
inline double grover_angle(std::uint64_t n, std::uint64_t t) {
  if (n == 0) throw EmptySpaceError();
  return std::asin(std::sqrt(static_cast<double>(t) / static_cast<double>(n)));
}

/// floor(pi / (4 theta)), the iteration count maximizing success for known t.
inline std::uint64_t optimal_iterations(std::uint64_t n, std::uint64_t t) {
  if (t == 0) return 0;
  return static_cast<std::uint64_t>(std::floor(std::numbers::pi / (4.0 * grover_angle(n, t))));
}

inline double grover_success_prob(std::uint64_t n, std::uint64_t t, std::uint64_t m) {
  if (t == 0) return 0.0;
  const double s = std::sin((2.0 * static_cast<double>(m) + 1.0) * grover_angle(n, t));
  return s * s;
}

template <class S>
concept SearchSpace = requires(const S& s, std::mt19937_64& rng, std::uint64_t i) {
  { s.size() } -> std::convertible_to<std::uint64_t>;
  { s.marked_count() } -> std::convertible_to<std::uint64_t>;
  { s.is_marked(i) } -> std::convertible_to<bool>;
  { s.sample_marked(rng) } -> std::convertible_to<std::uint64_t>;
  { s.sample_unmarked(rng) } -> std::convertible_to<std::uint64_t>;
};

namespace detail {

/// r-th (0-based) element of [0, n) not in the sorted list `excluded`.
inline std::uint64_t select_unlisted(const std::vector<std::uint64_t>& excluded, std::uint64_t r) {
  // Smallest i with excluded[i] - i > r; the answer is r + i.
  std::size_t lo = 0;
  std::size_t hi = excluded.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (excluded[mid] - mid > r) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return r + lo;
}

inline std::uint64_t uniform_below(std::uint64_t n, std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

}  // namespace detail

/// Index space [0, N) with an explicit marked set.
class MarkedSetSpace {
 public:
  MarkedSetSpace(std::uint64_t n, std::vector<std::uint64_t> marked)
      : n_(n), marked_(std::move(marked)) {
    std::sort(marked_.begin(), marked_.end());
    marked_.erase(std::unique(marked_.begin(), marked_.end()), marked_.end());
    if (!marked_.empty() && marked_.back() >= n_) throw ConfigError("marked index out of range");
  }

  template <class Pred>
  static MarkedSetSpace from_predicate(std::uint64_t n, Pred&& pred) {
    std::vector<std::uint64_t> marked;
    for (std::uint64_t i = 0; i < n; ++i) {
      if (pred(i)) marked.push_back(i);
    }
    return MarkedSetSpace(n, std::move(marked));
  }

  std::uint64_t size() const { return n_; }
  std::uint64_t marked_count() const { return marked_.size(); }
  bool is_marked(std::uint64_t i) const {
    return std::binary_search(marked_.begin(), marked_.end(), i);
  }
  std::uint64_t sample_marked(std::mt19937_64& rng) const {
    return marked_[detail::uniform_below(marked_.size(), rng)];
  }
  std::uint64_t sample_unmarked(std::mt19937_64& rng) const {
    return detail::select_unlisted(marked_, detail::uniform_below(n_ - marked_.size(), rng));
  }
  const std::vector<std::uint64_t>& marked() const { return marked_; }

 private:
  std::uint64_t n_;
  std::vector<std::uint64_t> marked_;
};

/// Index space [0, N) with a key per index (+inf unless listed) and a
/// threshold y; index i is marked iff key(i) < y.
class KeyedSpace {
 public:
  KeyedSpace(std::uint64_t n, std::vector<std::pair<std::uint64_t, double>> finite) : n_(n) {
    std::sort(finite.begin(), finite.end());
    for (const auto& [i, k] : finite) {
      if (i >= n_) throw ConfigError("key index out of range");
      if (std::isnan(k)) throw ConfigError("NaN key");
      if (!index_.empty() && index_.back() == i) throw ConfigError("duplicate key index");
      if (k == kInf) continue;
      index_.push_back(i);
      key_of_index_.push_back(k);
      by_key_.emplace_back(k, i);
    }
    std::sort(by_key_.begin(), by_key_.end());
    set_threshold(kInf);
  }

  static KeyedSpace dense(const std::vector<double>& keys) {
    std::vector<std::pair<std::uint64_t, double>> finite;
    finite.reserve(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) finite.emplace_back(i, keys[i]);
    return KeyedSpace(keys.size(), std::move(finite));
  }

  void set_threshold(double y) {
    threshold_ = y;
    marked_ = static_cast<std::uint64_t>(
        std::lower_bound(by_key_.begin(), by_key_.end(), std::make_pair(y, std::uint64_t{0})) -
        by_key_.begin());
  }

  double threshold() const { return threshold_; }

  double key(std::uint64_t i) const {
    const auto it = std::lower_bound(index_.begin(), index_.end(), i);
    if (it == index_.end() || *it != i) return kInf;
    return key_of_index_[static_cast<std::size_t>(it - index_.begin())];
  }

  /// Raises the key of index i to +inf.
  void lift(std::uint64_t i) {
    const auto it = std::lower_bound(index_.begin(), index_.end(), i);
    if (it == index_.end() || *it != i) return;
    const auto pos = static_cast<std::size_t>(it - index_.begin());
    const double k = key_of_index_[pos];
    index_.erase(it);
    key_of_index_.erase(key_of_index_.begin() + static_cast<std::ptrdiff_t>(pos));
    by_key_.erase(std::lower_bound(by_key_.begin(), by_key_.end(), std::make_pair(k, i)));
    set_threshold(threshold_);
  }

  std::uint64_t size() const { return n_; }
  std::uint64_t marked_count() const { return marked_; }
  std::uint64_t finite_count() const { return by_key_.size(); }
  bool is_marked(std::uint64_t i) const { return key(i) < threshold_; }

  std::uint64_t sample_marked(std::mt19937_64& rng) const {
    return by_key_[detail::uniform_below(marked_, rng)].second;
  }
  std::uint64_t sample_unmarked(std::mt19937_64& rng) const {
    const std::uint64_t finite_unmarked = by_key_.size() - marked_;
    const std::uint64_t r = detail::uniform_below(n_ - marked_, rng);
    if (r < finite_unmarked) return by_key_[marked_ + r].second;
    return detail::select_unlisted(index_, r - finite_unmarked);
  }

  /// Index with the smallest key (ties by index), if any key is finite.
  std::optional<std::uint64_t> argmin() const {
    if (by_key_.empty()) return std::nullopt;
    return by_key_.front().second;
  }

 private:
  std::uint64_t n_;
  std::vector<std::uint64_t> index_;
  std::vector<double> key_of_index_;
  std::vector<std::pair<double, std::uint64_t>> by_key_;
  double threshold_ = kInf;
  std::uint64_t marked_ = 0;
};

/// Measurement after m Grover iterations; charges m oracle calls of the given
/// weight. With probability epsilon the run lands in the error branch and
/// returns an unmarked index.
template <SearchSpace S>
std::uint64_t grover_sample(const S& space, std::uint64_t m, std::mt19937_64& rng,
                            QueryLedger& ledger, double epsilon = 0.0, std::uint64_t weight = 1) {
  const std::uint64_t n = space.size();
  if (n == 0) throw EmptySpaceError();
  const std::uint64_t t = space.marked_count();
  ledger.grover_iterations(m, weight);
  if (epsilon > 0.0 && t < n && std::bernoulli_distribution(epsilon)(rng)) {
    return space.sample_unmarked(rng);
  }
  const bool hit = std::bernoulli_distribution(grover_success_prob(n, t, m))(rng);
  if (t == n || (hit && t > 0)) return space.sample_marked(rng);
  return space.sample_unmarked(rng);
}

struct SearchOptions {
  double growth = 1.2;
  /// Default charge cutoff in units of sqrt(N).
  double cutoff_factor = 8.0;
  double epsilon = 0.0;
  std::uint64_t weight = 1;

  static SearchOptions from(const QuantumConfig& q, std::uint64_t weight = 1) {
    return {q.bbht_growth, q.bbht_cutoff, q.epsilon, weight};
  }
};

/// Exponential search with unknown t: bound M grows by `growth` up to sqrt(N);
/// each round runs j ~ U[0, ceil(M)) iterations and verifies the outcome
/// classically. Gives up when the next round would push the oracle-call count
/// past the cutoff (default cutoff_factor * sqrt(N)).
template <SearchSpace S>
std::optional<std::uint64_t> exponential_search(const S& space, std::mt19937_64& rng,
                                                QueryLedger& ledger,
                                                const SearchOptions& options = {},
                                                std::optional<double> cutoff = std::nullopt) {
  const std::uint64_t n = space.size();
  if (n == 0) throw EmptySpaceError();
  const double root = std::sqrt(static_cast<double>(n));
  const double limit = cutoff.value_or(options.cutoff_factor * root);
  const auto max_rounds = static_cast<std::uint64_t>(std::ceil(std::max(limit, 0.0))) + 1;
  double bound = 1.0;
  std::uint64_t spent = 0;
  for (std::uint64_t round = 0; round < max_rounds; ++round) {
    const auto span = static_cast<std::uint64_t>(std::ceil(bound));
    const std::uint64_t j = detail::uniform_below(span, rng);
    if (static_cast<double>(spent + j) > limit) break;
    const std::uint64_t x = grover_sample(space, j, rng, ledger, options.epsilon, options.weight);
    spent += j;
    ledger.verify();
    if (space.is_marked(x)) return x;
    bound = std::min(options.growth * bound, root);
  }
  return std::nullopt;
}

namespace detail {

/// Fejer kernel |sum_k exp(2 pi i k d)|^2 / M^2 at offset d.
inline double fejer(double d, std::uint64_t m) {
  const double s = std::sin(std::numbers::pi * d);
  if (std::abs(s) < 1e-300) return 1.0;
  const double num = std::sin(std::numbers::pi * static_cast<double>(m) * d);
  const double mm = static_cast<double>(m);
  return (num * num) / (mm * mm * s * s);
}

/// Phase-estimation readout y in [0, M) for eigenphase omega (in turns).
inline std::uint64_t sample_phase(double omega, std::uint64_t m, std::mt19937_64& rng) {
  constexpr std::uint64_t kExact = 65536;
  constexpr std::int64_t kWindow = 4096;
  const double mm = static_cast<double>(m);
  if (m <= kExact) {
    std::vector<double> w(m);
    for (std::uint64_t y = 0; y < m; ++y) w[y] = fejer(omega - static_cast<double>(y) / mm, m);
    std::discrete_distribution<std::uint64_t> dist(w.begin(), w.end());
    return dist(rng);
  }
  const auto centre = static_cast<std::int64_t>(std::llround(omega * mm));
  const auto mi = static_cast<std::int64_t>(m);
  std::vector<double> w;
  std::vector<std::uint64_t> ys;
  double mass = 0.0;
  for (std::int64_t k = -kWindow; k <= kWindow; ++k) {
    const std::uint64_t y = static_cast<std::uint64_t>(((centre + k) % mi + mi) % mi);
    const double p = fejer(omega - static_cast<double>(y) / mm, m);
    ys.push_back(y);
    w.push_back(p);
    mass += p;
  }
  if (std::bernoulli_distribution(std::min(mass, 1.0))(rng)) {
    std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
    return ys[dist(rng)];
  }
  // Tail outside the window, drawn uniformly.
  const std::uint64_t outside = m - ys.size();
  const std::uint64_t r = uniform_below(outside, rng);
  const std::uint64_t start = static_cast<std::uint64_t>(((centre + kWindow + 1) % mi + mi) % mi);
  return (start + r) % m;
}

}  // namespace detail

struct CountResult {
  std::uint64_t estimate = 0;
  std::uint64_t rounds = 0;
  std::uint64_t register_size = 0;
};

/// Quantum counting by phase estimation of the Grover iterate. The register
/// size M starts at the smallest power of two >= ceil(sqrt(N)) and doubles
/// until M >= precision * sqrt((t + 1)(N - t + 1)) for the current estimate t;
/// each round charges M oracle calls.
template <SearchSpace S>
CountResult quantum_count(const S& space, std::mt19937_64& rng, QueryLedger& ledger,
                          double precision = 20.0) {
  const std::uint64_t n = space.size();
  if (n == 0) throw EmptySpaceError();
  const double omega = grover_angle(n, space.marked_count()) / std::numbers::pi;
  const auto root = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  std::uint64_t m = std::bit_ceil(std::max<std::uint64_t>(root, 1));
  const double nd = static_cast<double>(n);
  CountResult out;
  while (true) {
    ledger.grover_iterations(m);
    ++out.rounds;
    const std::uint64_t y = detail::sample_phase(omega, m, rng);
    const double s = std::sin(std::numbers::pi * static_cast<double>(y) / static_cast<double>(m));
    const auto est = std::min<std::uint64_t>(n, static_cast<std::uint64_t>(std::llround(nd * s * s)));
    const double target = precision * std::sqrt((static_cast<double>(est) + 1.0) *
                                                 (nd - static_cast<double>(est) + 1.0));
    if (static_cast<double>(m) >= target) {
      out.estimate = est;
      out.register_size = m;
      return out;
    }
    m *= 2;
  }
}

/// Minimum finding with running threshold y (initially y0) under a hard
/// budget of ceil(budget_factor * sqrt(N)) oracle calls. Returns the last
/// index found below the threshold, or nullopt when nothing below y0 was found.
inline std::optional<std::uint64_t> durr_hoyer_min(KeyedSpace& space, double y0,
                                                   std::mt19937_64& rng, QueryLedger& ledger,
                                                   const SearchOptions& options = {},
                                                   double budget_factor = 22.5) {
  const std::uint64_t n = space.size();
  if (n == 0) throw EmptySpaceError();
  const double budget = std::ceil(budget_factor * std::sqrt(static_cast<double>(n)));
  const std::uint64_t start = ledger.oracle_calls;
  std::optional<std::uint64_t> best;
  double y = y0;
  while (static_cast<double>(ledger.oracle_calls - start) < budget) {
    space.set_threshold(y);
    const double remaining = budget - static_cast<double>(ledger.oracle_calls - start);
    const auto found = exponential_search(space, rng, ledger, options, remaining);
    if (!found) break;
    best = *found;
    y = space.key(*found);
  }
  return best;
}

}  // namespace ctf::quantum
