#pragma once

// Duplicate removal among candidate tracks.
//
// Two tracks conflict when shared / min(N1, N2) > f, with N the number of real
// hits. For r(N) = floor(f N) + 1 this is equivalent to sharing at least
// min(r1, r2) hits, which the r-tuple forest detects with O(1) ordered-set
// lookups per track.

#include <algorithm>
#include <array>
#include <compare>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "ctf/errors.hpp"
#include "ctf/track.hpp"

namespace ctf {

/// Placeholder entry of an r-tuple; orders before every hit index and sentinel.
inline constexpr std::int64_t kBlank = std::numeric_limits<std::int64_t>::min();
inline constexpr std::size_t kMaxTupleLength = 16;

/// Fixed-capacity track vector with blanks, ordered lexicographically.
struct RTupleKey {
  std::array<std::int64_t, kMaxTupleLength> entries{};
  std::uint8_t length = 0;
  std::uint8_t r = 0;

  std::int64_t operator[](std::size_t i) const { return entries[i]; }

  friend bool operator==(const RTupleKey& a, const RTupleKey& b) {
    return a.length == b.length &&
           std::equal(a.entries.begin(), a.entries.begin() + a.length, b.entries.begin());
  }
  friend std::strong_ordering operator<=>(const RTupleKey& a, const RTupleKey& b) {
    if (a.length != b.length) return a.length <=> b.length;
    for (std::size_t i = 0; i < a.length; ++i) {
      if (a.entries[i] != b.entries[i]) return a.entries[i] <=> b.entries[i];
    }
    return std::strong_ordering::equal;
  }
};

/// Hit indices of a track with every ghost replaced by -2 - ordinal, so that
/// ghosts of different tracks never compare equal.
inline std::vector<std::int64_t> track_vector(const TrackCandidate& t, std::size_t ordinal) {
  std::vector<std::int64_t> v(t.hits.size());
  const std::int64_t sentinel = -2 - static_cast<std::int64_t>(ordinal);
  for (std::size_t l = 0; l < t.hits.size(); ++l) {
    v[l] = t.hits[l] == kGhost ? sentinel : t.hits[l];
  }
  return v;
}

/// All binom(L, r) r-tuples, positions chosen in lexicographic order.
inline std::vector<RTupleKey> r_tuples(const std::vector<std::int64_t>& vec, std::size_t r) {
  const std::size_t len = vec.size();
  if (len > kMaxTupleLength) throw ConfigError("track vector longer than tuple capacity");
  std::vector<RTupleKey> out;
  if (r == 0 || r > len) return out;
  std::vector<std::size_t> pos(r);
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  while (true) {
    RTupleKey key;
    key.length = static_cast<std::uint8_t>(len);
    key.r = static_cast<std::uint8_t>(r);
    std::fill(key.entries.begin(), key.entries.begin() + len, kBlank);
    for (std::size_t p : pos) key.entries[p] = vec[p];
    out.push_back(key);
    // Next combination.
    std::size_t i = r;
    while (i > 0 && pos[i - 1] == len - r + i - 1) --i;
    if (i == 0) break;
    ++pos[i - 1];
    for (std::size_t k = i; k < r; ++k) pos[k] = pos[k - 1] + 1;
  }
  return out;
}

/// Minimum number of shared hits that makes two tracks conflict, for a track
/// with `real_hits` real hits.
inline std::size_t share_threshold(std::size_t real_hits, double f) {
  return static_cast<std::size_t>(std::floor(f * static_cast<double>(real_hits))) + 1;
}

/// True when shared / min(N1, N2) exceeds f.
inline bool exceeds_share(std::size_t shared, std::size_t n1, std::size_t n2, double f) {
  return static_cast<double>(shared) > f * static_cast<double>(std::min(n1, n2));
}

/// R x R ordered sets T(i, j), 1 <= i, j <= R. T(r', r) holds the r'-tuples of
/// accepted tracks whose own threshold is r.
class TupleForest {
 public:
  explicit TupleForest(std::size_t trees_per_side)
      : side_(trees_per_side), trees_(trees_per_side * trees_per_side) {}

  std::size_t side() const { return side_; }

  bool contains(std::size_t i, std::size_t j, const RTupleKey& key) {
    ++operations_;
    return tree(i, j).contains(key);
  }

  void insert(std::size_t i, std::size_t j, const RTupleKey& key) {
    ++operations_;
    tree(i, j).insert(key);
  }

  std::size_t size() const {
    std::size_t s = 0;
    for (const auto& t : trees_) s += t.size();
    return s;
  }

  std::size_t tree_size(std::size_t i, std::size_t j) const { return tree(i, j).size(); }
  bool empty(std::size_t i, std::size_t j) const { return tree(i, j).empty(); }

  /// Lookups plus inserts since construction; empty-tree checks are free.
  std::uint64_t operations() const { return operations_; }

 private:
  std::set<RTupleKey>& tree(std::size_t i, std::size_t j) {
    return trees_.at((i - 1) * side_ + (j - 1));
  }
  const std::set<RTupleKey>& tree(std::size_t i, std::size_t j) const {
    return trees_.at((i - 1) * side_ + (j - 1));
  }

  std::size_t side_;
  std::vector<std::set<RTupleKey>> trees_;
  std::uint64_t operations_ = 0;
};

/// Tuple-forest cleaning state shared by the classical pass and the
/// superposition reconstruction.
class TupleCleaner {
 public:
  TupleCleaner(std::size_t layers, double f)
      : f_(f), side_(share_threshold(layers, f)), forest_(side_) {}

  /// True when `t` conflicts with an accepted track.
  bool conflicts(const TrackCandidate& t, std::size_t ordinal) {
    const auto vec = track_vector(t, ordinal);
    const std::size_t r = share_threshold(t.real_hits(), f_);
    // Accepted tracks with threshold r' <= r: their r'-tuples live in T(r', r').
    for (std::size_t rp = 1; rp <= std::min(r, side_); ++rp) {
      if (forest_.empty(rp, rp)) continue;
      for (const auto& key : r_tuples(vec, rp)) {
        if (forest_.contains(rp, rp, key)) return true;
      }
    }
    // Accepted tracks with threshold r' >= r: their r-tuples live in T(r, r').
    if (r <= side_) {
      const auto keys = r_tuples(vec, r);
      for (std::size_t rp = r; rp <= side_; ++rp) {
        if (forest_.empty(r, rp)) continue;
        for (const auto& key : keys) {
          if (forest_.contains(r, rp, key)) return true;
        }
      }
    }
    return false;
  }

  void accept(const TrackCandidate& t, std::size_t ordinal) {
    const auto vec = track_vector(t, ordinal);
    const std::size_t r = share_threshold(t.real_hits(), f_);
    if (r > side_) return;
    for (std::size_t rp = 1; rp <= r; ++rp) {
      for (const auto& key : r_tuples(vec, rp)) forest_.insert(rp, r, key);
    }
  }

  const TupleForest& forest() const { return forest_; }

 private:
  double f_;
  std::size_t side_;
  TupleForest forest_;
};

struct CleaningStats {
  std::uint64_t operations = 0;
  std::size_t forest_size = 0;
};

/// Pairwise scan over quality-sorted input: each surviving track removes every
/// later track it conflicts with. Survivors are returned in input order.
inline std::vector<TrackCandidate> clean_original(const std::vector<TrackCandidate>& sorted,
                                                  double f, CleaningStats* stats = nullptr) {
  if (!(f > 0.0 && f <= 1.0)) throw ConfigError("share fraction must be in (0, 1]");
  const std::size_t k = sorted.size();
  std::vector<char> alive(k, 1);
  std::vector<std::size_t> real(k);
  for (std::size_t i = 0; i < k; ++i) real[i] = sorted[i].real_hits();
  std::uint64_t comparisons = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!alive[i]) continue;
    for (std::size_t j = i + 1; j < k; ++j) {
      if (!alive[j]) continue;
      ++comparisons;
      if (exceeds_share(shared_hits(sorted[i], sorted[j]), real[i], real[j], f)) alive[j] = 0;
    }
  }
  std::vector<TrackCandidate> out;
  for (std::size_t i = 0; i < k; ++i) {
    if (alive[i]) out.push_back(sorted[i]);
  }
  if (stats != nullptr) stats->operations += comparisons;
  return out;
}

/// Sorts by quality, then accepts greedily against the tuple forest. Output
/// is in quality order.
inline std::vector<TrackCandidate> clean_improved(std::vector<TrackCandidate> cands, double f,
                                                  CleaningStats* stats = nullptr) {
  if (!(f > 0.0 && f <= 1.0)) throw ConfigError("share fraction must be in (0, 1]");
  sort_by_quality(cands);
  std::size_t layers = 0;
  for (const auto& t : cands) layers = std::max(layers, t.hits.size());
  TupleCleaner cleaner(layers, f);
  std::vector<TrackCandidate> out;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!cleaner.conflicts(cands[i], i)) {
      cleaner.accept(cands[i], i);
      out.push_back(std::move(cands[i]));
    }
  }
  if (stats != nullptr) {
    stats->operations += cleaner.forest().operations();
    stats->forest_size = cleaner.forest().size();
  }
  return out;
}

}  // namespace ctf
