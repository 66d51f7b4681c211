#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace sre {

using LabelId = std::uint16_t;
// Sorted multiset of label ids.
using Config = std::vector<LabelId>;
// Subset of an alphabet of at most 64 labels.
using LabelSet = std::uint64_t;

inline constexpr std::size_t kMaxLabels = 64;

inline LabelSet bit(std::size_t i) { return LabelSet{1} << i; }
inline bool has(LabelSet s, std::size_t i) { return (s >> i) & 1U; }
inline std::size_t popcount(LabelSet s) { return static_cast<std::size_t>(std::popcount(s)); }
inline LabelSet full_set(std::size_t n) { return n >= 64 ? ~LabelSet{0} : (bit(n) - 1); }

inline std::vector<LabelId> members(LabelSet s) {
  std::vector<LabelId> out;
  while (s) {
    out.push_back(static_cast<LabelId>(std::countr_zero(s)));
    s &= s - 1;
  }
  return out;
}

inline std::size_t count_of(const Config& c, LabelId l) {
  return static_cast<std::size_t>(std::count(c.begin(), c.end(), l));
}

inline Config insert_sorted(Config c, LabelId l) {
  c.insert(std::upper_bound(c.begin(), c.end(), l), l);
  return c;
}

// Removes one occurrence; returns false when absent.
inline bool erase_one(Config& c, LabelId l) {
  auto it = std::lower_bound(c.begin(), c.end(), l);
  if (it == c.end() || *it != l) return false;
  c.erase(it);
  return true;
}

// Calls f on every multiset of size k over {0..n-1}, in lexicographic order.
// Stops early when f returns false.
inline bool for_each_multiset(std::size_t n, std::size_t k, const std::function<bool(const Config&)>& f) {
  Config cur(k, 0);
  if (k == 0) return f(cur);
  if (n == 0) return true;
  while (true) {
    if (!f(cur)) return false;
    std::size_t i = k;
    while (i > 0 && cur[i - 1] + 1u == n) --i;
    if (i == 0) return true;
    LabelId v = static_cast<LabelId>(cur[i - 1] + 1);
    for (std::size_t j = i - 1; j < k; ++j) cur[j] = v;
  }
}

inline std::size_t multiset_count(std::size_t n, std::size_t k) {
  // C(n + k - 1, k), saturating
  if (k == 0) return 1;
  if (n == 0) return 0;
  long double r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<long double>(n - 1 + i) / static_cast<long double>(i);
    if (r > 1e18L) return static_cast<std::size_t>(-1);
  }
  return static_cast<std::size_t>(r + 0.5L);
}

// Calls f on every choice (x_1..x_k) with x_i in sets[i], as a sorted multiset.
// Stops early when f returns false.
inline bool for_each_choice(const std::vector<LabelSet>& sets, const std::function<bool(const Config&)>& f) {
  std::size_t k = sets.size();
  std::vector<std::vector<LabelId>> opts(k);
  for (std::size_t i = 0; i < k; ++i) {
    opts[i] = members(sets[i]);
    if (opts[i].empty()) return true;
  }
  std::vector<std::size_t> idx(k, 0);
  Config buf(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) buf[i] = opts[i][idx[i]];
    Config sorted = buf;
    std::sort(sorted.begin(), sorted.end());
    if (!f(sorted)) return false;
    std::size_t i = 0;
    while (i < k) {
      if (++idx[i] < opts[i].size()) break;
      idx[i] = 0;
      ++i;
    }
    if (i == k) return true;
  }
}

// Calls f on every distinct sub-multiset of c with exactly k elements.
inline bool for_each_submultiset(const Config& c, std::size_t k, const std::function<bool(const Config&)>& f) {
  std::vector<std::pair<LabelId, std::size_t>> runs;
  for (LabelId l : c) {
    if (!runs.empty() && runs.back().first == l)
      ++runs.back().second;
    else
      runs.push_back({l, 1});
  }
  Config cur;
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) -> bool {
    if (left == 0) return f(cur);
    if (i == runs.size()) return true;
    std::size_t rest = 0;
    for (std::size_t j = i + 1; j < runs.size(); ++j) rest += runs[j].second;
    std::size_t hi = std::min(left, runs[i].second);
    std::size_t lo = left > rest ? left - rest : 0;
    for (std::size_t t = lo; t <= hi; ++t) {
      for (std::size_t u = 0; u < t; ++u) cur.push_back(runs[i].first);
      bool go = rec(i + 1, left - t);
      for (std::size_t u = 0; u < t; ++u) cur.pop_back();
      if (!go) return false;
    }
    return true;
  };
  if (k > c.size()) return true;
  return rec(0, k);
}

// Calls f on every index subset of {0..n-1} of size k, ascending.
inline bool for_each_index_subset(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& f) {
  if (k > n) return true;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!f(idx)) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace sre
