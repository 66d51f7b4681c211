#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "sre/problem.hpp"

namespace sre {

namespace detail {

// Per-label invariant: for each side, the sorted multiplicity profile of the
// label across configurations.
inline std::vector<std::vector<std::size_t>> label_signature(const Problem& p, LabelId l) {
  std::vector<std::vector<std::size_t>> sig(2);
  int i = 0;
  for (Side s : {Side::white, Side::black}) {
    for (const Config& c : p.constraint(s).configs) {
      std::size_t m = count_of(c, l);
      if (m) sig[i].push_back(m);
    }
    std::sort(sig[i].begin(), sig[i].end());
    ++i;
  }
  return sig;
}

inline Config map_config(const Config& c, const std::vector<LabelId>& f) {
  Config out;
  out.reserve(c.size());
  for (LabelId l : c) out.push_back(f[l]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// A label bijection from a to b mapping both constraints onto each other, if
// one exists. Result[i] is the label of b assigned to label i of a.
inline std::optional<std::vector<LabelId>> find_isomorphism(const Problem& a, const Problem& b) {
  std::size_t n = a.label_count();
  if (n != b.label_count()) return std::nullopt;
  for (Side s : {Side::white, Side::black}) {
    if (a.arity(s) != b.arity(s) || a.constraint(s).configs.size() != b.constraint(s).configs.size())
      return std::nullopt;
  }
  std::vector<std::vector<LabelId>> cand(n);
  std::vector<std::vector<std::vector<std::size_t>>> sig_b(n);
  for (LabelId j = 0; j < n; ++j) sig_b[j] = detail::label_signature(b, j);
  for (LabelId i = 0; i < n; ++i) {
    auto sa = detail::label_signature(a, i);
    for (LabelId j = 0; j < n; ++j)
      if (sa == sig_b[j]) cand[i].push_back(j);
    if (cand[i].empty()) return std::nullopt;
  }
  std::vector<LabelId> order(n);
  for (LabelId i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](LabelId x, LabelId y) { return cand[x].size() < cand[y].size(); });
  std::vector<std::size_t> rank(n);
  for (std::size_t k = 0; k < n; ++k) rank[order[k]] = k;

  // configurations grouped by the step at which they become fully mapped
  std::vector<std::vector<std::pair<Side, const Config*>>> ready(n);
  for (Side s : {Side::white, Side::black}) {
    for (const Config& c : a.constraint(s).configs) {
      std::size_t last = 0;
      for (LabelId l : c) last = std::max(last, rank[l]);
      ready[last].push_back({s, &c});
    }
  }

  std::vector<LabelId> f(n, 0);
  std::vector<bool> used(n, false);
  auto rec = [&](auto&& self, std::size_t k) -> bool {
    if (k == n) return true;
    LabelId i = order[k];
    for (LabelId j : cand[i]) {
      if (used[j]) continue;
      f[i] = j;
      bool ok = true;
      for (auto [s, c] : ready[k]) {
        if (!b.constraint(s).contains(detail::map_config(*c, f))) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used[j] = true;
      if (self(self, k + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  if (!rec(rec, 0)) return std::nullopt;
  return f;
}

inline bool problems_equivalent(const Problem& a, const Problem& b) { return find_isomorphism(a, b).has_value(); }

}  // namespace sre
