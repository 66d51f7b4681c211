#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "sre/problem.hpp"

namespace sre {

// Multiset of label sets, sorted by bitmask.
using SetConfig = std::vector<LabelSet>;

namespace detail {

using Residual = std::set<Config>;

inline Residual remove_label(const Residual& r, LabelId l) {
  Residual out;
  for (const Config& c : r) {
    Config m = c;
    if (erase_one(m, l)) out.insert(std::move(m));
  }
  return out;
}

// Multisets m such that m + x is in r for every x in s.
inline Residual remove_set(const Residual& r, LabelSet s) {
  auto ls = members(s);
  if (ls.empty()) return {};
  Residual acc = remove_label(r, ls[0]);
  for (std::size_t i = 1; i < ls.size() && !acc.empty(); ++i) {
    Residual next = remove_label(r, ls[i]);
    Residual both;
    std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(), std::inserter(both, both.end()));
    acc.swap(both);
  }
  return acc;
}

inline LabelSet forced(const Residual& r) {
  LabelSet s = 0;
  for (const Config& c : r)
    if (c.size() == 1) s |= bit(c[0]);
  return s;
}

}  // namespace detail

// Every choice from the set configuration lies in c.
inline bool all_choices_in(const Constraint& c, const SetConfig& sc) {
  return for_each_choice(sc, [&](const Config& m) { return c.contains(m); });
}

// Maximal set configurations (L_1..L_d) of c: every choice is in c and no L_i
// can be enlarged. The candidates must include every right-closed set of the
// diagram of c; maximal configurations only use such sets.
inline std::vector<SetConfig> maximal_configurations(const Constraint& c, const std::vector<LabelSet>& candidates,
                                                     std::size_t cap = 2000000) {
  std::size_t d = c.arity;
  std::set<SetConfig> found;
  if (c.configs.empty()) return {};
  if (d == 0) return {SetConfig{}};
  std::size_t visited = 0;
  SetConfig chosen;

  auto is_maximal = [&](const SetConfig& sc) {
    for (std::size_t i = 0; i < sc.size(); ++i) {
      detail::Residual r = c.configs;
      for (std::size_t j = 0; j < sc.size() && !r.empty(); ++j)
        if (j != i) r = detail::remove_set(r, sc[j]);
      if (detail::forced(r) != sc[i]) return false;
    }
    return true;
  };

  auto rec = [&](auto&& self, std::size_t start, const detail::Residual& r) -> void {
    if (++visited > cap) throw ExplosionGuard("maximal configuration enumeration", cap, visited);
    if (chosen.size() + 1 == d) {
      LabelSet last = detail::forced(r);
      if (!last) return;
      SetConfig sc = chosen;
      sc.push_back(last);
      std::sort(sc.begin(), sc.end());
      if (!found.count(sc) && is_maximal(sc)) found.insert(sc);
      return;
    }
    for (std::size_t i = start; i < candidates.size(); ++i) {
      detail::Residual next = detail::remove_set(r, candidates[i]);
      if (next.empty()) continue;
      chosen.push_back(candidates[i]);
      self(self, i, next);
      chosen.pop_back();
    }
  };
  rec(rec, 0, c.configs);
  return {found.begin(), found.end()};
}

}  // namespace sre
