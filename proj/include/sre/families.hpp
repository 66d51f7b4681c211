#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sre/lift.hpp"
#include "sre/problem.hpp"

namespace sre {

namespace detail {

using Line = std::vector<std::pair<std::vector<std::string>, std::size_t>>;

// Expands condensed lines given as (label group, exponent); zero exponents drop the group.
inline std::vector<std::vector<std::string>> expand_lines(const std::vector<Line>& lines) {
  std::set<std::vector<std::string>> out;
  for (const Line& l : lines) {
    std::vector<std::vector<std::string>> acc{{}};
    for (const auto& [labels, count] : l) {
      std::vector<std::vector<std::string>> next;
      for (const auto& pre : acc) {
        for_each_multiset(labels.size(), count, [&](const Config& pick) {
          auto c = pre;
          for (LabelId i : pick) c.push_back(labels[i]);
          next.push_back(c);
          return true;
        });
      }
      acc.swap(next);
    }
    for (auto& c : acc) {
      std::sort(c.begin(), c.end());
      out.insert(c);
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace detail

// Label for the colour set C, e.g. {1, 2} -> L1_2.
inline std::string color_label(const std::vector<std::size_t>& colors) {
  std::string s = "L";
  for (std::size_t i = 0; i < colors.size(); ++i) s += (i ? "_" : "") + std::to_string(colors[i]);
  return s;
}

// Inverse of color_label as a bitmask (bit c-1 for colour c); nullopt for
// names that are not colour labels.
inline std::optional<std::uint64_t> parse_color_label(const std::string& name) {
  if (name.size() < 2 || name[0] != 'L') return std::nullopt;
  std::uint64_t mask = 0;
  std::size_t i = 1;
  while (i < name.size()) {
    std::size_t j = i;
    while (j < name.size() && std::isdigit(static_cast<unsigned char>(name[j]))) ++j;
    if (j == i || j - i > 2) return std::nullopt;
    std::size_t c = std::stoul(name.substr(i, j - i));
    if (c < 1 || c > 64) return std::nullopt;
    mask |= std::uint64_t{1} << (c - 1);
    if (j < name.size() && name[j] != '_') return std::nullopt;
    i = j + 1;
    if (j + 1 == name.size()) return std::nullopt;
  }
  return mask;
}

inline std::vector<std::size_t> colors_of_mask(std::uint64_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < 64; ++i)
    if ((mask >> i) & 1U) out.push_back(i + 1);
  return out;
}

inline Problem maximal_matching_problem(std::size_t delta) {
  if (delta < 2) throw PreconditionError("maximal_matching_problem: delta must be at least 2");
  using detail::Line;
  std::vector<Line> white{{{{"M"}, 1}, {{"O"}, delta - 1}}, {{{"P"}, delta}}};
  std::vector<Line> black{{{{"M"}, 1}, {{"O", "P"}, delta - 1}}, {{{"O"}, delta}}};
  return Problem::from_names(delta, detail::expand_lines(white), delta, detail::expand_lines(black));
}

inline Problem matching_family(std::size_t delta, std::size_t x, std::size_t y) {
  if (y < 1 || y + 1 > delta || x + y > delta)
    throw PreconditionError("matching_family: requires 1 <= y <= delta-1 and 0 <= x <= delta-y");
  using detail::Line;
  const std::vector<std::string> all{"M", "Z", "P", "O", "X"}, pox{"P", "O", "X"}, ox{"O", "X"};
  std::vector<Line> white{
      {{{"X"}, y - 1}, {{"M"}, 1}, {{"O"}, delta - y}},
      {{{"X"}, y}, {{"O"}, x}, {{"P"}, delta - y - x}},
      {{{"X"}, y}, {{"Z"}, 1}, {{"O"}, delta - y - 1}},
  };
  std::vector<Line> black{
      {{all, y - 1}, {{"M", "X"}, 1}, {pox, delta - y}},
      {{all, y}, {pox, x}, {ox, delta - y - x}},
      {{all, y}, {{"X"}, 1}, {pox, delta - y - 1}},
  };
  return Problem::from_names(delta, detail::expand_lines(white), delta, detail::expand_lines(black));
}

// Colouring family with optional ruling labels P_i, U_i (beta = 0 gives the
// arbdefective colouring problem).
inline Problem ruling_family(std::size_t delta, std::size_t colors, std::size_t beta) {
  if (colors < 1) throw PreconditionError("ruling_family: need at least one colour");
  if (colors > 20) throw ExplosionGuard("ruling_family: too many colours", 20, colors);
  std::vector<std::vector<std::string>> white, black;
  std::vector<std::string> extra{"X"};
  std::vector<std::string> lbl;
  std::uint64_t n_sets = (std::uint64_t{1} << colors) - 1;
  for (std::uint64_t m = 1; m <= n_sets; ++m) {
    auto cs = colors_of_mask(m);
    lbl.push_back(color_label(cs));
    std::size_t x = cs.size() - 1;
    if (x >= delta) continue;
    std::vector<std::string> cfg(delta - x, lbl.back());
    cfg.insert(cfg.end(), x, "X");
    white.push_back(cfg);
  }
  for (std::uint64_t a = 1; a <= n_sets; ++a)
    for (std::uint64_t b = a; b <= n_sets; ++b)
      if ((a & b) == 0) black.push_back({lbl[a - 1], lbl[b - 1]});
  std::vector<std::string> pl, ul;
  for (std::size_t i = 1; i <= beta; ++i) {
    pl.push_back("P" + std::to_string(i));
    ul.push_back("U" + std::to_string(i));
    if (delta >= 1) {
      std::vector<std::string> cfg{pl.back()};
      cfg.insert(cfg.end(), delta - 1, ul.back());
      white.push_back(cfg);
    }
  }
  for (std::size_t i = 0; i < beta; ++i) {
    for (std::size_t j = 0; j < i; ++j) black.push_back({pl[i], ul[j]});
    for (const auto& l : lbl) {
      black.push_back({pl[i], l});
      black.push_back({ul[i], l});
    }
    for (std::size_t j = 0; j < beta; ++j) black.push_back({ul[i], ul[j]});
  }
  std::vector<std::string> everything = lbl;
  everything.push_back("X");
  everything.insert(everything.end(), pl.begin(), pl.end());
  everything.insert(everything.end(), ul.begin(), ul.end());
  for (const auto& l : everything) black.push_back({"X", l});
  for (auto& c : black) std::sort(c.begin(), c.end());
  extra.insert(extra.end(), everything.begin(), everything.end());
  return Problem::from_names(delta, white, 2, black, extra);
}

inline Problem arbdef_family(std::size_t delta, std::size_t colors) { return ruling_family(delta, colors, 0); }

// Node predicate: some y in {0..x} makes the node valid for the lift of the
// ruling family with arity delta_in - y; edge predicate: the lift of arity delta_in.
inline LiftDisjunction ruling_bar_family(std::size_t delta, std::size_t delta_in, std::size_t x, std::size_t k,
                                         std::size_t beta) {
  if (x >= delta_in) throw PreconditionError("ruling_bar_family: requires 0 <= x < delta'");
  std::vector<LiftedProblem> parts;
  for (std::size_t y = 0; y <= x; ++y) parts.push_back(lift(ruling_family(delta_in - y, k, beta), delta, 2));
  return LiftDisjunction(parts);
}

}  // namespace sre
