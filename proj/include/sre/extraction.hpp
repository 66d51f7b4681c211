#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sre/families.hpp"
#include "sre/graphs.hpp"
#include "sre/lift.hpp"
#include "sre/solver.hpp"

namespace sre {

// Colour-set labels of a colouring-family problem: mask per label id, with
// nullopt for X and the ruling labels.
inline std::vector<std::optional<std::uint64_t>> color_masks(const Problem& p) {
  std::vector<std::optional<std::uint64_t>> out;
  for (const auto& n : p.labels()) out.push_back(parse_color_label(n));
  return out;
}

inline std::size_t color_count(const Problem& p) {
  std::uint64_t all = 0;
  for (const auto& m : color_masks(p))
    if (m) all |= *m;
  return static_cast<std::size_t>(std::bit_width(all));
}

struct BaseExtraction {
  Problem problem;
  SolutionAssignment solution;
  // C_v per node, bit c-1 for colour c; 0 outside S.
  std::vector<std::uint64_t> color_sets;
};

namespace detail {

// Maximum matching of colours (left) into edges (right); adj[c] lists the
// edges colour c may be matched to.
struct ColorMatching {
  std::vector<int> of_color;
  std::vector<int> of_edge;

  ColorMatching(const std::vector<std::vector<std::size_t>>& adj, std::size_t edges)
      : of_color(adj.size(), -1), of_edge(edges, -1) {
    for (std::size_t c = 0; c < adj.size(); ++c) {
      std::vector<char> seen(edges, 0);
      augment(adj, c, seen);
    }
  }

  bool augment(const std::vector<std::vector<std::size_t>>& adj, std::size_t c, std::vector<char>& seen) {
    for (std::size_t e : adj[c]) {
      if (seen[e]) continue;
      seen[e] = 1;
      if (of_edge[e] < 0 || augment(adj, static_cast<std::size_t>(of_edge[e]), seen)) {
        of_edge[e] = static_cast<int>(c);
        of_color[c] = static_cast<int>(e);
        return true;
      }
    }
    return false;
  }
};

inline void require_s_mask(const Hypergraph& h, const std::vector<bool>& in_s, const char* who) {
  if (in_s.size() != h.n) throw PreconditionError(std::string(who) + ": S mask size mismatch");
}

}  // namespace detail

// Colour set C with |N(C)| < |C| in the colour/edge graph of one node, where
// colour i is adjacent to edge j iff i is missing from cover[j]. Returns
// nullopt when every colour can be matched.
inline std::optional<std::uint64_t> hall_violator(std::size_t colors, const std::vector<std::uint64_t>& cover) {
  std::vector<std::vector<std::size_t>> adj(colors);
  for (std::size_t c = 0; c < colors; ++c)
    for (std::size_t j = 0; j < cover.size(); ++j)
      if (!((cover[j] >> c) & 1U)) adj[c].push_back(j);
  detail::ColorMatching m(adj, cover.size());
  std::uint64_t reach = 0;
  std::vector<std::size_t> stack;
  for (std::size_t c = 0; c < colors; ++c)
    if (m.of_color[c] < 0) {
      reach |= std::uint64_t{1} << c;
      stack.push_back(c);
    }
  if (stack.empty()) return std::nullopt;
  while (!stack.empty()) {
    std::size_t c = stack.back();
    stack.pop_back();
    for (std::size_t e : adj[c]) {
      int back = m.of_edge[e];
      if (back >= 0 && !((reach >> back) & 1U)) {
        reach |= std::uint64_t{1} << back;
        stack.push_back(static_cast<std::size_t>(back));
      }
    }
  }
  return reach;
}

// Turns an S-solution of lift_{delta,r}(Pi_{delta'}(k)) on a hypergraph into
// an S-solution of Pi_delta(k): each node of S picks a colour set violating
// Hall's condition and writes l(C) everywhere except |C|-1 edges that get X.
inline BaseExtraction lift_solution_to_base(const LiftedProblem& lp, const Hypergraph& h, const std::vector<bool>& in_s,
                                            const SolutionAssignment& sol) {
  detail::require_s_mask(h, in_s, "lift_solution_to_base");
  const Problem& base = lp.base();
  auto masks = color_masks(base);
  std::size_t k = color_count(base);
  if (k == 0) throw PreconditionError("lift_solution_to_base: base problem has no colour labels");
  if (k > base.arity(Side::white)) throw PreconditionError("lift_solution_to_base: requires k <= delta'");
  std::size_t delta = lp.delta();
  BaseExtraction out{arbdef_family(delta, k), {}, std::vector<std::uint64_t>(h.n, 0)};
  const Problem& target = out.problem;
  LabelId x_label = target.require_id("X");
  BipartiteGraph g = incidence_graph(h);
  out.solution.labels.assign(g.edges.size(), std::nullopt);
  out.solution.s_scoped = true;
  for (std::size_t v = 0; v < h.n; ++v) {
    if (!in_s[v]) continue;
    const auto& es = g.white_edges[v];
    if (es.size() != delta)
      throw PreconditionError("lift_solution_to_base: node " + std::to_string(v) + " does not have degree delta");
    std::vector<std::uint64_t> cover;
    for (std::size_t e : es) {
      if (e >= sol.labels.size() || !sol.labels[e])
        throw PreconditionError("lift_solution_to_base: missing label at node " + std::to_string(v));
      std::uint64_t c = 0;
      for (LabelId l : members(lp.alphabet().at(*sol.labels[e])))
        if (masks[l]) c |= *masks[l];
      cover.push_back(c);
    }
    auto violator = hall_violator(k, cover);
    if (!violator)
      throw HallViolatorMissing("lift_solution_to_base: every colour can be matched at node " + std::to_string(v));
    std::uint64_t cset = *violator;
    std::size_t x = popcount(cset) - 1;
    std::vector<bool> is_x(es.size(), false);
    std::size_t placed = 0;
    for (std::size_t j = 0; j < es.size(); ++j)
      if ((cover[j] & cset) != cset) {
        is_x[j] = true;
        ++placed;
      }
    if (placed > x) throw HallViolatorMissing("lift_solution_to_base: violator too small");
    for (std::size_t j = 0; j < es.size() && placed < x; ++j)
      if (!is_x[j]) {
        is_x[j] = true;
        ++placed;
      }
    LabelId lc = target.require_id(color_label(colors_of_mask(cset)));
    for (std::size_t j = 0; j < es.size(); ++j) out.solution.labels[es[j]] = is_x[j] ? x_label : lc;
    out.color_sets[v] = cset;
  }
  return out;
}

struct Coloring {
  // Colours 1..2k on S, 0 elsewhere. Colour c_{i,j} is 2(i-1)+j.
  std::vector<std::size_t> color;
  // Removal order of the degeneracy-style ordering.
  std::vector<std::size_t> order;
  std::size_t colors_used = 0;
};

// Proper colouring of the S-induced subgraph with at most 2k colours from an
// S-solution of Pi_delta(k) on a graph given as a rank-2 hypergraph.
inline Coloring arbdef_to_coloring(const Problem& base, const Hypergraph& h, const std::vector<bool>& in_s,
                                   const SolutionAssignment& sol) {
  detail::require_s_mask(h, in_s, "arbdef_to_coloring");
  auto masks = color_masks(base);
  auto x_label = base.id("X");
  BipartiteGraph g = incidence_graph(h);
  std::vector<std::uint64_t> cset(h.n, 0);
  for (std::size_t v = 0; v < h.n; ++v) {
    if (!in_s[v]) continue;
    Config cfg;
    for (std::size_t e : g.white_edges[v]) {
      if (e >= sol.labels.size() || !sol.labels[e])
        throw PreconditionError("arbdef_to_coloring: missing label at node " + std::to_string(v));
      LabelId l = *sol.labels[e];
      cfg.push_back(l);
      if (masks.at(l)) {
        if (cset[v] && cset[v] != *masks[l])
          throw PreconditionError("arbdef_to_coloring: node " + std::to_string(v) + " uses two colour sets");
        cset[v] = *masks[l];
      } else if (!x_label || l != *x_label) {
        throw PreconditionError("arbdef_to_coloring: unexpected label at node " + std::to_string(v));
      }
    }
    std::sort(cfg.begin(), cfg.end());
    if (!cset[v] || !base.white().contains(cfg))
      throw PreconditionError("arbdef_to_coloring: node " + std::to_string(v) + " violates the node constraint");
  }

  std::vector<std::vector<std::size_t>> nbr(h.n), gx(h.n);
  for (std::size_t i = 0; i < h.edges.size(); ++i) {
    const auto& he = h.edges[i];
    bool inside = std::all_of(he.begin(), he.end(), [&](std::size_t v) { return in_s[v]; });
    if (!inside) continue;
    if (he.size() != 2) throw PreconditionError("arbdef_to_coloring: hyperedges inside S must have rank 2");
    bool has_x = false;
    for (std::size_t e : g.black_edges[i])
      if (x_label && sol.labels.at(e) == *x_label) has_x = true;
    nbr[he[0]].push_back(he[1]);
    nbr[he[1]].push_back(he[0]);
    if (has_x) {
      gx[he[0]].push_back(he[1]);
      gx[he[1]].push_back(he[0]);
    }
  }

  Coloring out;
  out.color.assign(h.n, 0);
  std::vector<bool> left = in_s;
  std::vector<std::size_t> deg(h.n, 0);
  std::size_t remaining = 0;
  for (std::size_t v = 0; v < h.n; ++v)
    if (left[v]) {
      deg[v] = gx[v].size();
      ++remaining;
    }
  while (remaining > 0) {
    std::size_t pick = h.n;
    for (std::size_t v = 0; v < h.n && pick == h.n; ++v)
      if (left[v] && deg[v] + 1 <= 2 * popcount(cset[v])) pick = v;
    if (pick == h.n) throw OrderingStuck("arbdef_to_coloring: no node meets the degree bound");
    out.order.push_back(pick);
    left[pick] = false;
    --remaining;
    for (std::size_t u : gx[pick])
      if (left[u]) --deg[u];
  }
  for (auto it = out.order.rbegin(); it != out.order.rend(); ++it) {
    std::size_t v = *it;
    std::vector<bool> used;
    for (std::size_t u : nbr[v])
      if (out.color[u]) {
        if (used.size() <= out.color[u]) used.resize(out.color[u] + 1, false);
        used[out.color[u]] = true;
      }
    for (std::size_t c : colors_of_mask(cset[v])) {
      for (std::size_t j = 1; j <= 2 && !out.color[v]; ++j) {
        std::size_t col = 2 * (c - 1) + j;
        if (col >= used.size() || !used[col]) out.color[v] = col;
      }
      if (out.color[v]) break;
    }
    if (!out.color[v]) throw OrderingStuck("arbdef_to_coloring: palette exhausted at node " + std::to_string(v));
  }
  std::vector<bool> seen;
  for (std::size_t v = 0; v < h.n; ++v)
    if (out.color[v]) {
      if (seen.size() <= out.color[v]) seen.resize(out.color[v] + 1, false);
      if (!seen[out.color[v]]) ++out.colors_used;
      seen[out.color[v]] = true;
    }
  return out;
}

// Proper colouring check on the subgraph induced by S.
inline bool proper_on_subset(const Hypergraph& h, const std::vector<bool>& in_s, const std::vector<std::size_t>& color) {
  for (const auto& he : h.edges) {
    if (he.size() != 2 || !in_s[he[0]] || !in_s[he[1]]) continue;
    if (!color[he[0]] || color[he[0]] == color[he[1]]) return false;
  }
  for (std::size_t v = 0; v < h.n; ++v)
    if (in_s[v] && !color[v]) return false;
  return true;
}

struct RulingBarParams {
  std::size_t delta = 0;
  std::size_t delta_in = 0;
  std::size_t x = 0;
  std::size_t k = 1;
  std::size_t beta = 0;
};

inline LiftDisjunction make_ruling_bar(const RulingBarParams& p) {
  return ruling_bar_family(p.delta, p.delta_in, p.x, p.k, p.beta);
}

namespace detail {

inline bool is_pointer(const std::string& name) {
  return name.size() >= 2 && name[0] == 'P' && std::all_of(name.begin() + 1, name.end(), ::isdigit);
}

}  // namespace detail

// Lift labels whose label-set contains no P_i.
inline Domain pointer_free_labels(const LiftedProblem& lp) {
  Domain d;
  for (std::size_t i = 0; i < lp.size(); ++i) {
    bool ok = true;
    for (LabelId l : members(lp.alphabet()[i]))
      if (detail::is_pointer(lp.base().name(l))) ok = false;
    if (ok) d.set(i);
  }
  return d;
}

// No node of S puts a label-set containing some P_i on a hyperedge leaving S.
inline bool boundary_pointer_free(const LiftedProblem& lp, const Hypergraph& h, const std::vector<bool>& in_s,
                                  const SolutionAssignment& sol) {
  Domain ok = pointer_free_labels(lp);
  BipartiteGraph g = incidence_graph(h);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [v, he] = g.edges[e];
    if (!in_s[v]) continue;
    bool inside = std::all_of(h.edges[he].begin(), h.edges[he].end(), [&](std::size_t u) { return in_s[u]; });
    if (inside) continue;
    if (!sol.labels.at(e) || !ok.test(*sol.labels[e])) return false;
  }
  return true;
}

struct PeelResult {
  RulingBarParams params;
  LiftDisjunction problem;
  std::vector<bool> s_next;
  // 0 untouched, 1 removed, 2 recoloured, 3 relabelled per node of S.
  std::vector<int> type;
  std::size_t type_counts[4] = {0, 0, 0, 0};
  SolutionAssignment solution;
};

// One peeling level: from an S-solution of the bar family with parameters
// (delta', x, k, beta) whose S-leaving label-sets hold no P_i, produces an
// S'-solution for (delta', x+1, 2k, beta-1) with |S'| >= |S|/4.
inline PeelResult peel_ruling_level(const RulingBarParams& prm, const Hypergraph& h, const std::vector<bool>& in_s,
                                    const SolutionAssignment& sol) {
  detail::require_s_mask(h, in_s, "peel_ruling_level");
  if (prm.beta < 1) throw PreconditionError("peel_ruling_level: requires beta >= 1");
  if (prm.delta < 3 * prm.delta_in) throw PreconditionError("peel_ruling_level: requires delta >= 3 delta'");
  if (prm.x + 1 >= prm.delta_in) throw PreconditionError("peel_ruling_level: requires x + 1 < delta'");
  LiftDisjunction in = make_ruling_bar(prm);
  RulingBarParams next{prm.delta, prm.delta_in, prm.x + 1, 2 * prm.k, prm.beta - 1};
  PeelResult out{next, make_ruling_bar(next), in_s, std::vector<int>(h.n, 0), {0, 0, 0, 0}, {}};
  const LiftedProblem& src = in.edge_lift();
  const LiftedProblem& dst = out.problem.edge_lift();
  const Problem& sb = src.base();
  const std::string pb = "P" + std::to_string(prm.beta), ub = "U" + std::to_string(prm.beta);
  LabelId p_beta = sb.require_id(pb), u_beta = sb.require_id(ub);
  LabelId x_src = sb.require_id("X");

  auto translate = [&](LabelSet s, bool shift) -> LabelId {
    std::vector<std::string> names;
    for (LabelId l : members(s)) {
      const std::string& n = sb.name(l);
      if (l == p_beta || l == u_beta) continue;
      if (shift) {
        auto m = parse_color_label(n);
        if (m)
          names.push_back(color_label(colors_of_mask(*m << prm.k)));
        else if (l == x_src)
          names.push_back(n);
      } else {
        names.push_back(n);
      }
    }
    if (shift) names.push_back("X");
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    LabelSet t = 0;
    for (const auto& n : names) {
      auto id = dst.base().id(n);
      if (!id) throw TypeClassificationImpossible("peel_ruling_level: label " + n + " has no counterpart");
      t |= bit(*id);
    }
    auto idx = dst.index_of(t);
    if (!idx) throw TypeClassificationImpossible("peel_ruling_level: rewritten label-set is not right-closed");
    return *idx;
  };

  BipartiteGraph g = incidence_graph(h);
  out.solution.labels.assign(g.edges.size(), std::nullopt);
  out.solution.s_scoped = true;
  std::size_t s_size = 0;
  for (std::size_t v = 0; v < h.n; ++v) {
    if (!in_s[v]) continue;
    ++s_size;
    const auto& es = g.white_edges[v];
    if (es.size() != prm.delta)
      throw PreconditionError("peel_ruling_level: node " + std::to_string(v) + " does not have degree delta");
    std::vector<LabelSet> sets;
    for (std::size_t e : es) {
      if (e >= sol.labels.size() || !sol.labels[e])
        throw PreconditionError("peel_ruling_level: missing label at node " + std::to_string(v));
      sets.push_back(src.alphabet().at(*sol.labels[e]));
    }
    std::size_t with_u = 0, with_p = 0;
    bool touched = false;
    for (LabelSet s : sets) {
      if (has(s, u_beta)) ++with_u;
      if (has(s, p_beta)) ++with_p;
      if (has(s, u_beta) || has(s, p_beta)) touched = true;
    }
    int type = 0;
    if (touched) {
      if (with_u == sets.size())
        type = with_p > prm.delta - prm.delta_in ? 1 : 2;
      else
        type = 3;
    }
    out.type[v] = type;
    ++out.type_counts[type];
    if (type == 1) {
      out.s_next[v] = false;
      continue;
    }
    if (type == 2) {
      std::vector<LabelSet> shifted(sets.size(), 0);
      LabelSet uni = 0;
      std::vector<std::size_t> p_edges;
      for (std::size_t j = 0; j < sets.size(); ++j) {
        if (has(sets[j], p_beta)) {
          p_edges.push_back(j);
          continue;
        }
        for (LabelId l : members(sets[j]))
          if (detail::is_pointer(sb.name(l)))
            throw TypeClassificationImpossible("peel_ruling_level: U-edge label-set holds a pointer label");
        LabelId t = translate(sets[j], true);
        out.solution.labels[es[j]] = t;
        uni |= dst.alphabet()[t];
      }
      auto u_idx = dst.index_of(uni);
      if (!u_idx) throw TypeClassificationImpossible("peel_ruling_level: union of U-edge label-sets not in alphabet");
      for (std::size_t j : p_edges) out.solution.labels[es[j]] = *u_idx;
      continue;
    }
    for (std::size_t j = 0; j < sets.size(); ++j) out.solution.labels[es[j]] = translate(sets[j], false);
  }
  std::size_t removed = out.type_counts[1];
  // Each removed node sees more than delta - delta' P_beta half-edges inside S,
  // and an edge carries P_beta on at most one side.
  if (removed * 2 * (prm.delta - prm.delta_in) > s_size * prm.delta)
    throw TypeClassificationImpossible("peel_ruling_level: too many nodes of the first type");
  return out;
}

// Reads an S-solution of the bar family with beta = 0 as an S-solution of
// lift_{delta,2}(Pi_{delta'-x}(k)).
inline SolutionAssignment bar_to_arbdef_lift(const RulingBarParams& prm, const LiftedProblem& target,
                                             const Hypergraph& h, const std::vector<bool>& in_s,
                                             const SolutionAssignment& sol) {
  if (prm.beta != 0) throw PreconditionError("bar_to_arbdef_lift: requires beta = 0");
  LiftDisjunction in = make_ruling_bar(prm);
  const LiftedProblem& src = in.edge_lift();
  BipartiteGraph g = incidence_graph(h);
  SolutionAssignment out;
  out.labels.assign(g.edges.size(), std::nullopt);
  out.s_scoped = true;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (!in_s[g.edges[e].first] || e >= sol.labels.size() || !sol.labels[e]) continue;
    LabelSet t = target.base().label_set(src.base().set_names(src.alphabet().at(*sol.labels[e])));
    auto idx = target.index_of(t);
    if (!idx) throw PreconditionError("bar_to_arbdef_lift: label-set not in the target alphabet");
    out.labels[e] = *idx;
  }
  return out;
}

}  // namespace sre
