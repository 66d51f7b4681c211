#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sre/csp.hpp"
#include "sre/graphs.hpp"
#include "sre/lift.hpp"
#include "sre/problem.hpp"

namespace sre {

// Constraint of one side as seen by the solver. A node of degree `arity` is
// constrained; other degrees are unconstrained. When `decomposable`, the node
// predicate holds iff `sub` holds on every sub-multiset of size `sub_arity`.
struct SidePredicate {
  std::size_t arity = 0;
  bool decomposable = false;
  std::size_t sub_arity = 0;
  std::shared_ptr<const MultisetPredicate> sub;
  std::shared_ptr<const MultisetPredicate> full;
};

struct Model {
  std::size_t value_count = 0;
  std::vector<std::string> names;
  // For lifted problems, the base label set behind each value.
  std::vector<LabelSet> value_sets;
  SidePredicate white;
  SidePredicate black;

  const SidePredicate& side(Side s) const { return s == Side::white ? white : black; }
};

inline Model model_of(const Problem& p) {
  Model m;
  m.value_count = p.label_count();
  m.names = p.labels();
  for (LabelId l = 0; l < p.label_count(); ++l) m.value_sets.push_back(bit(l));
  for (Side s : {Side::white, Side::black}) {
    SidePredicate& sp = s == Side::white ? m.white : m.black;
    sp.arity = p.arity(s);
    const Constraint* c = &p.constraint(s);
    Constraint copy = *c;
    sp.full = std::make_shared<MultisetPredicate>([copy](const Config& x) { return copy.contains(x); });
    sp.decomposable = false;
  }
  return m;
}

inline Model model_of(const LiftedProblem& lp) {
  Model m;
  m.value_count = lp.size();
  m.names = lp.names();
  m.value_sets = lp.alphabet();
  for (Side s : {Side::white, Side::black}) {
    SidePredicate& sp = s == Side::white ? m.white : m.black;
    sp.arity = lp.arity(s);
    sp.decomposable = true;
    sp.sub_arity = lp.sub_arity(s);
    sp.sub = std::make_shared<MultisetPredicate>([lp, s](const Config& x) { return lp.sub_holds(s, x); });
    sp.full = std::make_shared<MultisetPredicate>([lp, s](const Config& x) { return lp.holds(s, x); });
  }
  return m;
}

inline Model model_of(const LiftDisjunction& ld) {
  Model m = model_of(ld.edge_lift());
  m.white.decomposable = false;
  m.white.sub = nullptr;
  m.white.full = std::make_shared<MultisetPredicate>([ld](const Config& x) { return ld.white_holds(x); });
  return m;
}

// Labels per edge of a bipartite graph (for hypergraphs: per incidence edge,
// i.e. per node-hyperedge pair). Unassigned edges hold nullopt.
struct SolutionAssignment {
  std::vector<std::optional<LabelId>> labels;
  bool s_scoped = false;
};

// Which nodes are constrained: all by default, or an S-scope.
struct Scope {
  std::vector<bool> white;
  std::vector<bool> black;

  static Scope all(const BipartiteGraph& g) {
    return Scope{std::vector<bool>(g.white_count, true), std::vector<bool>(g.black_count, true)};
  }
  // White nodes in S; a black node is constrained iff all its neighbours are in S.
  static Scope of_subset(const BipartiteGraph& g, const std::vector<bool>& in_s) {
    Scope sc{in_s, std::vector<bool>(g.black_count, true)};
    for (std::size_t b = 0; b < g.black_count; ++b)
      for (std::size_t e : g.black_edges[b])
        if (!in_s[g.edges[e].first]) sc.black[b] = false;
    return sc;
  }
};

struct CheckReport {
  bool ok = true;
  std::vector<std::size_t> bad_white;
  std::vector<std::size_t> bad_black;
};

namespace detail {

inline Config gather(const SolutionAssignment& a, const std::vector<std::size_t>& edges, bool& missing) {
  Config m;
  for (std::size_t e : edges) {
    if (e >= a.labels.size() || !a.labels[e]) {
      missing = true;
      return {};
    }
    m.push_back(*a.labels[e]);
  }
  std::sort(m.begin(), m.end());
  return m;
}

}  // namespace detail

inline CheckReport check_solution(const Model& m, const BipartiteGraph& g, const SolutionAssignment& a,
                                  const Scope& scope) {
  CheckReport r;
  for (Side s : {Side::white, Side::black}) {
    const SidePredicate& sp = m.side(s);
    std::size_t count = s == Side::white ? g.white_count : g.black_count;
    for (std::size_t v = 0; v < count; ++v) {
      bool constrained = s == Side::white ? scope.white[v] : scope.black[v];
      const auto& edges = s == Side::white ? g.white_edges[v] : g.black_edges[v];
      if (!constrained || edges.size() != sp.arity) continue;
      bool missing = false;
      Config cfg = detail::gather(a, edges, missing);
      if (missing) throw PreconditionError(std::string("check_solution: missing label at ") + side_name(s) + " node " + std::to_string(v));
      for (LabelId l : cfg)
        if (l >= m.value_count) throw PreconditionError("check_solution: label out of range");
      if (!(*sp.full)(cfg)) {
        r.ok = false;
        (s == Side::white ? r.bad_white : r.bad_black).push_back(v);
      }
    }
  }
  return r;
}

inline CheckReport check_solution(const Model& m, const BipartiteGraph& g, const SolutionAssignment& a) {
  return check_solution(m, g, a, Scope::all(g));
}

struct SolveResult {
  Verdict verdict = Verdict::indeterminate;
  std::optional<SolutionAssignment> solution;
  SearchStats stats;
};

namespace detail {

inline void add_side(Csp& csp, const SidePredicate& sp, const std::vector<std::size_t>& vars,
                     const std::shared_ptr<const BinaryTable>& table, std::size_t value_count, bool& infeasible) {
  if (vars.size() != sp.arity) return;
  if (sp.decomposable && sp.sub_arity < sp.arity) {
    std::size_t k = sp.sub_arity;
    if (k == 0) {
      if (!(*sp.sub)(Config{})) infeasible = true;
      return;
    }
    if (k == 1) {
      Domain ok;
      for (LabelId x = 0; x < value_count; ++x)
        if ((*sp.sub)(Config{x})) ok.set(x);
      for (std::size_t v : vars) csp.restrict(v, ok);
      return;
    }
    for_each_index_subset(vars.size(), k, [&](const std::vector<std::size_t>& idx) {
      std::vector<std::size_t> scope;
      for (std::size_t i : idx) scope.push_back(vars[i]);
      if (k == 2)
        csp.add_binary(scope[0], scope[1], table);
      else
        csp.add_nary(scope, sp.sub);
      return true;
    });
    return;
  }
  if (vars.empty()) {
    if (!(*sp.full)(Config{})) infeasible = true;
    return;
  }
  if (vars.size() == 1) {
    Domain ok;
    for (LabelId x = 0; x < value_count; ++x)
      if ((*sp.full)(Config{x})) ok.set(x);
    csp.restrict(vars[0], ok);
    return;
  }
  if (vars.size() == 2)
    csp.add_binary(vars[0], vars[1], table);
  else
    csp.add_nary(vars, sp.full);
}

}  // namespace detail

// Core search: labels the edges of g so that every constrained node is
// satisfied. `domains` optionally restricts individual edges; edges touching
// no constrained node are left unassigned in the result.
inline SolveResult solve_bipartite(const Model& m, const BipartiteGraph& g, const Scope& scope,
                                   const SearchOptions& opt = {}, const std::vector<Domain>* domains = nullptr) {
  Csp csp(g.edges.size(), m.value_count);
  if (domains)
    for (std::size_t e = 0; e < g.edges.size(); ++e) csp.restrict(e, (*domains)[e]);
  bool infeasible = false;
  for (Side s : {Side::white, Side::black}) {
    const SidePredicate& sp = m.side(s);
    std::shared_ptr<const BinaryTable> table;
    bool need_table = (sp.decomposable && sp.sub_arity == 2 && sp.arity > 2) || sp.arity == 2;
    if (need_table) {
      bool use_sub = sp.decomposable && sp.sub_arity == 2;
      table = make_binary_table(m.value_count, use_sub ? *sp.sub : *sp.full);
    }
    std::size_t count = s == Side::white ? g.white_count : g.black_count;
    for (std::size_t v = 0; v < count; ++v) {
      bool constrained = s == Side::white ? scope.white[v] : scope.black[v];
      if (!constrained) continue;
      detail::add_side(csp, sp, s == Side::white ? g.white_edges[v] : g.black_edges[v], table, m.value_count, infeasible);
    }
  }
  SolveResult out;
  if (infeasible) {
    out.verdict = Verdict::unsat;
    return out;
  }
  SearchResult r = csp.solve(opt);
  out.verdict = r.verdict;
  out.stats = r.stats;
  if (r.verdict == Verdict::sat) {
    SolutionAssignment a;
    a.labels.assign(g.edges.size(), std::nullopt);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      auto [w, b] = g.edges[e];
      if (scope.white[w] || scope.black[b]) a.labels[e] = r.values[e];
    }
    a.s_scoped = false;
    out.solution = a;
  }
  return out;
}

inline SolveResult find_bipartite_solution(const Model& m, const BipartiteGraph& g, const SearchOptions& opt = {}) {
  return solve_bipartite(m, g, Scope::all(g), opt);
}

inline SolveResult find_nonbipartite_solution(const Model& m, const Hypergraph& h, const SearchOptions& opt = {}) {
  return find_bipartite_solution(m, incidence_graph(h), opt);
}

// S-solution on a hypergraph: node constraints on S, hyperedge constraints on
// hyperedges inside S. `boundary_filter` restricts the labels on pairs (v, e)
// with v in S and e leaving S.
inline SolveResult find_S_solution(const Model& m, const Hypergraph& h, const std::vector<bool>& in_s,
                                   const std::optional<Domain>& boundary_filter = std::nullopt,
                                   const SearchOptions& opt = {}) {
  if (in_s.size() != h.n) throw PreconditionError("find_S_solution: S mask size mismatch");
  BipartiteGraph g = incidence_graph(h);
  Scope scope = Scope::of_subset(g, in_s);
  std::vector<Domain> domains(g.edges.size());
  for (auto& d : domains) d.set();
  if (boundary_filter)
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      auto [v, he] = g.edges[e];
      if (in_s[v] && !scope.black[he]) domains[e] = *boundary_filter;
    }
  SolveResult r = solve_bipartite(m, g, scope, opt, &domains);
  if (r.solution) {
    r.solution->s_scoped = true;
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      if (!in_s[g.edges[e].first]) r.solution->labels[e] = std::nullopt;
  }
  return r;
}

inline CheckReport check_S_solution(const Model& m, const Hypergraph& h, const std::vector<bool>& in_s,
                                    const SolutionAssignment& a) {
  BipartiteGraph g = incidence_graph(h);
  return check_solution(m, g, a, Scope::of_subset(g, in_s));
}

struct LabelsetAudit {
  std::size_t total = 0;
  std::vector<std::size_t> per_white;
  std::vector<std::size_t> per_black;
};

// Edges whose assigned label set contains `member` (a base label id).
inline LabelsetAudit audit_labelset_counts(const Model& m, const BipartiteGraph& g, const SolutionAssignment& a,
                                           LabelId member) {
  LabelsetAudit out;
  out.per_white.assign(g.white_count, 0);
  out.per_black.assign(g.black_count, 0);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (e >= a.labels.size() || !a.labels[e]) continue;
    if (!has(m.value_sets.at(*a.labels[e]), member)) continue;
    ++out.total;
    ++out.per_white[g.edges[e].first];
    ++out.per_black[g.edges[e].second];
  }
  return out;
}

}  // namespace sre
