#include <gtest/gtest.h>

#include <random>

#include "../oracles.hpp"

using namespace sre;

namespace {

// Maximal matching on the 6-cycle: white i matched to black i.
SolutionAssignment matching_on_c6(const Problem& p, const BipartiteGraph& g) {
  SolutionAssignment a;
  for (auto [w, b] : g.edges) a.labels.push_back(p.require_id(w == b ? "M" : "O"));
  return a;
}

Problem empty_white(std::size_t d) {
  Constraint w, b;
  w.arity = d;
  b.arity = 2;
  b.configs.insert({0, 0});
  return Problem({"A"}, w, b);
}

BipartiteGraph random_bipartite(std::mt19937_64& rng, std::size_t nw, std::size_t nb, std::size_t max_edges) {
  std::vector<std::pair<std::size_t, std::size_t>> all, es;
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t b = 0; b < nb; ++b) all.push_back({w, b});
  std::shuffle(all.begin(), all.end(), rng);
  std::size_t m = 1 + rng() % std::min(max_edges, all.size());
  es.assign(all.begin(), all.begin() + static_cast<long>(m));
  return BipartiteGraph(nw, nb, es);
}

}  // namespace

TEST(Check, MaximalMatchingOnSixCycle) {
  Problem p = maximal_matching_problem(2);
  BipartiteGraph g = bipartite_cycle(3);
  EXPECT_TRUE(check_solution(model_of(p), g, matching_on_c6(p, g)).ok);
  SolutionAssignment bad = matching_on_c6(p, g);
  bad.labels[0] = p.require_id("O");
  CheckReport r = check_solution(model_of(p), g, bad);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.bad_white, (std::vector<std::size_t>{0}));
}

TEST(Check, AllXFailsWhiteOnly) {
  Problem p = arbdef_family(2, 2);
  Hypergraph h = Hypergraph::of(cycle_graph(6));
  BipartiteGraph g = incidence_graph(h);
  SolutionAssignment a;
  a.labels.assign(g.edges.size(), p.require_id("X"));
  CheckReport r = check_solution(model_of(p), g, a);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.bad_white.size(), 6u);
  EXPECT_TRUE(r.bad_black.empty());
}

TEST(Check, EmptyScopeIsVacuous) {
  Problem p = arbdef_family(2, 2);
  Hypergraph h = Hypergraph::of(cycle_graph(5));
  SolutionAssignment a;
  a.labels.assign(10, std::nullopt);
  EXPECT_TRUE(check_S_solution(model_of(p), h, std::vector<bool>(5, false), a).ok);
}

TEST(Check, MissingLabelIsAPreconditionError) {
  Problem p = maximal_matching_problem(2);
  BipartiteGraph g = bipartite_cycle(3);
  SolutionAssignment a = matching_on_c6(p, g);
  a.labels[3] = std::nullopt;
  EXPECT_THROW(check_solution(model_of(p), g, a), PreconditionError);
}

TEST(Solve, MaximalMatchingOnSixCycle) {
  Problem p = maximal_matching_problem(2);
  BipartiteGraph g = bipartite_cycle(3);
  SolveResult r = find_bipartite_solution(model_of(p), g);
  ASSERT_EQ(r.verdict, Verdict::sat);
  EXPECT_TRUE(check_solution(model_of(p), g, *r.solution).ok);
}

TEST(Solve, MatchingLiftOnK88IsUnsat) {
  LiftedProblem lp = lift(matching_family(2, 0, 1), 8, 8);
  SolveResult r = find_bipartite_solution(model_of(lp), complete_bipartite(8, 8));
  EXPECT_EQ(r.verdict, Verdict::unsat);
  EXPECT_NE(r.stats.fingerprint, 0u);
}

TEST(Solve, EmptyWhiteConstraintIsUnsat) {
  SolveResult r = find_bipartite_solution(model_of(empty_white(2)), bipartite_cycle(4));
  EXPECT_EQ(r.verdict, Verdict::unsat);
  // No white node of degree 2: nothing is constrained on the white side.
  SolveResult s = find_bipartite_solution(model_of(empty_white(3)), bipartite_cycle(4));
  EXPECT_EQ(s.verdict, Verdict::sat);
}

TEST(Solve, ColouringEmbedsIntoArbdefective) {
  for (std::size_t n : {5, 6, 7}) {
    Graph c = cycle_graph(n);
    Hypergraph h = Hypergraph::of(c);
    std::size_t chi = chromatic_number(c);
    Problem p = arbdef_family(2, chi);
    auto col = k_coloring(c, chi);
    ASSERT_TRUE(col);
    BipartiteGraph g = incidence_graph(h);
    SolutionAssignment a;
    for (auto [v, e] : g.edges) a.labels.push_back(p.require_id(color_label({(*col)[v] + 1})));
    EXPECT_TRUE(check_solution(model_of(p), g, a).ok);
    SolveResult r = find_nonbipartite_solution(model_of(p), h);
    ASSERT_EQ(r.verdict, Verdict::sat);
    EXPECT_TRUE(check_solution(model_of(p), g, *r.solution).ok);
  }
}

TEST(Solve, OneColourLiftOnOddCycleIsUnsat) {
  LiftedProblem lp = lift(arbdef_family(2, 1), 2, 2);
  EXPECT_EQ(find_nonbipartite_solution(model_of(lp), Hypergraph::of(cycle_graph(5))).verdict, Verdict::unsat);
  EXPECT_EQ(find_nonbipartite_solution(model_of(lp), Hypergraph::of(cycle_graph(7))).verdict, Verdict::unsat);
  LiftedProblem two = lift(arbdef_family(2, 2), 2, 2);
  EXPECT_EQ(find_nonbipartite_solution(model_of(two), Hypergraph::of(cycle_graph(5))).verdict, Verdict::sat);
}

TEST(Solve, EmptyHypergraph) {
  SolveResult r = find_nonbipartite_solution(model_of(arbdef_family(2, 1)), Hypergraph(0, {}));
  EXPECT_EQ(r.verdict, Verdict::sat);
}

TEST(Solve, SolutionsAreSoundAndCompleteOnSmallInstances) {
  std::mt19937_64 rng(101);
  int sat = 0, unsat = 0;
  for (int i = 0; i < 150; ++i) {
    std::size_t labels = 2 + i % 2, dw = 1 + i % 3, db = 1 + (i / 3) % 3;
    Problem p = oracle::random_problem(rng, labels, dw, db, 0.5);
    BipartiteGraph g = random_bipartite(rng, 3 + i % 2, 3, 12);
    SolveResult r = find_bipartite_solution(model_of(p), g);
    ASSERT_NE(r.verdict, Verdict::indeterminate);
    EXPECT_EQ(r.verdict == Verdict::sat, oracle::brute_solvable(p, g)) << format_problem(p);
    if (r.verdict == Verdict::sat) {
      ++sat;
      // Edges touching no constrained node stay unlabelled; fill them.
      SolutionAssignment a = *r.solution;
      for (auto& l : a.labels)
        if (!l) l = 0;
      EXPECT_TRUE(check_solution(model_of(p), g, a).ok);
    } else {
      ++unsat;
    }
  }
  EXPECT_GT(sat, 10);
  EXPECT_GT(unsat, 10);
}

TEST(Solve, Deterministic) {
  LiftedProblem lp = lift(matching_family(3, 0, 1), 3, 3);
  BipartiteGraph g = gen_biregular(6, 6, 3, 3, 9);
  SolveResult a = find_bipartite_solution(model_of(lp), g), b = find_bipartite_solution(model_of(lp), g);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.stats.nodes, b.stats.nodes);
  ASSERT_EQ(a.solution.has_value(), b.solution.has_value());
  if (a.solution) {
    EXPECT_EQ(a.solution->labels, b.solution->labels);
  }
}

TEST(Solve, NodeBudgetGivesIndeterminate) {
  LiftedProblem lp = lift(matching_family(2, 0, 1), 8, 8);
  SearchOptions o;
  o.max_nodes = 1;
  o.gac_state_cap = 1;
  SolveResult r = find_bipartite_solution(model_of(lp), complete_bipartite(8, 8), o);
  EXPECT_NE(r.verdict, Verdict::sat);
}

TEST(SSolution, FullScopeMatchesFullSearch) {
  Problem p = arbdef_family(2, 2);
  for (std::size_t n : {4, 5}) {
    Hypergraph h = Hypergraph::of(cycle_graph(n));
    SolveResult a = find_S_solution(model_of(p), h, std::vector<bool>(n, true));
    SolveResult b = find_nonbipartite_solution(model_of(p), h);
    EXPECT_EQ(a.verdict, b.verdict);
  }
  Problem one = arbdef_family(2, 1);
  Hypergraph c5 = Hypergraph::of(cycle_graph(5));
  EXPECT_EQ(find_S_solution(model_of(one), c5, std::vector<bool>(5, true)).verdict, Verdict::unsat);
}

TEST(SSolution, IndependentSetWithSingleColour) {
  Problem p = arbdef_family(2, 1);
  Hypergraph h = Hypergraph::of(cycle_graph(6));
  std::vector<bool> s{true, false, true, false, true, false};
  BipartiteGraph g = incidence_graph(h);
  SolutionAssignment a;
  for (auto [v, e] : g.edges) {
    if (s[v])
      a.labels.push_back(p.require_id("L1"));
    else
      a.labels.push_back(std::nullopt);
  }
  a.s_scoped = true;
  EXPECT_TRUE(check_S_solution(model_of(p), h, s, a).ok);
  SolveResult r = find_S_solution(model_of(p), h, s);
  ASSERT_EQ(r.verdict, Verdict::sat);
  EXPECT_TRUE(check_S_solution(model_of(p), h, s, *r.solution).ok);
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (!s[g.edges[e].first]) {
      EXPECT_FALSE(r.solution->labels[e]);
    }
}

TEST(SSolution, BoundaryFilterKeepsPointersInside) {
  LiftedProblem lp = lift(ruling_family(2, 1, 1), 3, 2);
  Domain ok = pointer_free_labels(lp);
  EXPECT_LT(ok.count(), lp.size());
  std::mt19937_64 rng(5);
  int found = 0;
  for (int t = 0; t < 20; ++t) {
    GeneratedGraph gg = gen_regular_girth(8, 3, 4, rng());
    Hypergraph h = Hypergraph::of(gg.graph);
    std::vector<bool> s(8, false);
    for (std::size_t v = 0; v < 8; ++v) s[v] = rng() % 3 != 0;
    SolveResult r = find_S_solution(model_of(lp), h, s, ok);
    ASSERT_NE(r.verdict, Verdict::indeterminate);
    if (r.verdict != Verdict::sat) continue;
    ++found;
    EXPECT_TRUE(check_S_solution(model_of(lp), h, s, *r.solution).ok);
    EXPECT_TRUE(boundary_pointer_free(lp, h, s, *r.solution));
  }
  EXPECT_GT(found, 0);
}

TEST(ZeroRound, FullConstraintsAreSolvable) {
  Constraint w, b;
  w.arity = 2;
  b.arity = 2;
  w.configs = {{0, 0}, {0, 1}, {1, 1}};
  b.configs = w.configs;
  Problem p({"A", "B"}, w, b);
  BipartiteGraph g = bipartite_cycle(3);
  OracleResult r = zero_round_supported_solvable(p, g, 2, 2);
  ASSERT_EQ(r.verdict, Verdict::sat);
  for (const auto& input : admissible_inputs(g, 2, 2)) {
    SolutionAssignment a = run_zero_round(*r.algorithm, g, input);
    EXPECT_TRUE(check_zero_round_run(p, g, input, a).ok);
  }
}

TEST(ZeroRound, EmptyInputGivesEmptyAssignment) {
  Problem p = maximal_matching_problem(2);
  BipartiteGraph g = bipartite_cycle(3);
  OracleResult r = zero_round_supported_solvable(p, g, 2, 2);
  ZeroRoundAlgorithm alg = r.algorithm ? *r.algorithm : ZeroRoundAlgorithm{2, 2, {}};
  if (!r.algorithm) alg.tables.resize(3);
  SolutionAssignment a = run_zero_round(alg, g, {});
  for (const auto& l : a.labels) EXPECT_FALSE(l);
  EXPECT_TRUE(check_zero_round_run(p, g, {}, a).ok);
}

TEST(ZeroRound, AgreesWithLiftOnSmallSupports) {
  std::mt19937_64 rng(71);
  std::vector<BipartiteGraph> supports{bipartite_cycle(3), bipartite_cycle(4), double_cover(cycle_graph(5))};
  int sat = 0, unsat = 0;
  for (int i = 0; i < 30; ++i) {
    const BipartiteGraph& g = supports[i % supports.size()];
    std::size_t dw = 1 + i % 2, db = 1 + (i / 2) % 2;
    Problem p = oracle::random_problem(rng, 2 + i % 2, dw, db, 0.5);
    OracleResult o = zero_round_supported_solvable(p, g, dw, db);
    SolveResult l = find_bipartite_solution(model_of(lift(p, 2, 2)), g);
    ASSERT_NE(o.verdict, Verdict::indeterminate);
    ASSERT_NE(l.verdict, Verdict::indeterminate);
    EXPECT_EQ(o.verdict, l.verdict) << format_problem(p);
    (o.verdict == Verdict::sat ? sat : unsat)++;
    if (o.algorithm) {
      auto inputs = admissible_inputs(g, dw, db);
      for (std::size_t k = 0; k < inputs.size(); k += 1 + inputs.size() / 20) {
        SolutionAssignment a = run_zero_round(*o.algorithm, g, inputs[k]);
        EXPECT_TRUE(check_zero_round_run(p, g, inputs[k], a).ok);
      }
    }
  }
  EXPECT_GT(sat, 0);
  EXPECT_GT(unsat, 0);
}

TEST(ZeroRound, Preconditions) {
  Problem p = maximal_matching_problem(2);
  EXPECT_THROW(zero_round_supported_solvable(p, bipartite_cycle(3), 3, 2), PreconditionError);
  BipartiteGraph uneven(2, 1, {{0, 0}, {1, 0}});
  EXPECT_THROW(zero_round_supported_solvable(p, BipartiteGraph(2, 2, {{0, 0}, {0, 1}, {1, 1}}), 1, 1),
               PreconditionError);
}

TEST(Audit, CountsMembers) {
  Problem base = matching_family(3, 0, 1);
  LiftedProblem lp = lift(base, 3, 3);
  Model m = model_of(lp);
  BipartiteGraph g = complete_bipartite(3, 3);
  LabelId x_only = *lp.index_of(bit(base.require_id("X")));
  SolutionAssignment a;
  a.labels.assign(g.edges.size(), x_only);
  EXPECT_EQ(audit_labelset_counts(m, g, a, base.require_id("M")).total, 0u);
  EXPECT_EQ(audit_labelset_counts(m, g, a, base.require_id("X")).total, 9u);
}

// The counting bounds concern the last problem of the sequence, where
// x = Δ' - 1 - y and each white configuration holds exactly one P.
TEST(Audit, MatchingLiftSolutionsRespectCountingBounds) {
  int audited = 0;
  for (auto [delta, din, y] : {std::tuple{4, 3, 1}, {4, 3, 2}, {5, 3, 2}, {5, 4, 1}, {5, 4, 2}, {6, 4, 2},
                               {6, 5, 1}, {6, 5, 3}, {4, 2, 1}}) {
    int x = din - 1 - y;
    Problem base = matching_family(din, x, y);
    LiftedProblem lp = lift(base, delta, delta);
    Model m = model_of(lp);
    for (std::size_t n : {delta, delta + 2}) {
      BipartiteGraph g = gen_biregular(n, n, delta, delta, n);
      SolveResult r = find_bipartite_solution(m, g);
      ASSERT_NE(r.verdict, Verdict::indeterminate) << delta << " " << din << " " << y << " n=" << n;
      if (!r.solution) continue;
      double nd = static_cast<double>(n);
      auto mc = audit_labelset_counts(m, g, *r.solution, base.require_id("M")).total;
      auto pc = audit_labelset_counts(m, g, *r.solution, base.require_id("P")).total;
      EXPECT_LE(mc, n * static_cast<std::size_t>(y));
      EXPECT_LE(pc, n * static_cast<std::size_t>(din - 1));
      EXPECT_GE(static_cast<double>(pc), nd * ((delta - din) / 2.0 - y));
      ++audited;
    }
  }
  EXPECT_EQ(audited, 16);
}
