#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "../oracles.hpp"

using namespace sre;

namespace {

using NameSet = std::set<std::vector<std::string>>;

NameSet named(const Problem& p, Side s) {
  NameSet out;
  for (const Config& c : p.constraint(s).configs) {
    auto n = p.names(c);
    std::sort(n.begin(), n.end());
    out.insert(n);
  }
  return out;
}

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

NameSet lines(std::initializer_list<const char*> ls) {
  NameSet out;
  for (const char* l : ls) out.insert(words(l));
  return out;
}

Hypergraph star(std::size_t leaves) {
  std::vector<std::pair<std::size_t, std::size_t>> es;
  for (std::size_t i = 1; i <= leaves; ++i) es.push_back({0, i});
  return Hypergraph::of(Graph(leaves + 1, es));
}

// Labels every half-edge at the centre of a star with the closure of the
// named base labels.
SolutionAssignment star_labels(const LiftedProblem& lp, const Hypergraph& h,
                               const std::vector<std::vector<std::string>>& per_edge) {
  BipartiteGraph g = incidence_graph(h);
  SolutionAssignment a;
  a.labels.assign(g.edges.size(), std::nullopt);
  a.s_scoped = true;
  const Diagram& d = lp.base_black_diagram();
  for (std::size_t j = 0; j < g.white_edges[0].size(); ++j)
    a.labels[g.white_edges[0][j]] = *lp.index_of(d.closure(lp.base().label_set(per_edge[j])));
  return a;
}

std::vector<bool> center_only(std::size_t n) {
  std::vector<bool> s(n, false);
  s[0] = true;
  return s;
}

Hypergraph double_cover_graph(std::size_t half, std::size_t delta, std::uint64_t seed) {
  GeneratedGraph gg = gen_regular_girth(half, delta, 3, seed, 500);
  return Hypergraph::of(double_cover(gg.graph).as_graph());
}

std::size_t count(const std::vector<bool>& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), true)); }

}  // namespace

TEST(Families, MaximalMatchingShapes) {
  Problem p3 = maximal_matching_problem(3);
  EXPECT_EQ(named(p3, Side::white), lines({"M O O", "P P P"}));
  EXPECT_EQ(named(p3, Side::black), lines({"M O O", "M O P", "M P P", "O O O"}));
  Problem p2 = maximal_matching_problem(2);
  EXPECT_EQ(named(p2, Side::white), lines({"M O", "P P"}));
  EXPECT_EQ(named(p2, Side::black), lines({"M O", "M P", "O O"}));
  EXPECT_THROW(maximal_matching_problem(1), PreconditionError);
}

TEST(Families, MatchingFamilyShapes) {
  Problem p = matching_family(3, 0, 1);
  EXPECT_EQ(named(p, Side::white), lines({"M O O", "P P X", "O X Z"}));
  for (Side s : {Side::white, Side::black})
    for (const auto& c : named(p, s)) {
      auto m = std::count(c.begin(), c.end(), "M");
      if (m) {
        EXPECT_EQ(m, 1);
      }
    }
  Problem q = matching_family(5, 1, 2);
  EXPECT_EQ(named(q, Side::white), lines({"X M O O O", "X X O P P", "X X Z O O"}));
  EXPECT_THROW(matching_family(3, 0, 0), PreconditionError);
  EXPECT_THROW(matching_family(3, 0, 3), PreconditionError);
  EXPECT_THROW(matching_family(3, 2, 2), PreconditionError);
}

TEST(Families, ArbdefectiveShapes) {
  Problem p = arbdef_family(3, 1);
  EXPECT_EQ(p.label_count(), 2u);
  EXPECT_EQ(named(p, Side::white), lines({"L1 L1 L1"}));
  EXPECT_EQ(named(p, Side::black), lines({"L1 X", "X X"}));
  Problem q = arbdef_family(3, 2);
  EXPECT_EQ(q.label_count(), 4u);
  EXPECT_EQ(named(q, Side::white), lines({"L1 L1 L1", "L2 L2 L2", "L1_2 L1_2 X"}));
  EXPECT_TRUE(named(q, Side::black).count(words("L1 L2")));
  EXPECT_FALSE(named(q, Side::black).count(words("L1 L1_2")));
  EXPECT_EQ(color_label({1, 3}), "L1_3");
  EXPECT_EQ(parse_color_label("L1_3"), std::optional<std::uint64_t>{5});
  EXPECT_FALSE(parse_color_label("L1_"));
  EXPECT_FALSE(parse_color_label("X"));
}

TEST(Families, RulingFamilyShapes) {
  EXPECT_EQ(ruling_family(3, 2, 0), arbdef_family(3, 2));
  Problem p = ruling_family(3, 1, 1);
  EXPECT_EQ(named(p, Side::white), lines({"L1 L1 L1", "P1 U1 U1"}));
  NameSet b = named(p, Side::black);
  for (const char* yes : {"P1 L1", "U1 L1", "U1 U1", "X X", "X P1", "X U1", "X L1"})
    EXPECT_TRUE(b.count(words(yes))) << yes;
  for (const char* no : {"P1 U1", "P1 P1", "L1 L1"}) EXPECT_FALSE(b.count(words(no))) << no;
  // Lower pointers may face higher-level U labels only.
  NameSet b2 = named(ruling_family(3, 1, 2), Side::black);
  EXPECT_TRUE(b2.count(words("P2 U1")));
  EXPECT_FALSE(b2.count(words("P1 U2")));
}

TEST(Families, RulingBlackDiagramAgainstDefinition) {
  Problem p = ruling_family(3, 3, 2);
  Diagram d = compute_diagram(p, Side::black);
  auto id = [&](const char* n) { return p.require_id(n); };
  auto geq = [&](const char* x, const char* y) { return has(d.up[id(y)], id(x)); };
  for (LabelId x = 0; x < p.label_count(); ++x)
    for (LabelId y = 0; y < p.label_count(); ++y)
      EXPECT_EQ(has(d.up[y], x), oracle::stronger(p, Side::black, x, y)) << p.name(x) << " " << p.name(y);
  for (LabelId y = 0; y < p.label_count(); ++y) EXPECT_TRUE(geq("X", p.name(y).c_str()));
  for (const char* u : {"U1", "U2"})
    for (const char* q : {"P1", "P2"}) EXPECT_TRUE(geq(u, q));
  EXPECT_TRUE(geq("P2", "P1"));
  EXPECT_FALSE(geq("P1", "P2"));
  // U1 also tolerates P2, U2 does not tolerate P1.
  EXPECT_TRUE(geq("U1", "U2"));
  EXPECT_FALSE(geq("U2", "U1"));
  EXPECT_TRUE(geq("L1", "L1_2"));
  EXPECT_FALSE(geq("L1_2", "L1"));
}

TEST(Families, MatchingRelaxationsAlongParameters) {
  std::size_t delta = 3;
  std::vector<std::pair<std::size_t, std::size_t>> params;
  for (std::size_t y = 1; y < delta; ++y)
    for (std::size_t x = 0; x + y <= delta; ++x) params.push_back({x, y});
  auto start = std::chrono::steady_clock::now();
  for (auto [x, y] : params)
    for (auto [x2, y2] : params) {
      if (x2 < x || y2 < y) continue;
      Problem a = matching_family(delta, x, y), b = matching_family(delta, x2, y2);
      auto f = find_relaxation(a, b);
      ASSERT_TRUE(f) << x << "," << y << " -> " << x2 << "," << y2;
      EXPECT_TRUE(check_relaxation(a, b, *f).ok);
    }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 30.0);
}

TEST(Extraction, EmptySubsetGivesEmptyOutput) {
  Hypergraph h = Hypergraph::of(cycle_graph(6));
  LiftedProblem lp = lift(arbdef_family(2, 1), 2, 2);
  std::vector<bool> s(6, false);
  BaseExtraction be = lift_solution_to_base(lp, h, s, SolutionAssignment{});
  for (const auto& l : be.solution.labels) EXPECT_FALSE(l);
  EXPECT_EQ(be.color_sets, std::vector<std::uint64_t>(6, 0));
  Coloring col = arbdef_to_coloring(be.problem, h, s, be.solution);
  EXPECT_EQ(col.colors_used, 0u);
  EXPECT_TRUE(col.order.empty());
}

TEST(Extraction, StarWithSingleColourClosure) {
  std::size_t delta = 4;
  Hypergraph h = star(delta);
  LiftedProblem lp = lift(arbdef_family(3, 2), delta, 2);
  std::vector<std::vector<std::string>> per(delta, {"L1"});
  auto s = center_only(delta + 1);
  BaseExtraction be = lift_solution_to_base(lp, h, s, star_labels(lp, h, per));
  EXPECT_EQ(be.color_sets[0], 1u);
  BipartiteGraph g = incidence_graph(h);
  LabelId l1 = be.problem.require_id("L1");
  for (std::size_t e : g.white_edges[0]) EXPECT_EQ(be.solution.labels[e], l1);
  EXPECT_TRUE(check_S_solution(model_of(be.problem), h, s, be.solution).ok);
}

TEST(Extraction, MatchableCoverHasNoViolator) {
  Hypergraph h = star(2);
  LiftedProblem lp = lift(arbdef_family(2, 2), 2, 2);
  EXPECT_THROW(lift_solution_to_base(lp, h, center_only(3), star_labels(lp, h, {{"L1"}, {"L2"}})),
               HallViolatorMissing);
  EXPECT_THROW(lift_solution_to_base(lift(arbdef_family(1, 2), 2, 2), h, center_only(3), SolutionAssignment{}),
               PreconditionError);
}

TEST(Extraction, HallViolatorExamples) {
  EXPECT_EQ(hall_violator(2, {1, 2}), std::nullopt);
  EXPECT_EQ(hall_violator(2, {1, 1, 1}), std::optional<std::uint64_t>{1});
  EXPECT_EQ(hall_violator(2, {3, 3}), std::optional<std::uint64_t>{3});
  EXPECT_EQ(hall_violator(1, {0, 0}), std::nullopt);
}

TEST(Extraction, PaletteExhaustionOnCompleteGraph) {
  Hypergraph h = Hypergraph::of(complete_graph(4));
  Problem base = arbdef_family(3, 1);
  BipartiteGraph g = incidence_graph(h);
  SolutionAssignment a;
  a.labels.assign(g.edges.size(), base.require_id("L1"));
  std::vector<bool> s(4, true);
  EXPECT_THROW(arbdef_to_coloring(base, h, s, a), OrderingStuck);
}

TEST(Extraction, RandomSolutionsGiveProperColourings) {
  std::mt19937_64 rng(7);
  int sat = 0;
  for (int it = 0; it < 120; ++it) {
    std::size_t delta = 2 + it % 3, n = (delta == 3 ? 8 : 10) + 2 * (it % 2);
    std::size_t din = 1 + rng() % delta, k = std::min<std::size_t>(din, 1 + rng() % 2);
    Hypergraph h = Hypergraph::of(gen_regular_girth(n, delta, 3, rng(), 200).graph);
    std::vector<bool> s(n);
    for (auto&& b : s) b = rng() % 3 != 0;
    LiftedProblem lp = lift(arbdef_family(din, k), delta, 2);
    auto r = find_S_solution(model_of(lp), h, s);
    ASSERT_NE(r.verdict, Verdict::indeterminate);
    if (r.verdict != Verdict::sat) continue;
    ++sat;
    BaseExtraction be = lift_solution_to_base(lp, h, s, *r.solution);
    ASSERT_TRUE(check_S_solution(model_of(be.problem), h, s, be.solution).ok);
    Coloring col = arbdef_to_coloring(be.problem, h, s, be.solution);
    EXPECT_TRUE(proper_on_subset(h, s, col.color));
    EXPECT_LE(*std::max_element(col.color.begin(), col.color.end()), 2 * k);
    for (std::size_t v = 0; v < n; ++v) {
      if (!s[v]) continue;
      // Colour c_{i,j} = 2(i-1)+j belongs to the node's colour set.
      std::size_t i = (col.color[v] + 1) / 2;
      EXPECT_TRUE((be.color_sets[v] >> (i - 1)) & 1U);
    }
  }
  EXPECT_GE(sat, 15);
}

TEST(Peeling, NoPointersLeavesSubsetUnchanged) {
  RulingBarParams prm{6, 2, 0, 2, 1};
  LiftDisjunction bar = make_ruling_bar(prm);
  const LiftedProblem& lp = bar.edge_lift();
  Domain no_pu;
  for (std::size_t i = 0; i < lp.size(); ++i) {
    bool ok = true;
    for (const auto& n : lp.base().set_names(lp.alphabet()[i]))
      if (n == "P1" || n == "U1") ok = false;
    if (ok) no_pu.set(i);
  }
  std::mt19937_64 rng(3);
  int done = 0;
  for (int it = 0; it < 20 && done < 3; ++it) {
    Hypergraph h = double_cover_graph(8, 6, rng());
    std::vector<bool> s(h.n);
    for (auto&& b : s) b = rng() % 3 == 0;
    Model m = model_of(bar);
    auto full = m.white.full;
    m.white.full = std::make_shared<MultisetPredicate>([full, no_pu](const Config& c) {
      return std::all_of(c.begin(), c.end(), [&](LabelId l) { return no_pu.test(l); }) && (*full)(c);
    });
    auto r = find_S_solution(m, h, s, no_pu);
    if (r.verdict != Verdict::sat) continue;
    ++done;
    PeelResult pr = peel_ruling_level(prm, h, s, *r.solution);
    EXPECT_EQ(pr.s_next, s);
    EXPECT_EQ(pr.type_counts[0], count(s));
    const LiftedProblem& dst = pr.problem.edge_lift();
    for (std::size_t e = 0; e < r.solution->labels.size(); ++e) {
      if (!r.solution->labels[e]) continue;
      ASSERT_TRUE(pr.solution.labels[e]);
      EXPECT_EQ(dst.names()[*pr.solution.labels[e]], lp.names()[*r.solution->labels[e]]);
    }
  }
  EXPECT_GE(done, 1);
}

TEST(Peeling, OneLevelOnDoubleCovers) {
  RulingBarParams prm{6, 2, 0, 1, 1};
  LiftDisjunction bar = make_ruling_bar(prm);
  const LiftedProblem& lp = bar.edge_lift();
  std::mt19937_64 rng(11);
  int sat = 0;
  for (int it = 0; it < 12; ++it) {
    Hypergraph h = double_cover_graph(8, 6, rng());
    std::vector<bool> s(h.n);
    for (auto&& b : s) b = rng() % 2 != 0;
    SearchOptions o;
    o.seed = static_cast<std::uint64_t>(it + 1);
    o.max_nodes = 200000;
    auto r = find_S_solution(model_of(lp), h, s, pointer_free_labels(lp), o);
    if (r.verdict != Verdict::sat) continue;
    ++sat;
    ASSERT_TRUE(check_S_solution(model_of(bar), h, s, *r.solution).ok);
    PeelResult pr = peel_ruling_level(prm, h, s, *r.solution);
    EXPECT_EQ(pr.params.x, 1u);
    EXPECT_EQ(pr.params.k, 2u);
    EXPECT_EQ(pr.params.beta, 0u);
    EXPECT_TRUE(check_S_solution(model_of(pr.problem), h, pr.s_next, pr.solution).ok);
    EXPECT_TRUE(boundary_pointer_free(pr.problem.edge_lift(), h, pr.s_next, pr.solution));
    EXPECT_GE(4 * count(pr.s_next), count(s));
    for (std::size_t v = 0; v < h.n; ++v)
      if (pr.s_next[v]) {
        EXPECT_TRUE(s[v]);
      }
  }
  EXPECT_GE(sat, 6);
}

TEST(Peeling, Preconditions) {
  Hypergraph h = double_cover_graph(8, 6, 1);
  std::vector<bool> s(h.n, false);
  EXPECT_THROW(peel_ruling_level({6, 2, 0, 1, 0}, h, s, {}), PreconditionError);
  EXPECT_THROW(peel_ruling_level({5, 2, 0, 1, 1}, h, s, {}), PreconditionError);
  EXPECT_THROW(peel_ruling_level({6, 2, 1, 1, 1}, h, s, {}), PreconditionError);
  EXPECT_THROW(bar_to_arbdef_lift({6, 2, 0, 1, 1}, lift(arbdef_family(2, 1), 6, 2), h, s, {}), PreconditionError);
}
