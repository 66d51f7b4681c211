#include <gtest/gtest.h>

#include <random>

#include "../oracles.hpp"

using namespace sre;

namespace {

const char* kMM3 = "white:\nM O O\nP P P\nblack:\nM [O P] [O P]\nO O O";

std::set<std::vector<std::string>> names_of(const Problem& p, Side s) {
  std::set<std::vector<std::string>> out;
  for (const Config& c : p.constraint(s).configs) out.insert(p.names(c));
  return out;
}

LabelSet set_of(const Problem& p, std::initializer_list<const char*> names) {
  LabelSet s = 0;
  for (const char* n : names) s |= bit(p.require_id(n));
  return s;
}

}  // namespace

TEST(Parse, MaximalMatchingText) {
  Problem p = parse_problem(kMM3);
  EXPECT_EQ(p.labels(), (std::vector<std::string>{"M", "O", "P"}));
  EXPECT_EQ(p.arity(Side::white), 3u);
  EXPECT_EQ(p.arity(Side::black), 3u);
  EXPECT_EQ(names_of(p, Side::white), (std::set<std::vector<std::string>>{{"M", "O", "O"}, {"P", "P", "P"}}));
  EXPECT_EQ(names_of(p, Side::black),
            (std::set<std::vector<std::string>>{{"M", "O", "O"}, {"M", "O", "P"}, {"M", "P", "P"}, {"O", "O", "O"}}));
  EXPECT_EQ(p, maximal_matching_problem(3));
}

TEST(Parse, OneLabelProblem) {
  Problem p = parse_problem("white:\nA A\nblack:\nA A");
  EXPECT_EQ(p.label_count(), 1u);
  EXPECT_EQ(p.arity(Side::white), 2u);
  EXPECT_EQ(p.arity(Side::black), 2u);
}

TEST(Parse, ExponentExpansion) {
  Problem p = parse_problem("white:\nX^2 M O^1\nblack:\nO^4");
  EXPECT_EQ(p.arity(Side::white), 4u);
  EXPECT_EQ(p.arity(Side::black), 4u);
  EXPECT_EQ(names_of(p, Side::white), (std::set<std::vector<std::string>>{{"M", "O", "X", "X"}}));
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse_problem("white:\nA A\nA\nblack:\nA A");
    FAIL() << "arity mismatch accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  // Sides may have different arities.
  EXPECT_EQ(parse_problem("white:\nA A\nblack:\nA").arity(Side::black), 1u);
  EXPECT_THROW(parse_problem("white:\nA [B\nblack:\nA A"), ParseError);
  EXPECT_THROW(parse_problem("white:\nblack:\nA A"), ParseError);
}

TEST(Parse, EmptyKeyword) {
  Problem p = parse_problem("white:\nempty\nblack:\nA A");
  EXPECT_TRUE(p.white().empty());
  EXPECT_EQ(p.arity(Side::white), 2u);
  EXPECT_EQ(parse_problem(format_problem(p)), p);
}

TEST(Format, OneLabelUsesExponent) {
  Problem p = parse_problem("white:\nA A\nblack:\nA A");
  EXPECT_EQ(format_problem(p), "white:\nA^2\nblack:\nA^2");
}

TEST(Format, CondensesOnePositionDifference) {
  Problem p = Problem::from_names(2, {{"A", "B"}, {"A", "C"}}, 2, {{"A", "A"}});
  EXPECT_EQ(condensed_lines(p, Side::white), (std::vector<std::string>{"A [B C]"}));
}

TEST(Format, MaximalMatchingLines) {
  EXPECT_EQ(format_problem(maximal_matching_problem(3)), "white:\nM O^2\nP^3\nblack:\nM [O P]^2\nO^3");
}

TEST(Expand, ProductOfGroups) {
  auto e = expand_condensed("[A B] [C D] E");
  EXPECT_EQ(e, (std::set<std::vector<std::string>>{
                   {"A", "C", "E"}, {"A", "D", "E"}, {"B", "C", "E"}, {"B", "D", "E"}}));
  EXPECT_EQ(expand_condensed("A^3"), (std::set<std::vector<std::string>>{{"A", "A", "A"}}));
  EXPECT_EQ(expand_condensed("[A B] [A B]"),
            (std::set<std::vector<std::string>>{{"A", "A"}, {"A", "B"}, {"B", "B"}}));
}

TEST(Strength, MaximalMatchingBlack) {
  Problem p = maximal_matching_problem(3);
  LabelId o = p.require_id("O"), pp = p.require_id("P");
  EXPECT_TRUE(at_least_as_strong(p, Side::black, o, pp));
  EXPECT_FALSE(at_least_as_strong(p, Side::black, pp, o));
  for (LabelId l = 0; l < p.label_count(); ++l) EXPECT_TRUE(at_least_as_strong(p, Side::white, l, l));
}

TEST(Diagram, MaximalMatchingBlackIsSingleEdge) {
  Problem p = maximal_matching_problem(3);
  Diagram d = compute_diagram(p, Side::black);
  ASSERT_EQ(d.edges.size(), 1u);
  EXPECT_EQ(p.name(d.edges[0].first), "P");
  EXPECT_EQ(p.name(d.edges[0].second), "O");
}

TEST(Diagram, MaximalMatchingWhite) {
  Problem p = maximal_matching_problem(3);
  Diagram d = compute_diagram(p, Side::white);
  // M O^2 and P^3 share no label, so no substitution survives.
  EXPECT_TRUE(d.edges.empty());
}

TEST(Diagram, OneLabelHasNoEdges) {
  EXPECT_TRUE(compute_diagram(parse_problem("white:\nA A\nblack:\nA A"), Side::black).edges.empty());
}

TEST(Diagram, MatchingFamilyReachability) {
  Problem p = matching_family(3, 0, 1);
  Diagram d = compute_diagram(p, Side::black);
  EXPECT_EQ(d.up[p.require_id("Z")], set_of(p, {"Z", "M", "P", "O", "X"}));
  EXPECT_EQ(d.up[p.require_id("P")], set_of(p, {"P", "O", "X"}));
  EXPECT_EQ(d.up[p.require_id("M")], set_of(p, {"M", "X"}));
  EXPECT_EQ(d.up[p.require_id("O")], set_of(p, {"O", "X"}));
  EXPECT_EQ(d.up[p.require_id("X")], set_of(p, {"X"}));
}

TEST(RightClosed, MatchingFamilySevenSets) {
  for (auto [delta, x, y] : {std::tuple{3, 0, 1}, {4, 0, 1}, {4, 1, 1}, {4, 0, 2}, {5, 2, 1}, {5, 1, 2}}) {
    Problem p = matching_family(delta, x, y);
    auto rc = right_closed_sets(compute_diagram(p, Side::black));
    std::set<LabelSet> got(rc.begin(), rc.end());
    std::set<LabelSet> want{set_of(p, {"X"}),           set_of(p, {"O", "X"}),
                            set_of(p, {"M", "X"}),      set_of(p, {"M", "O", "X"}),
                            set_of(p, {"P", "O", "X"}), set_of(p, {"M", "P", "O", "X"}),
                            set_of(p, {"Z", "M", "P", "O", "X"})};
    EXPECT_EQ(got, want) << delta << " " << x << " " << y;
  }
}

TEST(RightClosed, MatchingFamilyDegenerateWhenOneFreeSlot) {
  // With x + y = delta - 1 the single [O X] slot makes O as strong as X.
  Problem p = matching_family(4, 2, 1);
  Diagram d = compute_diagram(p, Side::black);
  EXPECT_TRUE(d.stronger(p.require_id("O"), p.require_id("X")));
  auto rc = right_closed_sets(d);
  auto naive = oracle::right_closed(p, Side::black);
  EXPECT_EQ(std::set<LabelSet>(rc.begin(), rc.end()), std::set<LabelSet>(naive.begin(), naive.end()));
  EXPECT_EQ(rc.size(), 5u);
}

TEST(RightClosed, EdgelessAndChain) {
  Problem edgeless = Problem::from_names(1, {{"A"}, {"B"}}, 2, {{"A", "A"}, {"B", "B"}});
  auto rc = right_closed_sets(compute_diagram(edgeless, Side::black));
  EXPECT_EQ(std::set<LabelSet>(rc.begin(), rc.end()), (std::set<LabelSet>{0b01, 0b10, 0b11}));

  Problem chain = Problem::from_names(2, {{"A", "B"}}, 2, {{"C", "C"}, {"B", "C"}});
  Diagram d = compute_diagram(chain, Side::black);
  auto rc2 = right_closed_sets(d);
  EXPECT_EQ(std::set<LabelSet>(rc2.begin(), rc2.end()), (std::set<LabelSet>{0b100, 0b110, 0b111}));
  auto h = d.hasse();
  using Edges = std::set<std::pair<LabelId, LabelId>>;
  EXPECT_EQ(Edges(h.begin(), h.end()), (Edges{{0, 1}, {1, 2}}));
}

TEST(Equivalence, IdentityRenamingAndArity) {
  Problem p = maximal_matching_problem(3);
  auto id = find_isomorphism(p, p);
  ASSERT_TRUE(id);
  for (LabelId l = 0; l < p.label_count(); ++l) EXPECT_EQ((*id)[l], l);

  Problem a = Problem::from_names(2, {{"A", "A"}, {"A", "B"}}, 2, {{"B", "B"}});
  Problem b = Problem::from_names(2, {{"B", "B"}, {"A", "B"}}, 2, {{"A", "A"}});
  auto f = find_isomorphism(a, b);
  ASSERT_TRUE(f);
  EXPECT_EQ(*f, (std::vector<LabelId>{1, 0}));

  Problem w2 = Problem::from_names(2, {{"A", "A"}}, 2, {{"A", "A"}});
  Problem w3 = Problem::from_names(3, {{"A", "A", "A"}}, 2, {{"A", "A"}});
  EXPECT_FALSE(find_isomorphism(w2, w3));
}

TEST(Equivalence, IsAnEquivalenceOnRandomCorpus) {
  std::mt19937_64 rng(5);
  std::vector<Problem> corpus;
  for (int i = 0; i < 12; ++i) {
    Problem p = oracle::random_problem(rng, 3, 2, 2, 0.5);
    corpus.push_back(p);
    // A relabelled copy: reverse the alphabet order.
    std::vector<std::vector<std::string>> w, b;
    auto rn = [&](const Config& c) {
      std::vector<std::string> out;
      for (LabelId l : c) out.push_back(std::string(1, static_cast<char>('C' - l)));
      return out;
    };
    for (const auto& c : p.white().configs) w.push_back(rn(c));
    for (const auto& c : p.black().configs) b.push_back(rn(c));
    corpus.push_back(Problem::from_names(2, w, 2, b, {"A", "B", "C"}));
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    EXPECT_TRUE(problems_equivalent(corpus[i], corpus[i]));
    if (i % 2 == 0) EXPECT_TRUE(problems_equivalent(corpus[i], corpus[i + 1]));
    for (std::size_t j = 0; j < corpus.size(); ++j) {
      auto f = find_isomorphism(corpus[i], corpus[j]);
      auto g = find_isomorphism(corpus[j], corpus[i]);
      EXPECT_EQ(f.has_value(), g.has_value());
      if (f) {
        for (LabelId l = 0; l < f->size(); ++l) EXPECT_EQ((*g)[(*f)[l]], l);
        for (std::size_t k = 0; k < corpus.size(); ++k)
          if (problems_equivalent(corpus[j], corpus[k])) EXPECT_TRUE(problems_equivalent(corpus[i], corpus[k]));
      }
    }
  }
}

TEST(Invariants, RoundTripOnGeneratedProblems) {
  std::mt19937_64 rng(17);
  std::vector<Problem> ps{maximal_matching_problem(3), matching_family(4, 1, 1), arbdef_family(3, 2),
                          ruling_family(3, 2, 1)};
  for (int i = 0; i < 60; ++i)
    ps.push_back(oracle::random_problem(rng, 1 + i % 4, 1 + i % 3, 1 + (i / 3) % 3, 0.4));
  // The alphabet of a parsed problem is the set of labels it uses.
  for (const Problem& p : ps) EXPECT_EQ(parse_problem(format_problem(p)), oracle::used_only(p));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(parse_problem(format_problem(ps[i])), ps[i]);
}

TEST(Invariants, StrengthMatchesDefinition) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 80; ++i) {
    Problem p = oracle::random_problem(rng, 2 + i % 5, 1 + i % 4, 1 + (i / 4) % 4, 0.6);
    for (Side s : {Side::white, Side::black})
      for (LabelId x = 0; x < p.label_count(); ++x)
        for (LabelId y = 0; y < p.label_count(); ++y)
          ASSERT_EQ(at_least_as_strong(p, s, x, y), oracle::stronger(p, s, x, y)) << format_problem(p);
  }
}

TEST(Invariants, RightClosedCountMatchesNaive) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 80; ++i) {
    Problem p = oracle::random_problem(rng, 2 + i % 5, 2, 2 + i % 2, 0.5);
    for (Side s : {Side::white, Side::black}) {
      auto rc = right_closed_sets(compute_diagram(p, s));
      auto naive = oracle::right_closed(p, s);
      EXPECT_EQ(std::set<LabelSet>(rc.begin(), rc.end()), std::set<LabelSet>(naive.begin(), naive.end()))
          << format_problem(p);
    }
  }
}

TEST(Invariants, SubstitutionAlongDiagramKeepsValidity) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 60; ++i) {
    Problem p = oracle::random_problem(rng, 2 + i % 4, 3, 2, 0.6);
    for (Side s : {Side::white, Side::black}) {
      Diagram d = compute_diagram(p, s);
      for (const Config& c : p.constraint(s).configs)
        for (std::size_t pos = 0; pos < c.size(); ++pos)
          for (LabelId x : members(d.up[c[pos]])) {
            Config e = c;
            e[pos] = x;
            EXPECT_TRUE(p.constraint(s).contains(oracle::sorted(e)));
          }
    }
  }
}
