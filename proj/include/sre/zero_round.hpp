#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <vector>

#include "sre/csp.hpp"
#include "sre/graphs.hpp"
#include "sre/problem.hpp"
#include "sre/solver.hpp"

namespace sre {

// Output tables of a 0-round white algorithm on a fixed support: for each
// white node and each admissible set of selected incident edges (sorted edge
// indices of the support), the labels output on those edges in order.
struct ZeroRoundAlgorithm {
  std::size_t delta_in = 0;
  std::size_t rank_in = 0;
  std::vector<std::map<std::vector<std::size_t>, std::vector<LabelId>>> tables;
};

struct OracleOptions {
  std::uint64_t max_nodes = 50000000;
  std::int64_t budget_ms = default_budget_ms();
};

struct OracleResult {
  Verdict verdict = Verdict::indeterminate;
  std::optional<ZeroRoundAlgorithm> algorithm;
  std::uint64_t nodes = 0;
  std::size_t slots = 0;
  std::size_t constraints = 0;
};

namespace detail {

// Backtracking with forward checking over small multiset constraints. Kept
// separate from Csp so that the two sides of the equivalence share no search
// code.
class TableSearch {
 public:
  TableSearch(std::size_t vars, LabelSet all) : dom_(vars, all), by_var_(vars) {}

  void add(std::vector<std::size_t> scope, const Constraint* c) {
    std::size_t id = cons_.size();
    for (std::size_t v : scope) by_var_[v].push_back(id);
    cons_.push_back({std::move(scope), c});
  }

  std::size_t constraint_count() const { return cons_.size(); }

  Verdict run(const OracleOptions& opt, std::vector<LabelId>& out, std::uint64_t& nodes) {
    opt_ = opt;
    start_ = std::chrono::steady_clock::now();
    value_.assign(dom_.size(), -1);
    nodes_ = 0;
    aborted_ = false;
    for (std::size_t c = 0; c < cons_.size(); ++c)
      if (!prune(c, dom_)) {
        nodes = nodes_;
        return Verdict::unsat;
      }
    bool ok = rec(dom_);
    nodes = nodes_;
    if (ok) {
      out.assign(value_.size(), 0);
      for (std::size_t v = 0; v < value_.size(); ++v) out[v] = static_cast<LabelId>(value_[v]);
      return Verdict::sat;
    }
    return aborted_ ? Verdict::indeterminate : Verdict::unsat;
  }

 private:
  struct Item {
    std::vector<std::size_t> scope;
    const Constraint* allowed;
  };

  // Removes values of scope variables that appear in no allowed completion.
  bool prune(std::size_t ci, std::vector<LabelSet>& dom) {
    const Item& it = cons_[ci];
    std::size_t k = it.scope.size();
    std::vector<LabelSet> seen(k, 0);
    std::vector<LabelId> pick(k);
    auto rec = [&](auto&& self, std::size_t j) -> void {
      if (j == k) {
        Config m(pick.begin(), pick.end());
        std::sort(m.begin(), m.end());
        if (it.allowed->contains(m))
          for (std::size_t i = 0; i < k; ++i) seen[i] |= bit(pick[i]);
        return;
      }
      for (LabelId l : members(dom[it.scope[j]])) {
        pick[j] = l;
        self(self, j + 1);
      }
    };
    rec(rec, 0);
    for (std::size_t i = 0; i < k; ++i) {
      dom[it.scope[i]] &= seen[i];
      if (!dom[it.scope[i]]) return false;
    }
    return true;
  }

  bool rec(std::vector<LabelSet>& dom) {
    std::size_t var = dom.size();
    std::size_t best = 65;
    for (std::size_t v = 0; v < dom.size(); ++v) {
      if (value_[v] >= 0) continue;
      std::size_t s = popcount(dom[v]);
      if (s < best) {
        best = s;
        var = v;
      }
    }
    if (var == dom.size()) return true;
    for (LabelId l : members(dom[var])) {
      if (++nodes_ > opt_.max_nodes ||
          ((nodes_ & 1023) == 0 &&
           std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count() >
               static_cast<double>(opt_.budget_ms))) {
        aborted_ = true;
        return false;
      }
      std::vector<LabelSet> next = dom;
      next[var] = bit(l);
      value_[var] = l;
      bool ok = true;
      for (std::size_t c : by_var_[var])
        if (!prune(c, next)) {
          ok = false;
          break;
        }
      if (ok) {
        // forced singletons become assignments
        std::vector<std::size_t> fixed;
        for (std::size_t v = 0; v < next.size(); ++v)
          if (value_[v] < 0 && popcount(next[v]) == 1) {
            value_[v] = static_cast<int>(members(next[v])[0]);
            fixed.push_back(v);
          }
        bool good = true;
        for (std::size_t v : fixed)
          for (std::size_t c : by_var_[v])
            if (good && !prune(c, next)) good = false;
        if (good && rec(next)) return true;
        for (std::size_t v : fixed) value_[v] = -1;
      }
      value_[var] = -1;
      if (aborted_) return false;
    }
    return false;
  }

  std::vector<LabelSet> dom_;
  std::vector<std::vector<std::size_t>> by_var_;
  std::vector<Item> cons_;
  std::vector<int> value_;
  OracleOptions opt_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace detail

// Decides whether p is solvable in 0 rounds by a white algorithm on the given
// support, for input subgraphs with white degree <= delta_in and black degree
// <= rank_in. Black nodes are checked over every jointly realizable
// combination of selections of their white neighbours.
inline OracleResult zero_round_supported_solvable(const Problem& p, const BipartiteGraph& support, std::size_t delta_in,
                                                  std::size_t rank_in, const OracleOptions& opt = {}) {
  if (p.label_count() > 64) throw ExplosionGuard("oracle: alphabet too large", 64, p.label_count());
  std::size_t dw = p.arity(Side::white), db = p.arity(Side::black);
  std::size_t nw = support.white_count;
  if (nw > 0) {
    std::size_t delta = support.white_degree(0);
    std::size_t r = support.black_count ? support.black_degree(0) : 0;
    if (!support.biregular(delta, r)) throw PreconditionError("oracle: support must be biregular");
    if (delta < delta_in || (support.black_count && r < rank_in))
      throw PreconditionError("oracle: support degrees must be at least the input degree bounds");
  }

  // slot ids per (white node, selected subset, position in subset)
  std::vector<std::map<std::vector<std::size_t>, std::vector<std::size_t>>> slot(nw);
  std::size_t slots = 0;
  for (std::size_t w = 0; w < nw; ++w) {
    const auto& es = support.white_edges[w];
    for (std::size_t k = 1; k <= std::min(delta_in, es.size()); ++k)
      for_each_index_subset(es.size(), k, [&](const std::vector<std::size_t>& idx) {
        std::vector<std::size_t> sel;
        for (std::size_t i : idx) sel.push_back(es[i]);
        std::sort(sel.begin(), sel.end());
        std::vector<std::size_t> ids;
        for (std::size_t i = 0; i < sel.size(); ++i) ids.push_back(slots++);
        slot[w][sel] = ids;
        return true;
      });
  }
  auto slot_of = [&](std::size_t w, const std::vector<std::size_t>& sel, std::size_t e) {
    const auto& ids = slot[w].at(sel);
    auto pos = std::find(sel.begin(), sel.end(), e) - sel.begin();
    return ids[static_cast<std::size_t>(pos)];
  };

  detail::TableSearch search(slots, full_set(p.label_count()));
  // white: selected degree equal to the white arity
  for (std::size_t w = 0; w < nw; ++w)
    for (const auto& [sel, ids] : slot[w])
      if (sel.size() == dw) search.add(ids, &p.white());

  // black: every realizable way the black node ends with exactly db selected edges
  if (db <= rank_in) {
    for (std::size_t b = 0; b < support.black_count; ++b) {
      const auto& es = support.black_edges[b];
      for_each_index_subset(es.size(), db, [&](const std::vector<std::size_t>& idx) {
        std::vector<std::size_t> f;
        for (std::size_t i : idx) f.push_back(es[i]);
        // candidate selections for each chosen edge's white endpoint
        std::vector<std::vector<const std::vector<std::size_t>*>> options(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
          std::size_t w = support.edges[f[i]].first;
          for (const auto& [sel, ids] : slot[w])
            if (std::binary_search(sel.begin(), sel.end(), f[i])) options[i].push_back(&sel);
        }
        std::vector<std::size_t> pick(f.size(), 0);
        std::vector<std::size_t> load(support.black_count, 0);
        auto rec = [&](auto&& self, std::size_t i) -> void {
          if (i == f.size()) {
            std::vector<std::size_t> scope;
            for (std::size_t j = 0; j < f.size(); ++j)
              scope.push_back(slot_of(support.edges[f[j]].first, *options[j][pick[j]], f[j]));
            search.add(scope, &p.black());
            return;
          }
          for (std::size_t o = 0; o < options[i].size(); ++o) {
            const auto& sel = *options[i][o];
            bool ok = true;
            for (std::size_t e : sel) {
              std::size_t bb = support.edges[e].second;
              if (++load[bb] > rank_in) ok = false;
            }
            if (ok) {
              pick[i] = o;
              self(self, i + 1);
            }
            for (std::size_t e : sel) --load[support.edges[e].second];
          }
        };
        rec(rec, 0);
        return true;
      });
    }
  }

  OracleResult out;
  out.slots = slots;
  out.constraints = search.constraint_count();
  std::vector<LabelId> values;
  out.verdict = search.run(opt, values, out.nodes);
  if (out.verdict == Verdict::sat) {
    ZeroRoundAlgorithm alg;
    alg.delta_in = delta_in;
    alg.rank_in = rank_in;
    alg.tables.resize(nw);
    for (std::size_t w = 0; w < nw; ++w)
      for (const auto& [sel, ids] : slot[w]) {
        std::vector<LabelId> labels;
        for (std::size_t id : ids) labels.push_back(values[id]);
        alg.tables[w][sel] = labels;
      }
    out.algorithm = alg;
  }
  return out;
}

// Reads the algorithm's outputs for the input subgraph given by a list of
// support edge indices. Only input edges receive labels.
inline SolutionAssignment run_zero_round(const ZeroRoundAlgorithm& alg, const BipartiteGraph& support,
                                         const std::vector<std::size_t>& input_edges) {
  SolutionAssignment a;
  a.labels.assign(support.edges.size(), std::nullopt);
  std::vector<std::vector<std::size_t>> sel(support.white_count);
  for (std::size_t e : input_edges) {
    if (e >= support.edges.size()) throw PreconditionError("run_zero_round: edge index out of range");
    sel[support.edges[e].first].push_back(e);
  }
  for (std::size_t w = 0; w < support.white_count; ++w) {
    if (sel[w].empty()) continue;
    std::sort(sel[w].begin(), sel[w].end());
    if (w >= alg.tables.size()) throw PreconditionError("run_zero_round: algorithm does not match the support");
    auto it = alg.tables[w].find(sel[w]);
    if (it == alg.tables[w].end()) throw PreconditionError("run_zero_round: no table entry for a selection");
    for (std::size_t i = 0; i < sel[w].size(); ++i) a.labels[sel[w][i]] = it->second[i];
  }
  return a;
}

// The input subgraph as a bipartite graph on the same node sets, plus the
// support edge index of each of its edges.
inline std::pair<BipartiteGraph, std::vector<std::size_t>> input_subgraph(const BipartiteGraph& support,
                                                                          const std::vector<std::size_t>& input_edges) {
  std::vector<std::size_t> sorted = input_edges;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<std::size_t, std::size_t>> es;
  for (std::size_t e : sorted) es.push_back(support.edges.at(e));
  return {BipartiteGraph(support.white_count, support.black_count, es), sorted};
}

// Checks an algorithm's output on one input subgraph against p.
inline CheckReport check_zero_round_run(const Problem& p, const BipartiteGraph& support,
                                        const std::vector<std::size_t>& input_edges, const SolutionAssignment& a) {
  auto [sub, ids] = input_subgraph(support, input_edges);
  SolutionAssignment local;
  for (std::size_t e : ids) local.labels.push_back(a.labels.at(e));
  return check_solution(model_of(p), sub, local);
}

// All edge subsets respecting the degree bounds.
inline std::vector<std::vector<std::size_t>> admissible_inputs(const BipartiteGraph& support, std::size_t delta_in,
                                                               std::size_t rank_in, std::size_t limit = 1u << 20) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur, wl(support.white_count, 0), bl(support.black_count, 0);
  auto rec = [&](auto&& self, std::size_t e) -> void {
    if (out.size() >= limit) throw ExplosionGuard("admissible_inputs", limit, out.size());
    if (e == support.edges.size()) {
      out.push_back(cur);
      return;
    }
    self(self, e + 1);
    auto [w, b] = support.edges[e];
    if (wl[w] < delta_in && bl[b] < rank_in) {
      ++wl[w];
      ++bl[b];
      cur.push_back(e);
      self(self, e + 1);
      cur.pop_back();
      --wl[w];
      --bl[b];
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace sre
