#pragma once

#include <algorithm>
#include <bitset>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sre/error.hpp"
#include "sre/multiset.hpp"

namespace sre {

inline constexpr std::size_t kMaxValues = 256;
using Domain = std::bitset<kMaxValues>;

enum class Verdict { sat, unsat, indeterminate };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::sat: return "SAT";
    case Verdict::unsat: return "UNSAT";
    default: return "INDETERMINATE";
  }
}

inline std::int64_t default_budget_ms() {
  if (const char* v = std::getenv("SRE_BUDGET_MS")) return std::strtoll(v, nullptr, 10);
  return 600000;
}

struct SearchOptions {
  // 0 keeps the canonical value order; other seeds permute it per variable.
  std::uint64_t seed = 0;
  std::uint64_t max_nodes = 200000000;
  std::int64_t budget_ms = default_budget_ms();
  // States explored by one generalized arc consistency pass before giving up
  // on pruning that constraint for the pass.
  std::size_t gac_state_cap = 100000;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t failures = 0;
  double millis = 0;
  std::uint64_t fingerprint = 0;
};

struct SearchResult {
  Verdict verdict = Verdict::indeterminate;
  std::vector<LabelId> values;
  SearchStats stats;
};

// Memoized predicate on sorted multisets of values.
class MultisetPredicate {
 public:
  explicit MultisetPredicate(std::function<bool(const Config&)> f) : f_(std::move(f)) {}
  bool operator()(const Config& m) const {
    {
      std::lock_guard<std::mutex> g(mu_);
      auto it = memo_.find(m);
      if (it != memo_.end()) return it->second;
    }
    bool v = f_(m);
    std::lock_guard<std::mutex> g(mu_);
    memo_.emplace(m, v);
    return v;
  }

 private:
  std::function<bool(const Config&)> f_;
  mutable std::mutex mu_;
  mutable std::map<Config, bool> memo_;
};

// Symmetric binary relation table: row a holds the values compatible with a.
using BinaryTable = std::vector<Domain>;

inline std::shared_ptr<const BinaryTable> make_binary_table(std::size_t values, const MultisetPredicate& pred) {
  auto t = std::make_shared<BinaryTable>(values);
  for (LabelId a = 0; a < values; ++a)
    for (LabelId b = a; b < values; ++b)
      if (pred(Config{a, b})) {
        (*t)[a].set(b);
        (*t)[b].set(a);
      }
  return t;
}

class Csp {
 public:
  Csp(std::size_t vars, std::size_t values) : values_(values), domains_(vars), watch_(vars) {
    if (values > kMaxValues) throw ExplosionGuard("csp: too many values", kMaxValues, values);
    Domain all;
    for (std::size_t i = 0; i < values; ++i) all.set(i);
    for (auto& d : domains_) d = all;
  }

  std::size_t var_count() const { return domains_.size(); }

  void restrict(std::size_t var, const Domain& allowed) { domains_[var] &= allowed; }

  void add_binary(std::size_t a, std::size_t b, std::shared_ptr<const BinaryTable> table) {
    add(Constraint{{a, b}, std::move(table), nullptr});
  }

  void add_nary(std::vector<std::size_t> scope, std::shared_ptr<const MultisetPredicate> pred) {
    add(Constraint{std::move(scope), nullptr, std::move(pred)});
  }

  SearchResult solve(const SearchOptions& opt) {
    opt_ = opt;
    start_ = std::chrono::steady_clock::now();
    stats_ = {};
    stats_.fingerprint = 1469598103934665603ULL;
    out_of_budget_ = false;
    if (opt.seed) {
      order_.assign(var_count(), {});
      std::mt19937_64 rng(opt.seed);
      for (auto& o : order_) {
        o.resize(values_);
        for (std::size_t i = 0; i < values_; ++i) o[i] = static_cast<LabelId>(i);
        std::shuffle(o.begin(), o.end(), rng);
      }
    }
    std::vector<Domain> d = domains_;
    std::vector<std::size_t> queue;
    for (std::size_t c = 0; c < cons_.size(); ++c) queue.push_back(c);
    SearchResult r;
    bool found = false;
    bool wiped = std::any_of(d.begin(), d.end(), [](const Domain& x) { return x.none(); });
    if (!wiped && propagate(d, queue)) found = dfs(d);
    r.stats = stats_;
    r.stats.millis = elapsed_ms();
    if (found) {
      r.verdict = Verdict::sat;
      r.values = solution_;
    } else {
      r.verdict = out_of_budget_ ? Verdict::indeterminate : Verdict::unsat;
    }
    return r;
  }

 private:
  struct Constraint {
    std::vector<std::size_t> scope;
    std::shared_ptr<const BinaryTable> table;
    std::shared_ptr<const MultisetPredicate> pred;
  };

  void add(Constraint c) {
    for (std::size_t v : c.scope)
      if (v >= var_count()) throw PreconditionError("csp: variable out of range");
    std::size_t id = cons_.size();
    for (std::size_t v : c.scope) watch_[v].push_back(id);
    cons_.push_back(std::move(c));
  }

  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

  void mix(std::uint64_t x) {
    stats_.fingerprint ^= x;
    stats_.fingerprint *= 1099511628211ULL;
  }

  // Returns false on a wipe-out. Changed variables are appended to `changed`.
  bool revise(const Constraint& c, std::vector<Domain>& d, std::vector<std::size_t>& changed) {
    if (c.table) {
      std::size_t a = c.scope[0], b = c.scope[1];
      for (int dir = 0; dir < 2; ++dir) {
        std::size_t x = dir ? b : a, y = dir ? a : b;
        Domain keep;
        for (std::size_t v = d[x]._Find_first(); v < kMaxValues; v = d[x]._Find_next(v))
          if (((*c.table)[v] & d[y]).any()) keep.set(v);
        if (keep != d[x]) {
          d[x] = keep;
          if (keep.none()) return false;
          changed.push_back(x);
        }
      }
      return true;
    }
    return revise_nary(c, d, changed);
  }

  // Generalized arc consistency over a multiset predicate: memoized
  // feasibility of partial multisets, then a forward pass marking supports.
  bool revise_nary(const Constraint& c, std::vector<Domain>& d, std::vector<std::size_t>& changed) {
    std::size_t k = c.scope.size();
    std::vector<std::size_t> pos(k);
    for (std::size_t i = 0; i < k; ++i) pos[i] = i;
    std::sort(pos.begin(), pos.end(), [&](std::size_t x, std::size_t y) {
      return d[c.scope[x]].count() < d[c.scope[y]].count();
    });
    std::vector<std::map<Config, bool>> memo(k + 1);
    std::size_t states = 0;
    bool capped = false;
    auto feasible = [&](auto&& self, std::size_t j, const Config& partial) -> bool {
      if (j == k) return (*c.pred)(partial);
      auto it = memo[j].find(partial);
      if (it != memo[j].end()) return it->second;
      if (++states > opt_.gac_state_cap) {
        capped = true;
        return true;
      }
      const Domain& dom = d[c.scope[pos[j]]];
      bool any = false;
      for (std::size_t v = dom._Find_first(); v < kMaxValues && !capped; v = dom._Find_next(v))
        if (self(self, j + 1, insert_sorted(partial, static_cast<LabelId>(v)))) any = true;
      if (capped) return true;
      memo[j].emplace(partial, any);
      return any;
    };
    bool ok = feasible(feasible, 0, Config{});
    if (capped) return true;
    if (!ok) return false;
    std::set<Config> layer{Config{}};
    for (std::size_t j = 0; j < k; ++j) {
      const Domain& dom = d[c.scope[pos[j]]];
      Domain sup;
      std::set<Config> next_layer;
      for (const Config& pre : layer) {
        for (std::size_t v = dom._Find_first(); v < kMaxValues; v = dom._Find_next(v)) {
          Config next = insert_sorted(pre, static_cast<LabelId>(v));
          bool good = j + 1 == k ? (*c.pred)(next) : memo[j + 1].at(next);
          if (good) {
            sup.set(v);
            next_layer.insert(std::move(next));
          }
        }
      }
      layer.swap(next_layer);
      std::size_t var = c.scope[pos[j]];
      if (sup != d[var]) {
        d[var] = sup;
        if (sup.none()) return false;
        changed.push_back(var);
      }
    }
    return true;
  }

  bool propagate(std::vector<Domain>& d, std::vector<std::size_t>& queue) {
    std::vector<char> queued(cons_.size(), 0);
    for (std::size_t c : queue) queued[c] = 1;
    std::size_t head = 0;
    std::vector<std::size_t> changed;
    while (head < queue.size()) {
      std::size_t c = queue[head++];
      queued[c] = 0;
      changed.clear();
      if (!revise(cons_[c], d, changed)) return false;
      for (std::size_t v : changed)
        for (std::size_t c2 : watch_[v])
          if (c2 != c && !queued[c2]) {
            queued[c2] = 1;
            queue.push_back(c2);
          }
    }
    return true;
  }

  bool budget_exceeded() {
    if (stats_.nodes > opt_.max_nodes) return true;
    if ((stats_.nodes & 255) == 0 && elapsed_ms() > static_cast<double>(opt_.budget_ms)) return true;
    return false;
  }

  bool dfs(std::vector<Domain>& d) {
    // MRV, ties broken towards more constraints; unconstrained variables
    // never branch.
    std::size_t var = var_count();
    std::size_t best = kMaxValues + 1, best_deg = 0;
    for (std::size_t v = 0; v < d.size(); ++v) {
      std::size_t s = d[v].count();
      if (s <= 1 || watch_[v].empty()) continue;
      if (s < best || (s == best && watch_[v].size() > best_deg)) {
        best = s;
        best_deg = watch_[v].size();
        var = v;
      }
    }
    if (var == var_count()) {
      solution_.assign(d.size(), 0);
      for (std::size_t v = 0; v < d.size(); ++v) solution_[v] = static_cast<LabelId>(d[v]._Find_first());
      return true;
    }
    std::vector<LabelId> vals;
    if (opt_.seed) {
      for (LabelId x : order_[var])
        if (d[var].test(x)) vals.push_back(x);
    } else {
      for (std::size_t x = d[var]._Find_first(); x < kMaxValues; x = d[var]._Find_next(x))
        vals.push_back(static_cast<LabelId>(x));
    }
    for (LabelId x : vals) {
      ++stats_.nodes;
      if (budget_exceeded()) {
        out_of_budget_ = true;
        return false;
      }
      mix((static_cast<std::uint64_t>(var) << 16) | x);
      std::vector<Domain> next = d;
      next[var].reset();
      next[var].set(x);
      std::vector<std::size_t> queue(watch_[var].begin(), watch_[var].end());
      if (propagate(next, queue) && dfs(next)) return true;
      if (out_of_budget_) return false;
      ++stats_.failures;
      mix(0xfffffULL);
    }
    return false;
  }

  std::size_t values_;
  std::vector<Domain> domains_;
  std::vector<std::vector<std::size_t>> watch_;
  std::vector<Constraint> cons_;
  std::vector<std::vector<LabelId>> order_;
  SearchOptions opt_;
  SearchStats stats_;
  std::chrono::steady_clock::time_point start_;
  bool out_of_budget_ = false;
  std::vector<LabelId> solution_;
};

}  // namespace sre
