#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sre/error.hpp"
#include "sre/multiset.hpp"

namespace sre {

enum class Side { white, black };

inline Side other(Side s) { return s == Side::white ? Side::black : Side::white; }
inline const char* side_name(Side s) { return s == Side::white ? "white" : "black"; }

struct Constraint {
  std::size_t arity = 0;
  std::set<Config> configs;

  bool contains(const Config& c) const { return configs.count(c) > 0; }
  bool empty() const { return configs.empty(); }
  bool operator==(const Constraint&) const = default;
};

// A problem in the black-white formalism. Immutable once built.
// Label ids index into labels(), which is sorted by name.
class Problem {
 public:
  Problem() = default;

  Problem(std::vector<std::string> labels, Constraint white, Constraint black)
      : labels_(std::move(labels)), white_(std::move(white)), black_(std::move(black)) {
    if (labels_.size() > kMaxLabels) throw ExplosionGuard("alphabet too large", kMaxLabels, labels_.size());
    if (!std::is_sorted(labels_.begin(), labels_.end()) ||
        std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end())
      throw PreconditionError("labels must be sorted and distinct");
    for (const Constraint* c : {&white_, &black_}) {
      for (const Config& cfg : c->configs) {
        if (cfg.size() != c->arity) throw PreconditionError("configuration arity mismatch");
        if (!std::is_sorted(cfg.begin(), cfg.end())) throw PreconditionError("configuration not sorted");
        for (LabelId l : cfg)
          if (l >= labels_.size()) throw PreconditionError("label id out of range");
      }
    }
  }

  // Builds a problem from configurations given by label names. The alphabet
  // is the set of names that occur in some configuration, plus `extra`.
  static Problem from_names(std::size_t white_arity, const std::vector<std::vector<std::string>>& white,
                            std::size_t black_arity, const std::vector<std::vector<std::string>>& black,
                            const std::vector<std::string>& extra = {}) {
    std::set<std::string> names(extra.begin(), extra.end());
    for (const auto* side : {&white, &black})
      for (const auto& cfg : *side) names.insert(cfg.begin(), cfg.end());
    std::vector<std::string> labels(names.begin(), names.end());
    auto id = [&](const std::string& s) {
      return static_cast<LabelId>(std::lower_bound(labels.begin(), labels.end(), s) - labels.begin());
    };
    auto build = [&](std::size_t arity, const std::vector<std::vector<std::string>>& cfgs) {
      Constraint c;
      c.arity = arity;
      for (const auto& cfg : cfgs) {
        if (cfg.size() != arity) throw PreconditionError("configuration arity mismatch");
        Config ids;
        for (const auto& s : cfg) ids.push_back(id(s));
        std::sort(ids.begin(), ids.end());
        c.configs.insert(ids);
      }
      return c;
    };
    return Problem(labels, build(white_arity, white), build(black_arity, black));
  }

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t label_count() const { return labels_.size(); }
  const std::string& name(LabelId l) const { return labels_.at(l); }
  std::optional<LabelId> id(const std::string& name) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), name);
    if (it == labels_.end() || *it != name) return std::nullopt;
    return static_cast<LabelId>(it - labels_.begin());
  }
  LabelId require_id(const std::string& name) const {
    auto l = id(name);
    if (!l) throw PreconditionError("unknown label " + name);
    return *l;
  }

  const Constraint& white() const { return white_; }
  const Constraint& black() const { return black_; }
  const Constraint& constraint(Side s) const { return s == Side::white ? white_ : black_; }
  std::size_t arity(Side s) const { return constraint(s).arity; }

  std::vector<std::string> names(const Config& c) const {
    std::vector<std::string> out;
    for (LabelId l : c) out.push_back(labels_.at(l));
    return out;
  }

  LabelSet label_set(const std::vector<std::string>& names) const {
    LabelSet s = 0;
    for (const auto& n : names) s |= bit(require_id(n));
    return s;
  }

  std::vector<std::string> set_names(LabelSet s) const {
    std::vector<std::string> out;
    for (LabelId l : members(s)) out.push_back(labels_.at(l));
    return out;
  }

  Problem swapped() const { return Problem(labels_, black_, white_); }

  bool operator==(const Problem&) const = default;

 private:
  std::vector<std::string> labels_;
  Constraint white_;
  Constraint black_;
};

// Same problem with labels renamed A, B, C, ... in id order (A00, A01, ...
// past 26 labels so that names stay sorted).
inline Problem with_short_names(const Problem& p) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < p.label_count(); ++i) {
    if (p.label_count() <= 26) {
      names.push_back(std::string(1, static_cast<char>('A' + i)));
    } else {
      std::string n = std::to_string(i);
      names.push_back("A" + std::string(n.size() < 2 ? 2 - n.size() : 0, '0') + n);
    }
  }
  return Problem(names, p.white(), p.black());
}

// x is at least as strong as y on side s: replacing any positive number of
// occurrences of y by x in a configuration of that side keeps it valid.
inline bool at_least_as_strong(const Problem& p, Side s, LabelId x, LabelId y) {
  if (x == y) return true;
  for (const Config& c : p.constraint(s).configs) {
    std::size_t m = count_of(c, y);
    Config cur = c;
    for (std::size_t t = 1; t <= m; ++t) {
      erase_one(cur, y);
      cur = insert_sorted(cur, x);
      if (!p.constraint(s).contains(cur)) return false;
    }
  }
  return true;
}

struct Diagram {
  Side side = Side::white;
  std::size_t size = 0;
  // up[y]: labels at least as strong as y, including y.
  std::vector<LabelSet> up;
  // Strength relations y -> x with x != y.
  std::vector<std::pair<LabelId, LabelId>> edges;

  bool stronger(LabelId x, LabelId y) const { return has(up[y], x); }

  LabelSet closure(LabelSet s) const {
    LabelSet out = s;
    for (LabelId l : members(s)) out |= up[l];
    return out;
  }

  bool right_closed(LabelSet s) const { return closure(s) == s; }

  // Transitive reduction, with mutually equivalent labels kept as 2-cycles.
  std::vector<std::pair<LabelId, LabelId>> hasse() const {
    std::vector<std::pair<LabelId, LabelId>> out;
    for (auto [y, x] : edges) {
      bool direct = true;
      bool equivalent = stronger(y, x);
      if (!equivalent) {
        for (LabelId z = 0; z < size && direct; ++z) {
          if (z == x || z == y) continue;
          bool z_equiv = stronger(z, y) && stronger(y, z);
          bool z_equiv_x = stronger(z, x) && stronger(x, z);
          if (z_equiv || z_equiv_x) continue;
          if (stronger(z, y) && stronger(x, z)) direct = false;
        }
      }
      if (direct) out.push_back({y, x});
    }
    return out;
  }
};

inline Diagram compute_diagram(const Problem& p, Side s) {
  Diagram d;
  d.side = s;
  d.size = p.label_count();
  d.up.assign(d.size, 0);
  for (LabelId y = 0; y < d.size; ++y) {
    d.up[y] |= bit(y);
    for (LabelId x = 0; x < d.size; ++x) {
      if (x != y && at_least_as_strong(p, s, x, y)) {
        d.up[y] |= bit(x);
        d.edges.push_back({y, x});
      }
    }
  }
  for (bool grew = true; grew;) {
    grew = false;
    for (LabelId y = 0; y < d.size; ++y) {
      LabelSet c = d.closure(d.up[y]);
      if (c != d.up[y]) {
        d.up[y] = c;
        grew = true;
      }
    }
  }
  return d;
}

// All non-empty right-closed subsets, ascending by bitmask value.
inline std::vector<LabelSet> right_closed_sets(const Diagram& d) {
  std::vector<LabelSet> out;
  std::size_t n = d.size;
  auto rec = [&](auto&& self, std::size_t i, LabelSet in, LabelSet out_set) -> void {
    while (i < n && (has(in, i) || has(out_set, i))) ++i;
    if (i == n) {
      if (in) out.push_back(in);
      return;
    }
    LabelSet with = in | d.up[i];
    if ((with & out_set) == 0) self(self, i + 1, with, out_set);
    self(self, i + 1, in, out_set | bit(i));
  };
  rec(rec, 0, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sre
