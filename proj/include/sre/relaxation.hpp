#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sre/dsl.hpp"
#include "sre/problem.hpp"

namespace sre {

// Ordered tuple of label ids.
using Tuple = std::vector<LabelId>;

// Maps ordered white tuples of a source problem to ordered white tuples of a
// target problem.
struct RelaxationMap {
  std::map<Tuple, Tuple> entries;
  bool operator==(const RelaxationMap&) const = default;
};

struct RelaxationCheck {
  bool ok = true;
  std::string reason;
  // Set when a black configuration of the source has a bad choice.
  Config source_black;
  Config target_choice;
};

inline std::vector<Tuple> orderings(const Config& c) {
  std::vector<Tuple> out;
  Tuple t = c;
  std::sort(t.begin(), t.end());
  do out.push_back(t);
  while (std::next_permutation(t.begin(), t.end()));
  return out;
}

// r(l): target labels that some occurrence of l is mapped to.
inline std::vector<LabelSet> induced_label_map(const Problem& src, const RelaxationMap& f) {
  std::vector<LabelSet> r(src.label_count(), 0);
  for (const auto& [s, t] : f.entries)
    for (std::size_t i = 0; i < s.size() && i < t.size(); ++i) r[s[i]] |= bit(t[i]);
  return r;
}

namespace detail {

inline std::optional<Config> bad_black_choice(const Problem& dst, const std::vector<LabelSet>& r,
                                              const Config& b) {
  SetConfig sc;
  for (LabelId l : b) sc.push_back(r[l]);
  std::optional<Config> bad;
  for_each_choice(sc, [&](const Config& m) {
    if (dst.black().contains(m)) return true;
    bad = m;
    return false;
  });
  return bad;
}

}  // namespace detail

inline RelaxationCheck check_relaxation(const Problem& src, const Problem& dst, const RelaxationMap& f) {
  RelaxationCheck out;
  auto fail = [&](const std::string& why) {
    out.ok = false;
    out.reason = why;
    return out;
  };
  if (src.arity(Side::white) != dst.arity(Side::white) || src.arity(Side::black) != dst.arity(Side::black))
    return fail("arity mismatch");
  std::set<Tuple> domain;
  for (const Config& c : src.white().configs)
    for (const Tuple& t : orderings(c)) domain.insert(t);
  for (const auto& [s, t] : f.entries) {
    if (!domain.count(s)) return fail("map entry for a tuple outside the source white constraint");
    if (t.size() != s.size()) return fail("map entry with wrong length");
    Config img = t;
    std::sort(img.begin(), img.end());
    if (!dst.white().contains(img)) return fail("image of a white tuple is not a target white configuration");
  }
  for (const Tuple& t : domain)
    if (!f.entries.count(t)) return fail("map is missing an ordered white tuple");
  auto r = induced_label_map(src, f);
  for (const Config& b : src.black().configs) {
    if (auto bad = detail::bad_black_choice(dst, r, b)) {
      out.source_black = b;
      out.target_choice = *bad;
      return fail("a choice over a black configuration is not a target black configuration");
    }
  }
  return out;
}

inline std::string format_relaxation(const Problem& src, const Problem& dst, const RelaxationMap& f) {
  std::string out;
  for (const auto& [s, t] : f.entries) {
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + src.name(s[i]);
    out += " ->";
    for (LabelId l : t) out += " " + dst.name(l);
    out += "\n";
  }
  return out;
}

inline RelaxationMap parse_relaxation(const std::string& text, const Problem& src, const Problem& dst) {
  RelaxationMap f;
  std::istringstream in(text);
  std::string raw;
  std::size_t no = 0;
  while (std::getline(in, raw)) {
    ++no;
    std::string body = detail::trim(detail::strip_comment(raw));
    if (body.empty()) continue;
    auto arrow = raw.find("->");
    if (arrow == std::string::npos) throw ParseError(no, 1, "expected 'SRC -> DST'");
    auto tuple = [&](const std::string& part, std::size_t offset, const Problem& p) {
      detail::LineScanner sc(part, no);
      Tuple t;
      while (!sc.done()) {
        std::size_t at = sc.position();
        std::string name = sc.label();
        auto id = p.id(name);
        if (!id) throw ParseError(no, offset + at + 1, "unknown label " + name);
        t.push_back(*id);
      }
      return t;
    };
    Tuple s = tuple(raw.substr(0, arrow), 0, src);
    Tuple t = tuple(detail::strip_comment(raw.substr(arrow + 2)), arrow + 2, dst);
    if (f.entries.count(s) && f.entries[s] != t) throw ParseError(no, 1, "conflicting entries for one tuple");
    f.entries[s] = t;
  }
  return f;
}

struct FindOptions {
  std::size_t max_nodes = 5000000;
};

// Searches for a relaxation map from src to dst. Returns nullopt when none
// exists; throws ExplosionGuard when the node budget runs out.
inline std::optional<RelaxationMap> find_relaxation(const Problem& src, const Problem& dst,
                                                    const FindOptions& opt = {}) {
  if (src.arity(Side::white) != dst.arity(Side::white) || src.arity(Side::black) != dst.arity(Side::black))
    return std::nullopt;
  using Pairing = std::vector<std::pair<LabelId, LabelId>>;
  std::vector<Config> vars(src.white().configs.begin(), src.white().configs.end());
  std::vector<std::vector<Pairing>> values(vars.size());
  for (std::size_t v = 0; v < vars.size(); ++v) {
    std::set<Pairing> seen;
    for (const Config& t : dst.white().configs) {
      for (const Tuple& perm : orderings(t)) {
        Pairing p;
        for (std::size_t i = 0; i < perm.size(); ++i) p.push_back({vars[v][i], perm[i]});
        std::sort(p.begin(), p.end());
        seen.insert(p);
      }
    }
    values[v].assign(seen.begin(), seen.end());
    auto cost = [&](const Pairing& p) {
      std::size_t c = 0;
      for (auto [a, b] : p) c += src.name(a) != dst.name(b);
      return c;
    };
    std::stable_sort(values[v].begin(), values[v].end(),
                     [&](const Pairing& a, const Pairing& b) { return cost(a) < cost(b); });
  }

  LabelSet white_labels = 0;
  for (const Config& c : vars)
    for (LabelId l : c) white_labels |= bit(l);
  std::set<Config> extendable;
  for (const Config& b : dst.black().configs)
    for (std::size_t k = 0; k <= b.size(); ++k)
      for_each_submultiset(b, k, [&](const Config& m) {
        extendable.insert(m);
        return true;
      });

  std::vector<Config> blacks;
  for (const Config& b : src.black().configs) {
    bool live = true;
    for (LabelId l : b) live = live && has(white_labels, l);
    if (live) blacks.push_back(b);
  }

  auto consistent = [&](const std::vector<LabelSet>& r) {
    for (const Config& b : blacks) {
      SetConfig sc;
      for (LabelId l : b)
        if (r[l]) sc.push_back(r[l]);
      if (sc.empty()) continue;
      bool full = sc.size() == b.size();
      bool ok = for_each_choice(sc, [&](const Config& m) { return full ? dst.black().contains(m) : extendable.count(m) > 0; });
      if (!ok) return false;
    }
    return true;
  };

  std::vector<std::size_t> pick(vars.size());
  std::size_t nodes = 0;
  std::vector<LabelSet> r(src.label_count(), 0);
  auto rec = [&](auto&& self, std::size_t v) -> bool {
    if (v == vars.size()) return true;
    for (std::size_t i = 0; i < values[v].size(); ++i) {
      if (++nodes > opt.max_nodes) throw ExplosionGuard("find_relaxation: node budget", opt.max_nodes, nodes);
      auto saved = r;
      for (auto [a, b] : values[v][i]) r[a] |= bit(b);
      if (r == saved || consistent(r)) {
        pick[v] = i;
        if (self(self, v + 1)) return true;
      }
      r = saved;
    }
    return false;
  };
  if (!rec(rec, 0)) return std::nullopt;

  RelaxationMap f;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const Pairing& p = values[v][pick[v]];
    for (const Tuple& o : orderings(vars[v])) {
      std::vector<bool> used(p.size(), false);
      Tuple t;
      for (LabelId l : o) {
        for (std::size_t j = 0; j < p.size(); ++j) {
          if (!used[j] && p[j].first == l) {
            used[j] = true;
            t.push_back(p[j].second);
            break;
          }
        }
      }
      f.entries[o] = t;
    }
  }
  return f;
}

struct MergeResult {
  Problem merged;
  RelaxationMap map;
  // Old label id -> new label id.
  std::vector<LabelId> image;
};

// Merges each group of labels into one fresh label. White configurations are
// mapped to their images; a merged black configuration is kept only when all
// of its preimage choices are black configurations of p.
inline MergeResult merge_labels(const Problem& p, const std::vector<std::vector<std::string>>& groups) {
  std::size_t n = p.label_count();
  std::vector<int> group_of(n, -1);
  std::vector<LabelSet> parts;
  for (const auto& g : groups) {
    LabelSet s = 0;
    for (const auto& name : g) {
      LabelId l = p.require_id(name);
      if (group_of[l] >= 0) throw PreconditionError("label " + name + " is in two groups");
      group_of[l] = static_cast<int>(parts.size());
      s |= bit(l);
    }
    if (s) parts.push_back(s);
  }
  for (LabelId l = 0; l < n; ++l)
    if (group_of[l] < 0) {
      group_of[l] = static_cast<int>(parts.size());
      parts.push_back(bit(l));
    }
  std::set<std::string> taken(p.labels().begin(), p.labels().end());
  std::vector<std::string> part_name(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto ms = members(parts[i]);
    if (ms.size() == 1) {
      part_name[i] = p.name(ms[0]);
      continue;
    }
    bool plain = true;
    for (LabelId l : ms) plain = plain && p.name(l).find('(') == std::string::npos;
    std::string name;
    if (plain) {
      for (std::size_t j = 0; j < ms.size(); ++j) name += (j ? "_" : "") + p.name(ms[j]);
    } else {
      name = "(";
      for (std::size_t j = 0; j < ms.size(); ++j) name += (j ? " " : "") + p.name(ms[j]);
      name += ")";
    }
    while (taken.count(name)) name = plain ? name + "_m" : "(" + name + ")";
    taken.insert(name);
    part_name[i] = name;
  }
  auto img_names = [&](const Config& c) {
    std::vector<std::string> out;
    for (LabelId l : c) out.push_back(part_name[group_of[l]]);
    return out;
  };
  std::vector<std::vector<std::string>> white, black;
  for (const Config& c : p.white().configs) white.push_back(img_names(c));
  for (const Config& c : p.black().configs) {
    SetConfig sc;
    for (LabelId l : c) sc.push_back(parts[group_of[l]]);
    if (all_choices_in(p.black(), sc)) black.push_back(img_names(c));
  }
  MergeResult out;
  out.merged = Problem::from_names(p.arity(Side::white), white, p.arity(Side::black), black, part_name);
  out.image.resize(n);
  for (LabelId l = 0; l < n; ++l) out.image[l] = out.merged.require_id(part_name[group_of[l]]);
  for (const Config& c : p.white().configs)
    for (const Tuple& o : orderings(c)) {
      Tuple t;
      for (LabelId l : o) t.push_back(out.image[l]);
      out.map.entries[o] = t;
    }
  return out;
}

}  // namespace sre
