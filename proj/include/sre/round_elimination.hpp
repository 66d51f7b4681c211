#pragma once

#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "sre/maximal.hpp"
#include "sre/problem.hpp"

namespace sre {

struct ReOptions {
  std::size_t max_labels = 12;
  std::size_t max_enumeration = 2000000;

  static ReOptions from_env() {
    ReOptions o;
    if (const char* v = std::getenv("SRE_GUARD_LABELS")) o.max_labels = std::strtoul(v, nullptr, 10);
    return o;
  }
};

inline std::string set_label_name(const Problem& p, LabelSet s) {
  std::string out = "(";
  bool first = true;
  for (LabelId l : members(s)) {
    out += (first ? "" : " ") + p.name(l);
    first = false;
  }
  return out + ")";
}

// Black side becomes the maximal configurations of the old black side; white
// side keeps every multiset of new labels admitting a choice in the old white
// side. New labels are printed as (A B ...).
inline Problem re(const Problem& p, const ReOptions& opt = ReOptions::from_env()) {
  if (p.label_count() > opt.max_labels) throw ExplosionGuard("re: alphabet too large", opt.max_labels, p.label_count());
  auto maxes = maximal_configurations(p.black(), right_closed_sets(compute_diagram(p, Side::black)), opt.max_enumeration);
  std::set<LabelSet> sets;
  for (const auto& sc : maxes) sets.insert(sc.begin(), sc.end());
  std::vector<LabelSet> sigma(sets.begin(), sets.end());
  if (sigma.size() > kMaxLabels) throw ExplosionGuard("re: derived alphabet too large", kMaxLabels, sigma.size());
  std::vector<std::string> names;
  for (LabelSet s : sigma) names.push_back(set_label_name(p, s));

  std::vector<std::vector<std::string>> black;
  for (const auto& sc : maxes) {
    std::vector<std::string> cfg;
    for (LabelSet s : sc) cfg.push_back(set_label_name(p, s));
    black.push_back(cfg);
  }

  std::size_t dw = p.arity(Side::white);
  std::size_t count = multiset_count(sigma.size(), dw);
  if (count > opt.max_enumeration) throw ExplosionGuard("re: white enumeration", opt.max_enumeration, count);
  std::vector<std::vector<std::string>> white;
  for_each_multiset(sigma.size(), dw, [&](const Config& m) {
    SetConfig sc;
    for (LabelId i : m) sc.push_back(sigma[i]);
    bool any = !for_each_choice(sc, [&](const Config& c) { return !p.white().contains(c); });
    if (any) {
      std::vector<std::string> cfg;
      for (LabelId i : m) cfg.push_back(names[i]);
      white.push_back(cfg);
    }
    return true;
  });
  return Problem::from_names(dw, white, p.arity(Side::black), black);
}

// re with the roles of the two sides exchanged.
inline Problem rere(const Problem& p, const ReOptions& opt = ReOptions::from_env()) {
  return re(p.swapped(), opt).swapped();
}

inline Problem apply_RE(const Problem& p, const ReOptions& opt = ReOptions::from_env()) { return rere(re(p, opt), opt); }

}  // namespace sre
