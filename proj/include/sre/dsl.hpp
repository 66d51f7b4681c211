#pragma once

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sre/maximal.hpp"
#include "sre/problem.hpp"

namespace sre {

// One group of a condensed configuration: a label set repeated `count` times.
struct Group {
  std::vector<std::string> labels;
  std::size_t count = 1;
};
using CondensedLine = std::vector<Group>;

namespace detail {

inline bool label_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline bool reserved_char(char c) {
  return c == '[' || c == ']' || c == '(' || c == ')' || c == '^' || c == '#' || c == ':';
}

class LineScanner {
 public:
  LineScanner(const std::string& text, std::size_t line_no) : s_(text), line_(line_no) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, pos_ + 1, msg); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  // LABEL or a parenthesised set label such as (A (B C)).
  std::string label() {
    skip_ws();
    if (pos_ >= s_.size()) fail("expected label");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      std::vector<std::string> inner;
      while (true) {
        skip_ws();
        if (pos_ >= s_.size()) fail("unbalanced parenthesis");
        if (s_[pos_] == ')') {
          ++pos_;
          break;
        }
        inner.push_back(label());
      }
      std::string out = "(";
      for (std::size_t i = 0; i < inner.size(); ++i) out += (i ? " " : "") + inner[i];
      return out + ")";
    }
    if (reserved_char(c)) fail(std::string("unexpected token '") + c + "'");
    std::size_t start = pos_;
    while (pos_ < s_.size() && label_char(s_[pos_])) ++pos_;
    if (pos_ == start) fail(std::string("invalid character '") + c + "'");
    if (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && !reserved_char(s_[pos_]))
      fail(std::string("invalid character '") + s_[pos_] + "' in label");
    return s_.substr(start, pos_ - start);
  }

  std::size_t exponent() {
    if (peek() != '^') return 1;
    ++pos_;
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a positive integer");
    std::size_t n = std::stoul(s_.substr(start, pos_ - start));
    if (n == 0) {
      pos_ = start;
      fail("exponent must be a positive integer");
    }
    return n;
  }

  Group group() {
    skip_ws();
    Group g;
    if (peek() == '[') {
      ++pos_;
      while (true) {
        skip_ws();
        if (pos_ >= s_.size()) fail("unterminated '['");
        if (s_[pos_] == ']') {
          ++pos_;
          break;
        }
        g.labels.push_back(label());
      }
      if (g.labels.empty()) fail("empty group");
    } else if (peek() == ']' || peek() == ')' || peek() == '^') {
      fail(std::string("unexpected token '") + peek() + "'");
    } else {
      g.labels.push_back(label());
    }
    g.count = exponent();
    std::sort(g.labels.begin(), g.labels.end());
    g.labels.erase(std::unique(g.labels.begin(), g.labels.end()), g.labels.end());
    return g;
  }

  std::size_t position() const { return pos_; }

 private:
  const std::string& s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

inline std::string strip_comment(const std::string& line) {
  auto p = line.find('#');
  return p == std::string::npos ? line : line.substr(0, p);
}

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline CondensedLine parse_line(const std::string& text, std::size_t line_no) {
  LineScanner sc(text, line_no);
  CondensedLine out;
  while (!sc.done()) out.push_back(sc.group());
  return out;
}

}  // namespace detail

inline std::size_t line_arity(const CondensedLine& l) {
  std::size_t n = 0;
  for (const auto& g : l) n += g.count;
  return n;
}

// Expands a condensed line to the set of configurations it denotes, each a
// sorted list of names.
inline std::set<std::vector<std::string>> expand_line(const CondensedLine& line) {
  std::set<std::vector<std::string>> out;
  std::vector<std::string> cur;
  auto rec = [&](auto&& self, std::size_t gi) -> void {
    if (gi == line.size()) {
      auto c = cur;
      std::sort(c.begin(), c.end());
      out.insert(c);
      return;
    }
    const Group& g = line[gi];
    // multisets of size g.count over g.labels
    std::size_t m = g.labels.size();
    for_each_multiset(m, g.count, [&](const Config& pick) {
      for (LabelId i : pick) cur.push_back(g.labels[i]);
      self(self, gi + 1);
      for (std::size_t i = 0; i < pick.size(); ++i) cur.pop_back();
      return true;
    });
  };
  rec(rec, 0);
  return out;
}

inline std::set<std::vector<std::string>> expand_condensed(const std::string& text) {
  return expand_line(detail::parse_line(detail::strip_comment(text), 1));
}

inline Problem parse_problem(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  int section = -1;  // 0 white, 1 black
  bool seen[2] = {false, false};
  std::vector<std::pair<std::size_t, CondensedLine>> lines[2];
  std::optional<std::size_t> arity[2];
  bool empty_kw[2] = {false, false};
  std::optional<std::size_t> empty_arity[2];
  std::size_t arity_line[2] = {0, 0};
  while (std::getline(in, raw)) {
    ++line_no;
    std::string body = detail::trim(detail::strip_comment(raw));
    if (body.empty()) continue;
    if (body == "white:" || body == "black:") {
      int s = body == "white:" ? 0 : 1;
      if (seen[s]) throw ParseError(line_no, 1, "duplicate section " + body);
      if (s == 1 && !seen[0]) throw ParseError(line_no, 1, "black section before white section");
      seen[s] = true;
      section = s;
      continue;
    }
    std::size_t col = raw.find_first_not_of(" \t") + 1;
    if (section < 0) throw ParseError(line_no, col, "configuration outside a section");
    if (body == "empty" || body.rfind("empty^", 0) == 0) {
      if (empty_kw[section] || !lines[section].empty())
        throw ParseError(line_no, col, "'empty' must be the only line of its section");
      empty_kw[section] = true;
      if (body != "empty") {
        detail::LineScanner sc(body, line_no);
        sc.label();
        empty_arity[section] = sc.exponent();
        if (!sc.done()) throw ParseError(line_no, col + sc.position(), "unexpected trailing text");
      }
      continue;
    }
    if (empty_kw[section]) throw ParseError(line_no, col, "'empty' must be the only line of its section");
    CondensedLine l = detail::parse_line(raw.substr(0, raw.find('#')), line_no);
    std::size_t a = line_arity(l);
    if (arity[section] && *arity[section] != a)
      throw ParseError(line_no, col,
                       "arity mismatch: expected " + std::to_string(*arity[section]) + " (line " +
                           std::to_string(arity_line[section]) + "), found " + std::to_string(a));
    if (!arity[section]) {
      arity[section] = a;
      arity_line[section] = line_no;
    }
    lines[section].push_back({line_no, std::move(l)});
  }
  if (!seen[0]) throw ParseError(line_no + 1, 1, "missing white section");
  if (!seen[1]) throw ParseError(line_no + 1, 1, "missing black section");
  for (int s = 0; s < 2; ++s) {
    if (!arity[s] && !empty_kw[s]) throw ParseError(line_no + 1, 1, std::string("empty ") + (s ? "black" : "white") + " section");
  }
  for (int s = 0; s < 2; ++s) {
    if (empty_kw[s]) arity[s] = empty_arity[s] ? *empty_arity[s] : (arity[1 - s] ? *arity[1 - s] : 0);
  }
  std::vector<std::vector<std::string>> cfgs[2];
  for (int s = 0; s < 2; ++s)
    for (const auto& [no, l] : lines[s])
      for (auto& c : expand_line(l)) cfgs[s].push_back(c);
  return Problem::from_names(*arity[0], cfgs[0], *arity[1], cfgs[1]);
}

inline std::string format_group(const Group& g) {
  std::string s;
  if (g.labels.size() == 1) {
    s = g.labels[0];
  } else {
    s = "[";
    for (std::size_t i = 0; i < g.labels.size(); ++i) s += (i ? " " : "") + g.labels[i];
    s += "]";
  }
  if (g.count > 1) s += "^" + std::to_string(g.count);
  return s;
}

inline std::string format_line(CondensedLine l) {
  std::sort(l.begin(), l.end(), [](const Group& a, const Group& b) {
    if (a.labels != b.labels) return a.labels < b.labels;
    return a.count < b.count;
  });
  std::string s;
  for (std::size_t i = 0; i < l.size(); ++i) s += (i ? " " : "") + format_group(l[i]);
  return s;
}

inline CondensedLine line_of(const Problem& p, const SetConfig& sc) {
  CondensedLine l;
  for (std::size_t i = 0; i < sc.size();) {
    std::size_t j = i;
    while (j < sc.size() && sc[j] == sc[i]) ++j;
    l.push_back(Group{p.set_names(sc[i]), j - i});
    i = j;
  }
  return l;
}

inline std::string format_config(const Problem& p, const Config& c) {
  SetConfig sc;
  for (LabelId l : c) sc.push_back(bit(l));
  std::sort(sc.begin(), sc.end());
  return format_line(line_of(p, sc));
}

// Drops labels from positions of sc while every configuration of `need` is
// still a choice of sc.
inline SetConfig shrink_cover(SetConfig sc, const std::set<Config>& need) {
  auto covers = [&](const SetConfig& cand) {
    std::set<Config> got;
    for_each_choice(cand, [&](const Config& m) {
      got.insert(m);
      return true;
    });
    for (const Config& m : need)
      if (!got.count(m)) return false;
    return true;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < sc.size(); ++i) {
      for (LabelId l : members(sc[i])) {
        if (popcount(sc[i]) == 1) break;
        SetConfig cand = sc;
        cand[i] &= ~bit(l);
        if (covers(cand)) {
          sc = cand;
          changed = true;
        }
      }
    }
  }
  std::sort(sc.begin(), sc.end());
  return sc;
}

// Condensed lines covering exactly the configurations of one side. Lines are
// maximal set configurations chosen greedily; falls back to one line per
// configuration when the alphabet is large.
inline std::vector<std::string> condensed_lines(const Problem& p, Side s, std::size_t max_labels = 12) {
  const Constraint& c = p.constraint(s);
  std::vector<std::string> out;
  bool plain = p.label_count() > max_labels;
  std::vector<SetConfig> maxes;
  if (!plain) {
    try {
      maxes = maximal_configurations(c, right_closed_sets(compute_diagram(p, s)), 200000);
    } catch (const ExplosionGuard&) {
      plain = true;
    }
  }
  if (plain) {
    for (const Config& cfg : c.configs) out.push_back(format_config(p, cfg));
    std::sort(out.begin(), out.end());
    return out;
  }
  std::vector<std::pair<std::string, std::set<Config>>> cover;
  std::map<std::string, SetConfig> maxes_by_line;
  for (const auto& sc : maxes) {
    maxes_by_line[format_line(line_of(p, sc))] = sc;
    std::set<Config> covered;
    for_each_choice(sc, [&](const Config& m) {
      covered.insert(m);
      return true;
    });
    cover.push_back({format_line(line_of(p, sc)), std::move(covered)});
  }
  std::sort(cover.begin(), cover.end());
  std::set<Config> left = c.configs;
  while (!left.empty()) {
    std::size_t best = cover.size(), best_gain = 0;
    for (std::size_t i = 0; i < cover.size(); ++i) {
      std::size_t gain = 0;
      for (const Config& m : cover[i].second) gain += left.count(m);
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best == cover.size()) throw Error("internal: condensation cover incomplete");
    std::set<Config> fresh;
    for (const Config& m : cover[best].second)
      if (left.erase(m)) fresh.insert(m);
    out.push_back(format_line(line_of(p, shrink_cover(maxes_by_line.at(cover[best].first), fresh))));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string format_problem(const Problem& p) {
  std::string s = "white:\n";
  auto side = [&](Side sd) {
    if (p.constraint(sd).empty()) {
      bool same = p.arity(sd) == p.arity(other(sd)) && !p.constraint(other(sd)).empty();
      s += same ? "empty\n" : "empty^" + std::to_string(p.arity(sd)) + "\n";
      return;
    }
    for (const auto& l : condensed_lines(p, sd)) s += l + "\n";
  };
  side(Side::white);
  s += "black:\n";
  side(Side::black);
  s.pop_back();
  return s;
}

}  // namespace sre
