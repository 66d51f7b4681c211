#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sre/dsl.hpp"
#include "sre/maximal.hpp"
#include "sre/problem.hpp"
#include "sre/round_elimination.hpp"

namespace sre {

// Labels of a lifted problem are indices into alphabet(); a configuration is a
// sorted vector of such indices, reusing Config.
class LiftedProblem {
 public:
  LiftedProblem(Problem base, std::size_t delta, std::size_t rank)
      : base_(std::move(base)), delta_(delta), rank_(rank), cache_(std::make_shared<Cache>()) {
    if (delta_ < base_.arity(Side::white))
      throw PreconditionError("lift: delta must be at least the base white arity");
    if (rank_ < base_.arity(Side::black)) throw PreconditionError("lift: rank must be at least the base black arity");
    diagram_ = compute_diagram(base_, Side::black);
    alphabet_ = right_closed_sets(diagram_);
    for (LabelSet s : alphabet_) names_.push_back(set_label_name(base_, s));
    for (std::size_t i = 0; i < alphabet_.size(); ++i) index_[alphabet_[i]] = static_cast<LabelId>(i);
  }

  const Problem& base() const { return base_; }
  std::size_t delta() const { return delta_; }
  std::size_t rank() const { return rank_; }
  std::size_t base_white_arity() const { return base_.arity(Side::white); }
  std::size_t base_black_arity() const { return base_.arity(Side::black); }
  const Diagram& base_black_diagram() const { return diagram_; }
  const std::vector<LabelSet>& alphabet() const { return alphabet_; }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return alphabet_.size(); }
  std::optional<LabelId> index_of(LabelSet s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t arity(Side s) const { return s == Side::white ? delta_ : rank_; }
  std::size_t sub_arity(Side s) const { return s == Side::white ? base_white_arity() : base_black_arity(); }

  // Predicate on a sorted multiset of exactly sub_arity(side) lift labels.
  bool sub_holds(Side s, const Config& m) const {
    {
      std::lock_guard<std::mutex> g(cache_->mu);
      auto& tbl = cache_->table[s == Side::white ? 0 : 1];
      auto it = tbl.find(m);
      if (it != tbl.end()) return it->second;
    }
    SetConfig sc;
    for (LabelId i : m) sc.push_back(alphabet_.at(i));
    bool v;
    if (s == Side::white)
      v = !for_each_choice(sc, [&](const Config& c) { return !base_.white().contains(c); });
    else
      v = all_choices_in(base_.black(), sc);
    std::lock_guard<std::mutex> g(cache_->mu);
    cache_->table[s == Side::white ? 0 : 1].emplace(m, v);
    return v;
  }

  // Every sub-multiset of size sub_arity(side) satisfies sub_holds.
  bool holds(Side s, const Config& m) const {
    return for_each_submultiset(m, sub_arity(s), [&](const Config& sub) { return sub_holds(s, sub); });
  }
  bool white_holds(const Config& m) const { return holds(Side::white, m); }
  bool black_holds(const Config& m) const { return holds(Side::black, m); }

  // Checked variants with the arity precondition.
  bool lift_white_holds(const Config& m) const {
    if (m.size() != delta_) throw PreconditionError("lift_white_holds: wrong arity");
    return white_holds(m);
  }
  bool lift_black_holds(const Config& m) const {
    if (m.size() != rank_) throw PreconditionError("lift_black_holds: wrong arity");
    return black_holds(m);
  }

  // Materializes the lift as a plain problem when the multiset count of both
  // sides stays within the guard.
  Problem materialize(std::size_t guard = 1000000) const {
    std::vector<std::vector<std::string>> cfg[2];
    for (Side s : {Side::white, Side::black}) {
      std::size_t count = multiset_count(size(), arity(s));
      if (count > guard) throw ExplosionGuard("lift materialization", guard, count);
      for_each_multiset(size(), arity(s), [&](const Config& m) {
        if (holds(s, m)) {
          std::vector<std::string> names;
          for (LabelId i : m) names.push_back(names_[i]);
          cfg[s == Side::white ? 0 : 1].push_back(names);
        }
        return true;
      });
    }
    return Problem::from_names(delta_, cfg[0], rank_, cfg[1], names_);
  }

  std::string legend() const {
    std::string out = "# legend:\n";
    for (std::size_t i = 0; i < size(); ++i) {
      out += "#   " + names_[i] + " = {";
      auto ms = members(alphabet_[i]);
      for (std::size_t j = 0; j < ms.size(); ++j) out += (j ? ", " : "") + base_.name(ms[j]);
      out += "}\n";
    }
    return out;
  }

 private:
  struct Cache {
    std::mutex mu;
    std::map<Config, bool> table[2];
  };

  Problem base_;
  std::size_t delta_;
  std::size_t rank_;
  Diagram diagram_;
  std::vector<LabelSet> alphabet_;
  std::vector<std::string> names_;
  std::map<LabelSet, LabelId> index_;
  std::shared_ptr<Cache> cache_;
};

inline LiftedProblem lift(const Problem& base, std::size_t delta, std::size_t rank) {
  return LiftedProblem(base, delta, rank);
}

inline std::string format_lifted(const LiftedProblem& lp, std::size_t guard = 1000000) {
  return lp.legend() + format_problem(lp.materialize(guard));
}

// Node predicate is a disjunction of the white predicates of several lifts
// that share one alphabet; the edge predicate is that of the first lift.
class LiftDisjunction {
 public:
  explicit LiftDisjunction(std::vector<LiftedProblem> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw PreconditionError("LiftDisjunction: no parts");
    for (const auto& p : parts_) {
      if (p.alphabet() != parts_[0].alphabet() || p.names() != parts_[0].names())
        throw PreconditionError("LiftDisjunction: parts must share an alphabet");
      if (p.delta() != parts_[0].delta() || p.rank() != parts_[0].rank())
        throw PreconditionError("LiftDisjunction: parts must share delta and rank");
    }
  }

  const std::vector<LiftedProblem>& parts() const { return parts_; }
  const LiftedProblem& edge_lift() const { return parts_[0]; }
  std::size_t size() const { return parts_[0].size(); }
  const std::vector<LabelSet>& alphabet() const { return parts_[0].alphabet(); }
  const std::vector<std::string>& names() const { return parts_[0].names(); }
  std::size_t delta() const { return parts_[0].delta(); }
  std::size_t rank() const { return parts_[0].rank(); }

  bool white_holds(const Config& m) const {
    for (const auto& p : parts_)
      if (p.white_holds(m)) return true;
    return false;
  }
  bool black_holds(const Config& m) const { return parts_[0].black_holds(m); }

 private:
  std::vector<LiftedProblem> parts_;
};

}  // namespace sre
