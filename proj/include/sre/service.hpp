#pragma once

#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sre/bounds.hpp"
#include "sre/dsl.hpp"
#include "sre/equivalence.hpp"
#include "sre/extraction.hpp"
#include "sre/families.hpp"
#include "sre/io.hpp"
#include "sre/lift.hpp"
#include "sre/relaxation.hpp"
#include "sre/round_elimination.hpp"
#include "sre/solver.hpp"
#include "sre/zero_round.hpp"

namespace sre::service {

using json = nlohmann::json;

// Request-level failure with an HTTP status.
class RequestError : public Error {
 public:
  RequestError(int status, const std::string& what) : Error(what), status_(status) {}
  const char* kind() const noexcept override { return "RequestError"; }
  int status() const { return status_; }

 private:
  int status_;
};

inline json error_json(const std::exception& e) {
  json j;
  j["error"] = "Error";
  j["message"] = e.what();
  if (auto* se = dynamic_cast<const Error*>(&e)) j["error"] = se->kind();
  if (auto* g = dynamic_cast<const ExplosionGuard*>(&e)) {
    j["limit"] = g->limit();
    j["observed"] = g->observed();
  }
  if (auto* p = dynamic_cast<const ParseError*>(&e)) {
    j["line"] = p->line();
    j["column"] = p->column();
  }
  return j;
}

// HTTP status for an exception escaping a handler.
inline int status_of(const std::exception& e) {
  if (auto* r = dynamic_cast<const RequestError*>(&e)) return r->status();
  if (dynamic_cast<const ExplosionGuard*>(&e)) return 422;
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const PreconditionError*>(&e)) return 400;
  if (dynamic_cast<const json::exception*>(&e)) return 400;
  if (dynamic_cast<const Error*>(&e)) return 422;
  return 500;
}

namespace detail {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  return j[key].get<T>();
}

inline const json& need(const json& j, const char* key) {
  if (!j.contains(key)) throw RequestError(400, std::string("missing field '") + key + "'");
  return j[key];
}

inline Side side_of(const std::string& s) {
  if (s == "white") return Side::white;
  if (s == "black") return Side::black;
  throw RequestError(400, "side must be white or black");
}

inline json names_json(const std::vector<std::string>& names) { return json(names); }

}  // namespace detail

inline json constraint_json(const Problem& p, Side s) {
  json j;
  j["arity"] = p.arity(s);
  json cfgs = json::array();
  for (const Config& c : p.constraint(s).configs) cfgs.push_back(p.names(c));
  j["configurations"] = cfgs;
  return j;
}

inline json stats_json(const Problem& p) {
  return json{{"labels", p.label_count()},
              {"white", p.white().configs.size()},
              {"black", p.black().configs.size()}};
}

inline json problem_json(const Problem& p) {
  json j;
  j["dsl"] = format_problem(p);
  j["labels"] = p.labels();
  j["white"] = constraint_json(p, Side::white);
  j["black"] = constraint_json(p, Side::black);
  j["stats"] = stats_json(p);
  return j;
}

inline Problem problem_of(const json& req, const char* key = "problem") {
  const json& v = detail::need(req, key);
  if (v.is_string()) return parse_problem(v.get<std::string>());
  if (v.is_object() && v.contains("dsl")) return parse_problem(v["dsl"].get<std::string>());
  throw RequestError(400, std::string("field '") + key + "' must hold DSL text");
}

// ---- operations shared by the CLI (--json) and the HTTP API ----

inline json diagram_json(const Problem& p, Side s) {
  Diagram d = compute_diagram(p, s);
  json j;
  j["side"] = side_name(s);
  json edges = json::array(), hasse = json::array(), up = json::object(), closed = json::array();
  for (auto [y, x] : d.edges) edges.push_back({p.name(y), p.name(x)});
  for (auto [y, x] : d.hasse()) hasse.push_back({p.name(y), p.name(x)});
  for (LabelId l = 0; l < d.size; ++l) up[p.name(l)] = p.set_names(d.up[l]);
  for (LabelSet rc : right_closed_sets(d)) closed.push_back(p.set_names(rc));
  j["edges"] = edges;
  j["hasse"] = hasse;
  j["reachable"] = up;
  j["right_closed"] = closed;
  return j;
}

inline std::string diagram_text(const Problem& p, Side s, bool hasse) {
  Diagram d = compute_diagram(p, s);
  std::string out;
  for (auto [y, x] : hasse ? d.hasse() : d.edges) out += p.name(y) + " -> " + p.name(x) + "\n";
  return out;
}

enum class ReMode { full, re_only, rere_only };

inline std::vector<Problem> re_steps(const Problem& p, std::size_t steps, ReMode mode) {
  std::vector<Problem> out;
  Problem cur = p;
  for (std::size_t i = 0; i < steps; ++i) {
    switch (mode) {
      case ReMode::full: cur = apply_RE(cur); break;
      case ReMode::re_only: cur = re(cur); break;
      case ReMode::rere_only: cur = rere(cur); break;
    }
    out.push_back(cur);
  }
  return out;
}

inline ReMode re_mode_of(const std::string& s) {
  if (s == "RE" || s == "full") return ReMode::full;
  if (s == "re") return ReMode::re_only;
  if (s == "rere") return ReMode::rere_only;
  throw RequestError(400, "mode must be RE, re or rere");
}

inline json re_json(const Problem& p, std::size_t steps, ReMode mode) {
  json j;
  json growth = json::array();
  growth.push_back(stats_json(p));
  auto seq = re_steps(p, steps, mode);
  for (const auto& q : seq) growth.push_back(stats_json(q));
  j["growth"] = growth;
  j["problem"] = problem_json(seq.empty() ? p : seq.back());
  j["equivalent_to_input"] = problems_equivalent(seq.empty() ? p : seq.back(), p);
  return j;
}

inline json lift_json(const Problem& p, std::size_t delta, std::size_t rank, std::size_t guard = 1000000) {
  LiftedProblem lp = lift(p, delta, rank);
  json j;
  j["delta"] = delta;
  j["rank"] = rank;
  j["alphabet"] = lp.names();
  json legend = json::object();
  for (std::size_t i = 0; i < lp.size(); ++i) legend[lp.names()[i]] = p.set_names(lp.alphabet()[i]);
  j["legend"] = legend;
  Problem m = lp.materialize(guard);
  j["problem"] = problem_json(m);
  j["text"] = lp.legend() + format_problem(m);
  return j;
}

inline std::vector<std::vector<std::string>> groups_of(const json& g) {
  std::vector<std::vector<std::string>> out;
  for (const auto& grp : g) out.push_back(grp.get<std::vector<std::string>>());
  return out;
}

// "O,P;M Z" style grouping used on the command line.
inline std::vector<std::vector<std::string>> parse_groups(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::string cur;
  auto flush = [&]() {
    std::vector<std::string> g;
    std::string tok;
    for (char c : cur + ",") {
      if (c == ',' || c == ' ') {
        if (!tok.empty()) g.push_back(tok);
        tok.clear();
      } else {
        tok += c;
      }
    }
    if (!g.empty()) out.push_back(g);
    cur.clear();
  };
  for (char c : text) {
    if (c == ';')
      flush();
    else
      cur += c;
  }
  flush();
  return out;
}

inline json relaxation_check_json(const Problem& src, const Problem& dst, const RelaxationMap& f) {
  RelaxationCheck c = check_relaxation(src, dst, f);
  json j;
  j["ok"] = c.ok;
  j["reason"] = c.reason;
  if (!c.source_black.empty()) j["black_configuration"] = src.names(c.source_black);
  if (!c.target_choice.empty()) j["choice"] = dst.names(c.target_choice);
  return j;
}

inline json merge_json(const Problem& p, const std::vector<std::vector<std::string>>& groups) {
  MergeResult m = merge_labels(p, groups);
  json j;
  j["problem"] = problem_json(m.merged);
  j["relaxation"] = relaxation_check_json(p, m.merged, m.map);
  return j;
}

inline json relax_find_json(const Problem& src, const Problem& dst) {
  auto f = find_relaxation(src, dst);
  json j;
  j["found"] = f.has_value();
  if (f) j["map"] = format_relaxation(src, dst, *f);
  return j;
}

inline Problem family_problem(const json& req) {
  std::string kind = detail::need(req, "kind").get<std::string>();
  std::size_t delta = detail::need(req, "delta").get<std::size_t>();
  if (kind == "mm") return maximal_matching_problem(delta);
  if (kind == "matching")
    return matching_family(delta, detail::get_or<std::size_t>(req, "x", 0), detail::get_or<std::size_t>(req, "y", 1));
  if (kind == "arbdef") return arbdef_family(delta, detail::need(req, "colors").get<std::size_t>());
  if (kind == "ruling")
    return ruling_family(delta, detail::need(req, "colors").get<std::size_t>(),
                         detail::get_or<std::size_t>(req, "beta", 0));
  throw RequestError(400, "unknown family " + kind);
}

inline json family_json(const json& req) { return problem_json(family_problem(req)); }

inline GraphFile generate_graph(const json& req) {
  std::string kind = detail::need(req, "kind").get<std::string>();
  std::uint64_t seed = detail::get_or<std::uint64_t>(req, "seed", 1);
  if (kind == "biregular")
    return graph_file_of(gen_biregular(detail::need(req, "white").get<std::size_t>(),
                                       detail::need(req, "black").get<std::size_t>(),
                                       detail::need(req, "delta").get<std::size_t>(),
                                       detail::need(req, "rank").get<std::size_t>(), seed));
  if (kind == "regular") {
    auto g = gen_regular_girth(detail::need(req, "n").get<std::size_t>(), detail::need(req, "delta").get<std::size_t>(),
                               detail::get_or<std::size_t>(req, "girth", 3), seed,
                               detail::get_or<std::size_t>(req, "tries", 2000));
    return graph_file_of(g.graph);
  }
  if (kind == "cycle") return graph_file_of(cycle_graph(detail::need(req, "n").get<std::size_t>()));
  if (kind == "complete") return graph_file_of(complete_graph(detail::need(req, "n").get<std::size_t>()));
  if (kind == "complete-bipartite")
    return graph_file_of(complete_bipartite(detail::need(req, "white").get<std::size_t>(),
                                            detail::need(req, "black").get<std::size_t>()));
  if (kind == "bipartite-cycle") return graph_file_of(bipartite_cycle(detail::need(req, "n").get<std::size_t>()));
  throw RequestError(400, "unknown graph kind " + kind);
}

inline json graph_info_json(const GraphFile& gf) {
  json j;
  j["kind"] = graph_kind_name(gf.kind);
  auto girth_json = [](std::size_t g) { return g == kInfiniteGirth ? json("infinity") : json(g); };
  if (gf.kind == GraphKind::bipartite) {
    const auto& g = gf.bipartite;
    j["white"] = g.white_count;
    j["black"] = g.black_count;
    j["edges"] = g.edges.size();
    j["girth"] = girth_json(girth(g));
    std::vector<std::size_t> wd, bd;
    for (std::size_t w = 0; w < g.white_count; ++w) wd.push_back(g.white_degree(w));
    for (std::size_t b = 0; b < g.black_count; ++b) bd.push_back(g.black_degree(b));
    j["white_degrees"] = wd;
    j["black_degrees"] = bd;
  } else {
    const auto& h = gf.hypergraph;
    j["nodes"] = h.n;
    j["edges"] = h.edges.size();
    j["degrees"] = h.degrees();
    j["linear"] = h.linear();
    j["girth"] = girth_json(girth(h));
    if (gf.kind == GraphKind::graph && h.n <= node_guard()) {
      std::vector<std::pair<std::size_t, std::size_t>> es;
      for (const auto& e : h.edges) es.push_back({e[0], e[1]});
      Graph g(h.n, es);
      j["independence_number"] = independence_number(g);
      j["chromatic_number"] = chromatic_number(g);
    }
  }
  return j;
}

inline json graph_gen_json(const json& req) {
  GraphFile gf = generate_graph(req);
  json j;
  j["graph"] = format_graph_file(gf);
  j["info"] = graph_info_json(gf);
  return j;
}

struct SolveOutcome {
  SolveResult result;
  std::vector<std::string> names;
};

inline SolveOutcome run_solve(const Problem& p, const GraphFile& gf, std::optional<std::pair<std::size_t, std::size_t>> lift_params,
                              const SearchOptions& opt, bool pointer_free_boundary) {
  SolveOutcome out;
  std::optional<LiftedProblem> lp;
  Model m;
  if (lift_params) {
    lp.emplace(lift(p, lift_params->first, lift_params->second));
    m = model_of(*lp);
  } else {
    m = model_of(p);
  }
  out.names = m.names;
  if (gf.kind == GraphKind::bipartite) {
    Scope sc = Scope::all(gf.bipartite);
    sc.white = gf.s;
    out.result = solve_bipartite(m, gf.bipartite, sc, opt);
  } else if (gf.has_s) {
    std::optional<Domain> filter;
    if (pointer_free_boundary && lp) filter = pointer_free_labels(*lp);
    out.result = find_S_solution(m, gf.hypergraph, gf.s, filter, opt);
  } else {
    out.result = find_nonbipartite_solution(m, gf.hypergraph, opt);
  }
  return out;
}

inline json solve_json(const json& req) {
  Problem p = problem_of(req);
  GraphFile gf = parse_graph_file(detail::need(req, "graph").get<std::string>());
  std::optional<std::pair<std::size_t, std::size_t>> lp;
  if (req.contains("lift") && !req["lift"].is_null())
    lp = std::make_pair(detail::need(req["lift"], "delta").get<std::size_t>(),
                        detail::need(req["lift"], "rank").get<std::size_t>());
  SearchOptions opt;
  opt.seed = detail::get_or<std::uint64_t>(req, "seed", 0);
  opt.max_nodes = detail::get_or<std::uint64_t>(req, "max_nodes", opt.max_nodes);
  opt.budget_ms = detail::get_or<std::int64_t>(req, "budget_ms", opt.budget_ms);
  auto o = run_solve(p, gf, lp, opt, detail::get_or<bool>(req, "pointer_free_boundary", false));
  json j;
  j["verdict"] = verdict_name(o.result.verdict);
  j["nodes"] = o.result.stats.nodes;
  j["failures"] = o.result.stats.failures;
  if (o.result.verdict == Verdict::unsat) j["fingerprint"] = fingerprint_hex(o.result.stats.fingerprint);
  if (o.result.solution) j["solution"] = format_solution(gf, o.names, *o.result.solution);
  return j;
}

inline json oracle_json(const json& req) {
  Problem p = problem_of(req);
  GraphFile gf = parse_graph_file(detail::need(req, "graph").get<std::string>());
  if (gf.kind != GraphKind::bipartite) throw RequestError(400, "oracle: support must be a bipartite graph file");
  OracleOptions opt;
  opt.max_nodes = detail::get_or<std::uint64_t>(req, "max_nodes", opt.max_nodes);
  opt.budget_ms = detail::get_or<std::int64_t>(req, "budget_ms", opt.budget_ms);
  std::size_t din = detail::get_or<std::size_t>(req, "delta_in", p.arity(Side::white));
  std::size_t rin = detail::get_or<std::size_t>(req, "rank_in", p.arity(Side::black));
  OracleResult r = zero_round_supported_solvable(p, gf.bipartite, din, rin, opt);
  json j;
  j["verdict"] = verdict_name(r.verdict);
  j["nodes"] = r.nodes;
  j["slots"] = r.slots;
  j["constraints"] = r.constraints;
  return j;
}

inline BoundKind bound_kind_of(const std::string& s) {
  if (s == "bipartite" || s == "graph") return BoundKind::bipartite;
  if (s == "hypergraph") return BoundKind::hypergraph;
  throw RequestError(400, "kind must be bipartite, graph or hypergraph");
}

// D(m) given as "linear" (D(m) = m), a constant, or a table "m:v,m:v,...";
// tables extend by their last entry.
inline std::function<std::int64_t(std::int64_t)> det_function_of(const std::string& spec) {
  if (spec.empty() || spec == "linear") return [](std::int64_t m) { return m; };
  if (spec.find(':') == std::string::npos) {
    std::int64_t c = std::stoll(spec);
    return [c](std::int64_t) { return c; };
  }
  std::map<std::int64_t, std::int64_t> table;
  std::string item;
  std::istringstream in(spec);
  while (std::getline(in, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw RequestError(400, "det table entries are m:value");
    table[std::stoll(item.substr(0, colon))] = std::stoll(item.substr(colon + 1));
  }
  return [table](std::int64_t m) {
    auto it = table.upper_bound(m);
    if (it == table.begin()) return std::int64_t{0};
    return std::prev(it)->second;
  };
}

inline json bound_json(const json& req) {
  std::string which = detail::need(req, "bound").get<std::string>();
  json j;
  j["bound"] = which;
  if (which == "det") {
    std::size_t g = kInfiniteGirth;
    const json& gj = detail::need(req, "girth");
    if (!(gj.is_string() && (gj == "inf" || gj == "infinity"))) g = gj.get<std::size_t>();
    j["value"] = det_bound(bound_kind_of(detail::get_or<std::string>(req, "kind", "bipartite")),
                           detail::need(req, "k").get<std::int64_t>(), g);
  } else if (which == "thm34") {
    auto r = theorem34_bounds(bound_kind_of(detail::get_or<std::string>(req, "kind", "bipartite")),
                              detail::need(req, "n").get<double>(), detail::need(req, "delta").get<std::size_t>(),
                              detail::need(req, "rank").get<std::size_t>(), detail::need(req, "k").get<std::int64_t>(),
                              detail::need(req, "eps").get<double>(), detail::need(req, "c").get<double>());
    j["deterministic"] = r.deterministic;
    j["randomized"] = r.randomized;
    j["formula"] = r.formula_tag;
  } else if (which == "derand") {
    double log2n = req.contains("log2n") ? req["log2n"].get<double>() : std::log2(detail::need(req, "n").get<double>());
    BoundKind kind = bound_kind_of(detail::get_or<std::string>(req, "kind", "graph"));
    auto d = det_function_of(detail::get_or<std::string>(req, "det", "linear"));
    j["argument"] = derand_argument(kind, log2n);
    j["value"] = derand_translate(kind, d, log2n);
  } else if (which == "seq") {
    std::string kind = detail::need(req, "kind").get<std::string>();
    if (kind == "matching")
      j["value"] = matching_sequence_length(detail::need(req, "delta_in").get<std::int64_t>(),
                                            detail::get_or<std::int64_t>(req, "x", 0),
                                            detail::need(req, "y").get<std::int64_t>());
    else if (kind == "ruling")
      j["value"] = ruling_sequence_length(detail::get_or<double>(req, "eps", 0.25), detail::need(req, "beta").get<std::int64_t>(),
                                          detail::need(req, "k").get<double>(), detail::get_or<double>(req, "ac", 1.0));
    else
      throw RequestError(400, "sequence kind must be matching or ruling");
  } else {
    throw RequestError(400, "bound must be det, thm34, derand or seq");
  }
  return j;
}

// ---- sessions ----

struct Snapshot {
  json action;
  Problem problem;
};

struct Session {
  std::string id;
  std::vector<Snapshot> history;
  std::mutex mu;

  const Problem& current() const { return history.back().problem; }
};

// Applies one recorded mutating action to a problem.
inline Problem apply_action(const Problem& p, const json& action) {
  std::string op = detail::need(action, "op").get<std::string>();
  if (op == "re") {
    auto seq = re_steps(p, detail::get_or<std::size_t>(action, "steps", 1),
                        re_mode_of(detail::get_or<std::string>(action, "mode", "RE")));
    return seq.empty() ? p : seq.back();
  }
  if (op == "lift")
    return lift(p, detail::need(action, "delta").get<std::size_t>(), detail::need(action, "rank").get<std::size_t>())
        .materialize();
  if (op == "merge") return merge_labels(p, groups_of(detail::need(action, "groups"))).merged;
  throw RequestError(400, "unknown action " + op);
}

class SessionStore {
 public:
  explicit SessionStore(std::string path = "") : path_(std::move(path)) { load(); }

  std::shared_ptr<Session> create(const Problem& p, const std::string& text) {
    std::lock_guard<std::mutex> g(mu_);
    auto s = std::make_shared<Session>();
    s->id = std::to_string(++next_);
    s->history.push_back({json{{"op", "parse"}, {"text", text}}, p});
    sessions_[s->id] = s;
    save_locked();
    return s;
  }

  std::shared_ptr<Session> find(const std::string& id) {
    std::lock_guard<std::mutex> g(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw RequestError(404, "no session " + id);
    return it->second;
  }

  void persist() {
    std::lock_guard<std::mutex> g(mu_);
    save_locked();
  }

  // Rebuilds the current problem from the first snapshot and the actions.
  static Problem replay(const Session& s) {
    Problem p = s.history.front().problem;
    for (std::size_t i = 1; i < s.history.size(); ++i) p = apply_action(p, s.history[i].action);
    return p;
  }

 private:
  void save_locked() {
    if (path_.empty()) return;
    json all = json::array();
    for (const auto& [id, s] : sessions_) {
      json a = json::array();
      for (const auto& snap : s->history) a.push_back(snap.action);
      all.push_back({{"id", id}, {"actions", a}});
    }
    std::ofstream out(path_);
    out << all.dump(2) << "\n";
  }

  void load() {
    if (path_.empty()) return;
    std::ifstream in(path_);
    if (!in) return;
    json all = json::parse(in);
    for (const auto& entry : all) {
      auto s = std::make_shared<Session>();
      s->id = entry["id"].get<std::string>();
      const json& actions = entry["actions"];
      Problem p = parse_problem(actions.at(0)["text"].get<std::string>());
      s->history.push_back({actions.at(0), p});
      for (std::size_t i = 1; i < actions.size(); ++i) {
        p = apply_action(p, actions[i]);
        s->history.push_back({actions[i], p});
      }
      next_ = std::max(next_, std::stoul(s->id));
      sessions_[s->id] = s;
    }
  }

  std::string path_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::size_t next_ = 0;
};

inline json session_json(const Session& s) {
  json j;
  j["id"] = s.id;
  j["problem"] = problem_json(s.current());
  json h = json::array();
  for (const auto& snap : s.history) h.push_back(snap.action);
  j["history"] = h;
  return j;
}

// Dispatches one API call. `path` excludes the "/api" prefix.
class Api {
 public:
  explicit Api(std::string store_path = "") : store_(std::move(store_path)) {}

  json handle(const std::string& method, const std::string& path, const json& body) {
    auto parts = split(path);
    if (method == "POST" && path == "/problem/parse") {
      std::string text = detail::need(body, "text").get<std::string>();
      Problem p = parse_problem(text);
      auto s = store_.create(p, text);
      return session_json(*s);
    }
    if (parts.size() >= 2 && parts[0] == "problem") {
      auto s = store_.find(parts[1]);
      if (method == "GET" && parts.size() == 2) {
        std::lock_guard<std::mutex> g(s->mu);
        return session_json(*s);
      }
      if (method == "POST" && parts.size() == 3) {
        const std::string& op = parts[2];
        if (op == "diagram") {
          std::lock_guard<std::mutex> g(s->mu);
          return diagram_json(s->current(), detail::side_of(detail::get_or<std::string>(body, "side", "black")));
        }
        if (op == "relax-check") {
          std::lock_guard<std::mutex> g(s->mu);
          Problem dst = problem_of(body, "target");
          return relaxation_check_json(s->current(), dst,
                                       parse_relaxation(detail::need(body, "map").get<std::string>(), s->current(), dst));
        }
        if (op == "re" || op == "lift" || op == "merge") return mutate(*s, op, body);
      }
    }
    if (method == "POST" && path == "/re/step") {
      auto s = store_.find(detail::need(body, "id").get<std::string>());
      return mutate(*s, "re", body);
    }
    if (method == "POST" && parts.size() == 3 && parts[0] == "session" && parts[2] == "undo") {
      auto s = store_.find(parts[1]);
      {
        std::lock_guard<std::mutex> g(s->mu);
        if (s->history.size() <= 1) throw RequestError(409, "nothing to undo");
        s->history.pop_back();
      }
      store_.persist();
      std::lock_guard<std::mutex> g(s->mu);
      return session_json(*s);
    }
    if (method == "POST") {
      if (path == "/family") return family_json(body);
      if (path == "/graph/gen") return graph_gen_json(body);
      if (path == "/solve") return solve_json(body);
      if (path == "/oracle") return oracle_json(body);
      if (path == "/bound") return bound_json(body);
    }
    throw RequestError(404, "no route " + method + " " + path);
  }

  SessionStore& store() { return store_; }

 private:
  static std::vector<std::string> split(const std::string& path) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : path) {
      if (c == '/') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  }

  json mutate(Session& s, const std::string& op, const json& body) {
    json action = body;
    action.erase("id");
    action["op"] = op;
    json out;
    {
      std::lock_guard<std::mutex> g(s.mu);
      const Problem& before = s.current();
      Problem after = apply_action(before, action);
      if (op == "re") {
        out = re_json(before, detail::get_or<std::size_t>(action, "steps", 1),
                      re_mode_of(detail::get_or<std::string>(action, "mode", "RE")));
      } else if (op == "merge") {
        out = merge_json(before, groups_of(action["groups"]));
      } else {
        out = lift_json(before, action["delta"].get<std::size_t>(), action["rank"].get<std::size_t>());
      }
      s.history.push_back({action, after});
      out["id"] = s.id;
      out["history_length"] = s.history.size();
    }
    store_.persist();
    return out;
  }

  SessionStore store_;
};

}  // namespace sre::service
