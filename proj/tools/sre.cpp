#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "sre/sre.hpp"

using sre::service::json;

namespace {

enum Exit { kOk = 0, kDomain = 1, kUsage = 2, kGuard = 3 };

std::string slurp(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw sre::PreconditionError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw sre::PreconditionError("cannot write " + path);
  out << text;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void print_problem(const sre::Problem& p) { std::cout << sre::format_problem(p) << "\n"; }

int exit_of_verdict(sre::Verdict v, const std::string& expect) {
  if (v == sre::Verdict::indeterminate) return kGuard;
  if (expect.empty()) return kOk;
  bool want_sat = expect == "sat" || expect == "SAT";
  return (v == sre::Verdict::sat) == want_sat ? kOk : kDomain;
}

int serve(int port, const std::string& store) {
  sre::service::Api api(store);
  httplib::Server srv;
  auto route = [&api](const httplib::Request& req, httplib::Response& res) {
    std::string path = req.path.substr(4);
    try {
      json body = req.body.empty() ? json::object() : json::parse(req.body);
      res.set_content(api.handle(req.method, path, body).dump(2), "application/json");
    } catch (const std::exception& e) {
      res.status = sre::service::status_of(e);
      res.set_content(sre::service::error_json(e).dump(2), "application/json");
    }
  };
  srv.Get(R"(/api/.*)", route);
  srv.Post(R"(/api/.*)", route);
  std::cerr << "listening on port " << port << "\n";
  if (!srv.listen("0.0.0.0", port)) {
    std::cerr << "cannot bind port " << port << "\n";
    return kDomain;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sre: round elimination and Supported LOCAL lower bound workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "print JSON (same documents as the HTTP API)");

  std::string problem_path = "-";
  auto add_problem = [&](CLI::App* sub) { sub->add_option("-p,--problem", problem_path, "problem file (- for stdin)"); };

  auto* parse = app.add_subcommand("parse", "parse and print a problem in canonical form");
  add_problem(parse);

  std::string side = "black";
  bool hasse = false;
  auto* diagram = app.add_subcommand("diagram", "strength diagram of one side");
  add_problem(diagram);
  diagram->add_option("--side", side)->check(CLI::IsMember({"white", "black"}));
  diagram->add_flag("--hasse", hasse, "print only covering edges");

  std::size_t steps = 1;
  std::string mode = "RE";
  bool re_stats = false, rename = false;
  auto* re = app.add_subcommand("re", "apply round elimination");
  add_problem(re);
  re->add_option("--steps", steps);
  re->add_option("--mode", mode)->check(CLI::IsMember({"RE", "re", "rere"}));
  re->add_flag("--stats", re_stats, "print label and configuration counts per step to stderr");
  re->add_flag("--rename", rename, "rename output labels to A, B, C, ...");

  std::size_t delta = 0, rank = 0;
  auto* lift = app.add_subcommand("lift", "lift_{delta,rank} of a problem");
  add_problem(lift);
  lift->add_option("--delta", delta)->required();
  lift->add_option("--rank", rank)->required();

  std::string target_path, map_path, groups;
  auto* relax = app.add_subcommand("relax", "relaxations between problems");
  relax->require_subcommand(1);
  auto* relax_check = relax->add_subcommand("check", "check a relaxation map");
  add_problem(relax_check);
  relax_check->add_option("--target", target_path)->required();
  relax_check->add_option("--map", map_path)->required();
  auto* relax_find = relax->add_subcommand("find", "search for a relaxation map");
  add_problem(relax_find);
  relax_find->add_option("--target", target_path)->required();
  auto* relax_merge = relax->add_subcommand("merge", "merge label groups, e.g. \"O,P;M,Z\"");
  add_problem(relax_merge);
  relax_merge->add_option("--groups", groups)->required();

  std::string family_kind;
  std::size_t fx = 0, fy = 1, colors = 0, beta = 0;
  auto* family = app.add_subcommand("family", "generate a problem family member");
  family->add_option("kind", family_kind)->required()->check(CLI::IsMember({"mm", "matching", "arbdef", "ruling"}));
  family->add_option("--delta", delta)->required();
  family->add_option("--x", fx);
  family->add_option("--y", fy);
  family->add_option("--colors", colors);
  family->add_option("--beta", beta);

  std::string graph_path, graph_kind = "biregular";
  std::size_t gn = 0, gw = 0, gb = 0, ggirth = 3, tries = 2000;
  std::uint64_t seed = 1;
  auto* graph = app.add_subcommand("graph", "generate and inspect support graphs");
  graph->require_subcommand(1);
  auto* graph_gen = graph->add_subcommand("gen", "generate a graph file");
  graph_gen->add_option("--kind", graph_kind)
      ->check(CLI::IsMember({"biregular", "regular", "cycle", "complete", "complete-bipartite", "bipartite-cycle"}));
  graph_gen->add_option("--n", gn);
  graph_gen->add_option("--white", gw);
  graph_gen->add_option("--black", gb);
  graph_gen->add_option("--delta", delta);
  graph_gen->add_option("--rank", rank);
  graph_gen->add_option("--girth", ggirth);
  graph_gen->add_option("--tries", tries);
  graph_gen->add_option("--seed", seed);
  auto* graph_info = graph->add_subcommand("info", "girth, degrees and small invariants");
  graph_info->add_option("-g,--graph", graph_path, "graph file (- for stdin)")->default_val("-");
  auto* graph_dc = graph->add_subcommand("double-cover", "bipartite double cover of a graph");
  graph_dc->add_option("-g,--graph", graph_path)->default_val("-");

  std::string lift_spec, verdict_out, solution_out, expect;
  std::uint64_t max_nodes = 0;
  std::int64_t budget_ms = 0;
  bool pointer_free = false;
  auto* solve = app.add_subcommand("solve", "search for a solution on a support graph");
  add_problem(solve);
  solve->add_option("-g,--graph", graph_path)->required();
  solve->add_option("--lift", lift_spec, "solve lift_{delta,rank}, given as delta,rank");
  solve->add_option("--seed", seed);
  solve->add_option("--max-nodes", max_nodes);
  solve->add_option("--budget-ms", budget_ms);
  solve->add_option("--verdict-out", verdict_out);
  solve->add_option("--solution-out", solution_out);
  solve->add_option("--expect", expect)->check(CLI::IsMember({"sat", "unsat", "SAT", "UNSAT"}));
  solve->add_flag("--pointer-free-boundary", pointer_free, "forbid ruling pointers on edges leaving S");

  std::size_t din = 0, rin = 0;
  auto* oracle = app.add_subcommand("oracle", "zero-round Supported LOCAL solvability by table search");
  add_problem(oracle);
  oracle->add_option("-g,--graph", graph_path)->required();
  oracle->add_option("--delta-in", din);
  oracle->add_option("--rank-in", rin);
  oracle->add_option("--max-nodes", max_nodes);
  oracle->add_option("--budget-ms", budget_ms);

  std::string bkind, bgirth, det_spec = "linear", seq_kind;
  std::int64_t bk = 0, bbeta = 0;
  double bn = 0, blog2n = -1, beps = 0.25, bc = 4, bac = 1, bkd = 0;
  auto* bound = app.add_subcommand("bound", "lower bound arithmetic");
  bound->require_subcommand(1);
  auto* bdet = bound->add_subcommand("det", "rounds from a sequence length and girth");
  bdet->add_option("--kind", bkind)->default_val("bipartite");
  bdet->add_option("--k", bk)->required();
  bdet->add_option("--girth", bgirth)->required();
  auto* bthm = bound->add_subcommand("thm34", "deterministic and randomized bounds at size n");
  bthm->add_option("--kind", bkind)->default_val("bipartite");
  bthm->add_option("--n", bn)->required();
  bthm->add_option("--delta", delta)->required();
  bthm->add_option("--rank", rank)->required();
  bthm->add_option("--k", bk)->required();
  bthm->add_option("--eps", beps);
  bthm->add_option("--c", bc);
  auto* bder = bound->add_subcommand("derand", "randomized bound from a deterministic one");
  bder->add_option("--kind", bkind)->default_val("graph");
  bder->add_option("--n", bn);
  bder->add_option("--log2n", blog2n);
  bder->add_option("--det", det_spec, "linear, a constant, or a table m:v,m:v,...");
  auto* bseq = bound->add_subcommand("seq", "lower bound sequence length");
  bseq->add_option("kind", seq_kind)->required()->check(CLI::IsMember({"matching", "ruling"}));
  bseq->add_option("--delta-in", din);
  bseq->add_option("--x", fx);
  bseq->add_option("--y", fy);
  bseq->add_option("--eps", beps);
  bseq->add_option("--beta", bbeta);
  bseq->add_option("--k", bkd);
  bseq->add_option("--ac", bac, "(alpha+1) c");

  int port = 8080;
  std::string store;
  auto* srv = app.add_subcommand("serve", "JSON HTTP API");
  srv->add_option("--port", port);
  srv->add_option("--store", store, "session store file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  namespace svc = sre::service;
  try {
    if (*parse) {
      sre::Problem p = sre::parse_problem(slurp(problem_path));
      if (as_json)
        emit(svc::problem_json(p));
      else
        print_problem(p);
    } else if (*diagram) {
      sre::Problem p = sre::parse_problem(slurp(problem_path));
      sre::Side s = side == "white" ? sre::Side::white : sre::Side::black;
      if (as_json)
        emit(svc::diagram_json(p, s));
      else
        std::cout << svc::diagram_text(p, s, hasse);
    } else if (*re) {
      sre::Problem p = sre::parse_problem(slurp(problem_path));
      auto m = svc::re_mode_of(mode);
      if (as_json) {
        emit(svc::re_json(p, steps, m));
      } else {
        auto seq = svc::re_steps(p, steps, m);
        if (re_stats) {
          auto line = [](const sre::Problem& q) {
            std::cerr << q.label_count() << " " << q.white().configs.size() << " " << q.black().configs.size() << "\n";
          };
          line(p);
          for (const auto& q : seq) line(q);
        }
        const sre::Problem& out = seq.empty() ? p : seq.back();
        print_problem(rename ? sre::with_short_names(out) : out);
      }
    } else if (*lift) {
      sre::Problem p = sre::parse_problem(slurp(problem_path));
      if (as_json)
        emit(svc::lift_json(p, delta, rank));
      else
        std::cout << sre::format_lifted(sre::lift(p, delta, rank));
    } else if (*relax_check) {
      sre::Problem src = sre::parse_problem(slurp(problem_path)), dst = sre::parse_problem(slurp(target_path));
      json j = svc::relaxation_check_json(src, dst, sre::parse_relaxation(slurp(map_path), src, dst));
      if (as_json)
        emit(j);
      else
        std::cout << (j["ok"].get<bool>() ? "ok" : "invalid: " + j["reason"].get<std::string>()) << "\n";
      return j["ok"].get<bool>() ? kOk : kDomain;
    } else if (*relax_find) {
      sre::Problem src = sre::parse_problem(slurp(problem_path)), dst = sre::parse_problem(slurp(target_path));
      json j = svc::relax_find_json(src, dst);
      if (as_json)
        emit(j);
      else if (j["found"].get<bool>())
        std::cout << j["map"].get<std::string>();
      else
        std::cout << "no relaxation\n";
      return j["found"].get<bool>() ? kOk : kDomain;
    } else if (*relax_merge) {
      sre::Problem p = sre::parse_problem(slurp(problem_path));
      auto g = svc::parse_groups(groups);
      if (as_json)
        emit(svc::merge_json(p, g));
      else
        print_problem(sre::merge_labels(p, g).merged);
    } else if (*family) {
      json req{{"kind", family_kind}, {"delta", delta}, {"x", fx}, {"y", fy}, {"colors", colors}, {"beta", beta}};
      if (as_json)
        emit(svc::family_json(req));
      else
        print_problem(svc::family_problem(req));
    } else if (*graph_gen) {
      json req{{"kind", graph_kind}, {"n", gn},        {"white", gw}, {"black", gb},    {"delta", delta},
               {"rank", rank},       {"girth", ggirth}, {"seed", seed}, {"tries", tries}};
      if (as_json)
        emit(svc::graph_gen_json(req));
      else
        std::cout << sre::format_graph_file(svc::generate_graph(req));
    } else if (*graph_info) {
      emit(svc::graph_info_json(sre::parse_graph_file(slurp(graph_path))));
    } else if (*graph_dc) {
      sre::GraphFile gf = sre::parse_graph_file(slurp(graph_path));
      if (gf.kind != sre::GraphKind::graph) throw sre::PreconditionError("double-cover: input must be a plain graph");
      std::vector<std::pair<std::size_t, std::size_t>> es;
      for (const auto& e : gf.hypergraph.edges) es.push_back({e[0], e[1]});
      std::cout << sre::format_graph_file(sre::graph_file_of(sre::double_cover(sre::Graph(gf.hypergraph.n, es))));
    } else if (*solve) {
      json req{{"problem", slurp(problem_path)}, {"graph", slurp(graph_path)}, {"seed", seed},
               {"pointer_free_boundary", pointer_free}};
      if (max_nodes) req["max_nodes"] = max_nodes;
      if (budget_ms) req["budget_ms"] = budget_ms;
      if (!lift_spec.empty()) {
        auto comma = lift_spec.find(',');
        if (comma == std::string::npos) throw sre::PreconditionError("--lift expects delta,rank");
        req["lift"] = {{"delta", std::stoul(lift_spec.substr(0, comma))}, {"rank", std::stoul(lift_spec.substr(comma + 1))}};
      }
      if (as_json) {
        json j = svc::solve_json(req);
        emit(j);
        return exit_of_verdict(j["verdict"] == "SAT" ? sre::Verdict::sat
                               : j["verdict"] == "UNSAT" ? sre::Verdict::unsat
                                                         : sre::Verdict::indeterminate,
                               expect);
      }
      sre::Problem p = svc::problem_of(req);
      sre::GraphFile gf = sre::parse_graph_file(req["graph"].get<std::string>());
      std::optional<std::pair<std::size_t, std::size_t>> lp;
      if (req.contains("lift")) lp = std::make_pair(req["lift"]["delta"].get<std::size_t>(), req["lift"]["rank"].get<std::size_t>());
      sre::SearchOptions opt;
      opt.seed = seed;
      if (max_nodes) opt.max_nodes = max_nodes;
      if (budget_ms) opt.budget_ms = budget_ms;
      auto o = svc::run_solve(p, gf, lp, opt, pointer_free);
      std::string verdict = sre::format_verdict(o.result.verdict, o.result.stats);
      std::cout << verdict;
      if (!verdict_out.empty()) spit(verdict_out, sre::format_verdict(o.result.verdict, o.result.stats, false));
      if (o.result.solution) {
        std::string sol = sre::format_solution(gf, o.names, *o.result.solution);
        if (!solution_out.empty())
          spit(solution_out, sol);
        else
          std::cout << sol;
      }
      return exit_of_verdict(o.result.verdict, expect);
    } else if (*oracle) {
      json req{{"problem", slurp(problem_path)}, {"graph", slurp(graph_path)}};
      if (din) req["delta_in"] = din;
      if (rin) req["rank_in"] = rin;
      if (max_nodes) req["max_nodes"] = max_nodes;
      if (budget_ms) req["budget_ms"] = budget_ms;
      json j = svc::oracle_json(req);
      if (as_json)
        emit(j);
      else
        std::cout << j["verdict"].get<std::string>() << "\nnodes: " << j["nodes"] << "\nslots: " << j["slots"] << "\n";
      return j["verdict"] == "INDETERMINATE" ? kGuard : kOk;
    } else if (*bound) {
      json req;
      if (*bdet) {
        req = {{"bound", "det"}, {"kind", bkind}, {"k", bk}};
        if (bgirth == "inf" || bgirth == "infinity")
          req["girth"] = "inf";
        else
          req["girth"] = std::stoul(bgirth);
      } else if (*bthm) {
        req = {{"bound", "thm34"}, {"kind", bkind}, {"n", bn}, {"delta", delta}, {"rank", rank},
               {"k", bk},          {"eps", beps},   {"c", bc}};
      } else if (*bder) {
        req = {{"bound", "derand"}, {"kind", bkind}, {"det", det_spec}};
        if (blog2n >= 0)
          req["log2n"] = blog2n;
        else if (bn > 0)
          req["n"] = bn;
        else
          throw sre::PreconditionError("derand needs --n or --log2n");
      } else {
        req = {{"bound", "seq"}, {"kind", seq_kind}, {"delta_in", din}, {"x", fx}, {"y", fy},
               {"eps", beps},    {"beta", bbeta},    {"k", bkd},        {"ac", bac}};
      }
      json j = svc::bound_json(req);
      if (as_json)
        emit(j);
      else if (*bthm)
        std::cout << "deterministic: " << j["deterministic"] << "\nrandomized: " << j["randomized"] << "\n";
      else
        std::cout << j["value"] << "\n";
    } else if (*srv) {
      return serve(port, store);
    }
  } catch (const sre::ExplosionGuard& e) {
    std::cerr << "guard: " << e.what() << "\n";
    return kGuard;
  } catch (const sre::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const sre::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const svc::RequestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const sre::Error& e) {
    std::cerr << e.kind() << ": " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kOk;
}
