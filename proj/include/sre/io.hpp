#pragma once

#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sre/csp.hpp"
#include "sre/dsl.hpp"
#include "sre/graphs.hpp"
#include "sre/solver.hpp"

namespace sre {

enum class GraphKind { bipartite, graph, hypergraph };

inline const char* graph_kind_name(GraphKind k) {
  switch (k) {
    case GraphKind::bipartite: return "bipartite";
    case GraphKind::graph: return "graph";
    default: return "hypergraph";
  }
}

// A support graph as read from a graph file. Node ids are canonicalized to
// 0..n-1 in the order of the node lists; printing uses 1..n.
struct GraphFile {
  GraphKind kind = GraphKind::graph;
  BipartiteGraph bipartite;  // kind == bipartite
  Hypergraph hypergraph;     // kind == graph (rank 2) or hypergraph
  std::vector<std::size_t> input;  // edge indices of the input subgraph
  bool has_input = false;
  std::vector<bool> s;  // nodes of S (white nodes for bipartite files)
  bool has_s = false;

  // The bipartite graph the solvers run on.
  BipartiteGraph support() const { return kind == GraphKind::bipartite ? bipartite : incidence_graph(hypergraph); }
  std::size_t node_count() const { return kind == GraphKind::bipartite ? bipartite.white_count : hypergraph.n; }
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

}  // namespace detail

// Format:
//   bipartite | graph | hypergraph
//   white: ids... / black: ids...   (bipartite)   or   nodes: n
//   edges:
//   u v            (one edge or hyperedge per line)
//   input:         (optional) edge indices, 0-based, whitespace separated
//   S:             (optional) node ids
inline GraphFile parse_graph_file(const std::string& text) {
  GraphFile gf;
  std::istringstream in(text);
  std::string raw;
  std::size_t no = 0;
  std::string section;
  bool have_header = false;
  std::map<std::string, std::size_t> white_id, black_id;
  std::size_t nodes = 0;
  bool have_nodes = false;
  std::vector<std::vector<std::size_t>> edges;
  std::vector<std::size_t> s_nodes;
  auto node_of = [&](const std::map<std::string, std::size_t>& ids, const std::string& tok, std::size_t col) {
    auto it = ids.find(tok);
    if (it == ids.end()) throw ParseError(no, col, "unknown node id " + tok);
    return it->second;
  };
  auto plain_id = [&](const std::string& tok, std::size_t col) -> std::size_t {
    std::size_t v = 0;
    try {
      std::size_t used = 0;
      v = std::stoul(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError(no, col, "expected a node number, got " + tok);
    }
    if (v < 1 || v > nodes) throw ParseError(no, col, "node " + tok + " outside 1.." + std::to_string(nodes));
    return v - 1;
  };
  auto add_ids = [&](std::map<std::string, std::size_t>& ids, const std::vector<std::string>& toks) {
    for (const auto& t : toks)
      if (!ids.emplace(t, ids.size()).second) throw ParseError(no, 1, "duplicate node id " + t);
  };
  while (std::getline(in, raw)) {
    ++no;
    std::string line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    if (!have_header) {
      if (line == "bipartite")
        gf.kind = GraphKind::bipartite;
      else if (line == "graph")
        gf.kind = GraphKind::graph;
      else if (line == "hypergraph")
        gf.kind = GraphKind::hypergraph;
      else
        throw ParseError(no, 1, "expected header bipartite, graph or hypergraph");
      have_header = true;
      continue;
    }
    auto colon = line.find(':');
    if (colon != std::string::npos) {
      std::string key = detail::trim(line.substr(0, colon));
      auto rest = detail::split_ws(line.substr(colon + 1));
      if (key == "white" || key == "black") {
        if (gf.kind != GraphKind::bipartite) throw ParseError(no, 1, key + ": only valid in bipartite files");
        add_ids(key == "white" ? white_id : black_id, rest);
        section = key;
        continue;
      }
      if (key == "nodes") {
        if (gf.kind == GraphKind::bipartite) throw ParseError(no, 1, "nodes: not valid in bipartite files");
        if (rest.size() != 1) throw ParseError(no, colon + 2, "nodes: expects a count");
        try {
          nodes = std::stoul(rest[0]);
        } catch (const std::exception&) {
          throw ParseError(no, colon + 2, "nodes: expects a count");
        }
        have_nodes = true;
        section = key;
        continue;
      }
      if (key == "edges" || key == "input" || key == "S") {
        section = key;
        if (key == "input") gf.has_input = true;
        if (key == "S") gf.has_s = true;
        line = detail::trim(line.substr(colon + 1));
        if (line.empty()) continue;
      } else {
        throw ParseError(no, 1, "unknown section " + key);
      }
    }
    auto toks = detail::split_ws(line);
    if (section == "edges") {
      std::vector<std::size_t> e;
      if (gf.kind == GraphKind::bipartite) {
        if (toks.size() != 2) throw ParseError(no, 1, "bipartite edges are 'white black'");
        e = {node_of(white_id, toks[0], 1), node_of(black_id, toks[1], toks[0].size() + 2)};
      } else {
        if (!have_nodes) throw ParseError(no, 1, "nodes: must precede edges:");
        if (gf.kind == GraphKind::graph && toks.size() != 2) throw ParseError(no, 1, "graph edges have two endpoints");
        for (const auto& t : toks) e.push_back(plain_id(t, 1));
      }
      edges.push_back(e);
    } else if (section == "input") {
      for (const auto& t : toks) {
        std::size_t idx;
        try {
          idx = std::stoul(t);
        } catch (const std::exception&) {
          throw ParseError(no, 1, "input: expects edge indices");
        }
        gf.input.push_back(idx);
      }
    } else if (section == "S") {
      for (const auto& t : toks)
        s_nodes.push_back(gf.kind == GraphKind::bipartite ? node_of(white_id, t, 1) : plain_id(t, 1));
    } else {
      throw ParseError(no, 1, "content outside a section");
    }
  }
  if (!have_header) throw ParseError(no + 1, 1, "empty graph file");
  try {
    if (gf.kind == GraphKind::bipartite) {
      std::vector<std::pair<std::size_t, std::size_t>> es;
      for (const auto& e : edges) es.push_back({e[0], e[1]});
      gf.bipartite = BipartiteGraph(white_id.size(), black_id.size(), es);
    } else {
      if (gf.kind == GraphKind::graph) {
        std::vector<std::pair<std::size_t, std::size_t>> es;
        for (const auto& e : edges) es.push_back({std::min(e[0], e[1]), std::max(e[0], e[1])});
        Graph(nodes, es);  // validates simplicity
      }
      gf.hypergraph = Hypergraph(nodes, edges);
    }
  } catch (const PreconditionError& e) {
    throw ParseError(no, 1, e.what());
  }
  std::size_t edge_count = gf.kind == GraphKind::bipartite ? gf.bipartite.edges.size() : gf.hypergraph.edges.size();
  for (std::size_t i : gf.input)
    if (i >= edge_count) throw ParseError(no, 1, "input edge index out of range");
  gf.s.assign(gf.node_count(), !gf.has_s);
  for (std::size_t v : s_nodes) gf.s[v] = true;
  return gf;
}

inline std::string format_graph_file(const GraphFile& gf) {
  std::ostringstream out;
  out << graph_kind_name(gf.kind) << "\n";
  if (gf.kind == GraphKind::bipartite) {
    out << "white:";
    for (std::size_t i = 1; i <= gf.bipartite.white_count; ++i) out << " " << i;
    out << "\nblack:";
    for (std::size_t i = 1; i <= gf.bipartite.black_count; ++i) out << " " << i;
    out << "\nedges:\n";
    for (auto [w, b] : gf.bipartite.edges) out << w + 1 << " " << b + 1 << "\n";
  } else {
    out << "nodes: " << gf.hypergraph.n << "\nedges:\n";
    for (const auto& e : gf.hypergraph.edges) {
      for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i] + 1;
      out << "\n";
    }
  }
  if (gf.has_input) {
    out << "input:";
    for (std::size_t i : gf.input) out << " " << i;
    out << "\n";
  }
  if (gf.has_s) {
    out << "S:";
    for (std::size_t v = 0; v < gf.s.size(); ++v)
      if (gf.s[v]) out << " " << v + 1;
    out << "\n";
  }
  return out.str();
}

inline GraphFile graph_file_of(const Graph& g) {
  GraphFile gf;
  gf.kind = GraphKind::graph;
  gf.hypergraph = Hypergraph::of(g);
  gf.s.assign(g.n, true);
  return gf;
}

inline GraphFile graph_file_of(const BipartiteGraph& g) {
  GraphFile gf;
  gf.kind = GraphKind::bipartite;
  gf.bipartite = g;
  gf.s.assign(g.white_count, true);
  return gf;
}

inline GraphFile graph_file_of(const Hypergraph& h) {
  GraphFile gf;
  gf.kind = GraphKind::hypergraph;
  gf.hypergraph = h;
  gf.s.assign(h.n, true);
  return gf;
}

// One line per labelled edge of the support: "w b : LABEL" for bipartite
// files, "u v : LABEL" (half-edge of u towards v) for graphs and
// "u e<i> : LABEL" (1-based hyperedge index) for hypergraphs.
inline std::string format_solution(const GraphFile& gf, const std::vector<std::string>& names,
                                   const SolutionAssignment& a) {
  std::ostringstream out;
  BipartiteGraph g = gf.support();
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (e >= a.labels.size() || !a.labels[e]) continue;
    auto [w, b] = g.edges[e];
    out << w + 1 << " ";
    if (gf.kind == GraphKind::bipartite) {
      out << b + 1;
    } else if (gf.kind == GraphKind::graph) {
      const auto& he = gf.hypergraph.edges[b];
      out << (he[0] == w ? he[1] : he[0]) + 1;
    } else {
      out << "e" << b + 1;
    }
    out << " : " << names.at(*a.labels[e]) << "\n";
  }
  return out.str();
}

inline SolutionAssignment parse_solution(const std::string& text, const GraphFile& gf,
                                         const std::vector<std::string>& names) {
  BipartiteGraph g = gf.support();
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_of;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [w, b] = g.edges[e];
    if (gf.kind == GraphKind::graph) {
      const auto& he = gf.hypergraph.edges[b];
      edge_of[{w, he[0] == w ? he[1] : he[0]}] = e;
    } else {
      edge_of[{w, b}] = e;
    }
  }
  std::map<std::string, LabelId> label_of;
  for (std::size_t i = 0; i < names.size(); ++i) label_of[names[i]] = static_cast<LabelId>(i);
  SolutionAssignment a;
  a.labels.assign(g.edges.size(), std::nullopt);
  std::istringstream in(text);
  std::string raw;
  std::size_t no = 0;
  while (std::getline(in, raw)) {
    ++no;
    std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(" : ");
    if (colon == std::string::npos) throw ParseError(no, 1, "expected 'u v : LABEL'");
    auto ends = detail::split_ws(line.substr(0, colon));
    std::string label = detail::trim(line.substr(colon + 3));
    if (ends.size() != 2) throw ParseError(no, 1, "expected two endpoints");
    std::size_t u, v;
    try {
      u = std::stoul(ends[0]) - 1;
      std::string second = ends[1];
      if (gf.kind == GraphKind::hypergraph && !second.empty() && second[0] == 'e') second = second.substr(1);
      v = std::stoul(second) - 1;
    } catch (const std::exception&) {
      throw ParseError(no, 1, "bad endpoint");
    }
    auto it = edge_of.find({u, v});
    if (it == edge_of.end()) throw ParseError(no, 1, "no such edge");
    auto lt = label_of.find(label);
    if (lt == label_of.end()) throw ParseError(no, colon + 4, "unknown label " + label);
    a.labels[it->second] = lt->second;
  }
  return a;
}

inline std::string fingerprint_hex(std::uint64_t f) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << f;
  return out.str();
}

// SAT / UNSAT / INDETERMINATE followed by statistics; UNSAT carries the
// fingerprint of the explored search space.
inline std::string format_verdict(Verdict v, const SearchStats& st, bool with_time = true) {
  std::ostringstream out;
  out << verdict_name(v) << "\n";
  out << "nodes: " << st.nodes << "\n";
  out << "failures: " << st.failures << "\n";
  if (with_time) out << "time_ms: " << std::fixed << std::setprecision(3) << st.millis << "\n";
  if (v == Verdict::unsat) out << "fingerprint: " << fingerprint_hex(st.fingerprint) << "\n";
  return out.str();
}

}  // namespace sre
