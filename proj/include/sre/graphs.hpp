#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sre/error.hpp"

namespace sre {

inline constexpr std::size_t kInfiniteGirth = std::numeric_limits<std::size_t>::max();

inline std::size_t node_guard() {
  if (const char* v = std::getenv("SRE_GUARD_NODES")) return std::strtoul(v, nullptr, 10);
  return 40;
}

// Simple undirected graph on nodes 0..n-1.
struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::vector<std::size_t>> adj;       // neighbours
  std::vector<std::vector<std::size_t>> incident;  // edge indices

  Graph() = default;
  Graph(std::size_t nodes, std::vector<std::pair<std::size_t, std::size_t>> es) : n(nodes), edges(std::move(es)) {
    adj.assign(n, {});
    incident.assign(n, {});
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      auto [u, v] = edges[i];
      if (u >= n || v >= n) throw PreconditionError("edge endpoint out of range");
      if (u == v) throw PreconditionError("self loop");
      if (!seen.insert({std::min(u, v), std::max(u, v)}).second) throw PreconditionError("parallel edge");
      adj[u].push_back(v);
      adj[v].push_back(u);
      incident[u].push_back(i);
      incident[v].push_back(i);
    }
  }

  std::size_t degree(std::size_t v) const { return adj[v].size(); }
  std::size_t max_degree() const {
    std::size_t d = 0;
    for (const auto& a : adj) d = std::max(d, a.size());
    return d;
  }
  bool has_edge(std::size_t u, std::size_t v) const {
    return std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end();
  }
  bool regular(std::size_t d) const {
    for (const auto& a : adj)
      if (a.size() != d) return false;
    return true;
  }
};

// 2-coloured bipartite graph; white nodes 0..white_count-1, black nodes
// 0..black_count-1, edges (white, black).
struct BipartiteGraph {
  std::size_t white_count = 0;
  std::size_t black_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::vector<std::size_t>> white_edges;  // incident edge indices
  std::vector<std::vector<std::size_t>> black_edges;

  BipartiteGraph() = default;
  BipartiteGraph(std::size_t nw, std::size_t nb, std::vector<std::pair<std::size_t, std::size_t>> es)
      : white_count(nw), black_count(nb), edges(std::move(es)) {
    white_edges.assign(nw, {});
    black_edges.assign(nb, {});
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      auto [w, b] = edges[i];
      if (w >= nw || b >= nb) throw PreconditionError("edge endpoint out of range");
      if (!seen.insert(edges[i]).second) throw PreconditionError("parallel edge");
      white_edges[w].push_back(i);
      black_edges[b].push_back(i);
    }
  }

  std::size_t white_degree(std::size_t w) const { return white_edges[w].size(); }
  std::size_t black_degree(std::size_t b) const { return black_edges[b].size(); }

  bool biregular(std::size_t delta, std::size_t r) const {
    for (const auto& e : white_edges)
      if (e.size() != delta) return false;
    for (const auto& e : black_edges)
      if (e.size() != r) return false;
    return true;
  }

  // Plain graph with white nodes first, then black nodes.
  Graph as_graph() const {
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (auto [w, b] : edges) es.push_back({w, white_count + b});
    return Graph(white_count + black_count, es);
  }
};

struct Hypergraph {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> edges;

  Hypergraph() = default;
  Hypergraph(std::size_t nodes, std::vector<std::vector<std::size_t>> es) : n(nodes), edges(std::move(es)) {
    for (auto& e : edges) {
      std::sort(e.begin(), e.end());
      if (std::adjacent_find(e.begin(), e.end()) != e.end()) throw PreconditionError("repeated hyperedge member");
      for (std::size_t v : e)
        if (v >= n) throw PreconditionError("hyperedge member out of range");
    }
  }

  static Hypergraph of(const Graph& g) {
    std::vector<std::vector<std::size_t>> es;
    for (auto [u, v] : g.edges) es.push_back({u, v});
    return Hypergraph(g.n, es);
  }

  bool linear() const {
    for (std::size_t i = 0; i < edges.size(); ++i)
      for (std::size_t j = i + 1; j < edges.size(); ++j) {
        std::vector<std::size_t> common;
        std::set_intersection(edges[i].begin(), edges[i].end(), edges[j].begin(), edges[j].end(),
                              std::back_inserter(common));
        if (common.size() > 1) return false;
      }
    return true;
  }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> d(n, 0);
    for (const auto& e : edges)
      for (std::size_t v : e) ++d[v];
    return d;
  }
};

// White nodes = hypergraph nodes, black nodes = hyperedges. Edges are listed
// hyperedge by hyperedge, members in ascending order.
inline BipartiteGraph incidence_graph(const Hypergraph& h) {
  std::vector<std::pair<std::size_t, std::size_t>> es;
  for (std::size_t i = 0; i < h.edges.size(); ++i)
    for (std::size_t v : h.edges[i]) es.push_back({v, i});
  return BipartiteGraph(h.n, h.edges.size(), es);
}

inline BipartiteGraph incidence_graph(const Graph& g) { return incidence_graph(Hypergraph::of(g)); }

inline BipartiteGraph double_cover(const Graph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> es;
  for (auto [u, v] : g.edges) {
    es.push_back({u, v});
    es.push_back({v, u});
  }
  return BipartiteGraph(g.n, g.n, es);
}

inline std::size_t girth(const Graph& g) {
  std::size_t best = kInfiniteGirth;
  std::vector<std::size_t> dist(g.n), parent(g.n);
  for (std::size_t s = 0; s < g.n; ++s) {
    std::fill(dist.begin(), dist.end(), kInfiniteGirth);
    dist[s] = 0;
    parent[s] = g.n;
    std::deque<std::size_t> q{s};
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop_front();
      if (best != kInfiniteGirth && 2 * dist[u] + 1 >= best) break;
      for (std::size_t v : g.adj[u]) {
        if (dist[v] == kInfiniteGirth) {
          dist[v] = dist[u] + 1;
          parent[v] = u;
          q.push_back(v);
        } else if (parent[u] != v) {
          best = std::min(best, dist[u] + dist[v] + 1);
        }
      }
    }
  }
  return best;
}

inline std::size_t girth(const BipartiteGraph& g) { return girth(g.as_graph()); }

// Half the girth of the incidence graph.
inline std::size_t girth(const Hypergraph& h) {
  std::size_t g = girth(incidence_graph(h));
  return g == kInfiniteGirth ? g : g / 2;
}

inline std::size_t independence_number(const Graph& g, std::size_t guard = node_guard()) {
  if (g.n > guard || g.n > 64) throw ExplosionGuard("independence_number: too many nodes", std::min<std::size_t>(guard, 64), g.n);
  std::vector<std::uint64_t> nb(g.n, 0);
  for (std::size_t v = 0; v < g.n; ++v)
    for (std::size_t u : g.adj[v]) nb[v] |= std::uint64_t{1} << u;
  std::size_t best = 0;
  auto rec = [&](auto&& self, std::uint64_t cand, std::size_t size) -> void {
    if (!cand) {
      best = std::max(best, size);
      return;
    }
    if (size + static_cast<std::size_t>(std::popcount(cand)) <= best) return;
    // take isolated vertices of the remaining graph for free, else branch on max degree
    std::size_t pick = g.n;
    int pick_deg = -1;
    for (std::uint64_t c = cand; c; c &= c - 1) {
      std::size_t v = static_cast<std::size_t>(std::countr_zero(c));
      int d = std::popcount(nb[v] & cand);
      if (d == 0) {
        self(self, cand & ~(std::uint64_t{1} << v), size + 1);
        return;
      }
      if (d > pick_deg) {
        pick_deg = d;
        pick = v;
      }
    }
    std::uint64_t vb = std::uint64_t{1} << pick;
    self(self, cand & ~vb & ~nb[pick], size + 1);
    self(self, cand & ~vb, size);
  };
  std::uint64_t all = g.n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << g.n) - 1);
  rec(rec, all, 0);
  return best;
}

inline std::optional<std::vector<std::size_t>> k_coloring(const Graph& g, std::size_t k) {
  std::vector<std::size_t> color(g.n, k);
  std::vector<std::size_t> order(g.n);
  for (std::size_t i = 0; i < g.n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g.degree(a) > g.degree(b); });
  auto rec = [&](auto&& self, std::size_t i, std::size_t used) -> bool {
    if (i == g.n) return true;
    std::size_t v = order[i];
    // colours beyond used+1 are symmetric
    std::size_t limit = std::min(k, used + 1);
    for (std::size_t c = 0; c < limit; ++c) {
      bool ok = true;
      for (std::size_t u : g.adj[v])
        if (color[u] == c) {
          ok = false;
          break;
        }
      if (!ok) continue;
      color[v] = c;
      if (self(self, i + 1, std::max(used, c + 1))) return true;
      color[v] = k;
    }
    return false;
  };
  if (!rec(rec, 0, 0)) return std::nullopt;
  return color;
}

inline std::size_t chromatic_number(const Graph& g, std::size_t guard = node_guard()) {
  if (g.n > guard) throw ExplosionGuard("chromatic_number: too many nodes", guard, g.n);
  if (g.n == 0) return 0;
  for (std::size_t k = 1;; ++k)
    if (k_coloring(g, k)) return k;
}

inline bool proper_coloring(const Graph& g, const std::vector<std::size_t>& color) {
  for (auto [u, v] : g.edges)
    if (color[u] == color[v]) return false;
  return true;
}

// Configuration-style pairing: each white stub is matched to a random black
// stub of a node not yet adjacent; dead ends restart.
inline BipartiteGraph gen_biregular(std::size_t nw, std::size_t nb, std::size_t delta, std::size_t r, std::uint64_t seed,
                                    std::size_t max_tries = 1000) {
  if (nw * delta != nb * r) throw PreconditionError("gen_biregular: nW*delta must equal nB*r");
  if (delta > nb || r > nw) throw GenerationFailed("gen_biregular: degree exceeds opposite side");
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < max_tries; ++t) {
    std::vector<std::size_t> left(nb, r);
    std::vector<std::pair<std::size_t, std::size_t>> es;
    bool ok = true;
    for (std::size_t w = 0; w < nw && ok; ++w) {
      std::vector<bool> used(nb, false);
      for (std::size_t k = 0; k < delta; ++k) {
        std::size_t total = 0;
        for (std::size_t b = 0; b < nb; ++b)
          if (!used[b]) total += left[b];
        if (total == 0) {
          ok = false;
          break;
        }
        std::size_t pick = std::uniform_int_distribution<std::size_t>(0, total - 1)(rng);
        std::size_t b = 0;
        for (;; ++b) {
          if (used[b]) continue;
          if (pick < left[b]) break;
          pick -= left[b];
        }
        used[b] = true;
        --left[b];
        es.push_back({w, b});
      }
    }
    if (ok) return BipartiteGraph(nw, nb, es);
  }
  throw GenerationFailed("gen_biregular: retry budget exhausted");
}

struct GraphCertificate {
  std::size_t girth = kInfiniteGirth;
  std::optional<std::size_t> independence_number;
  std::size_t tries = 0;
};

struct GeneratedGraph {
  Graph graph;
  GraphCertificate certificate;
};

inline std::size_t bfs_distance(const std::vector<std::vector<std::size_t>>& adj, std::size_t s, std::size_t t,
                                std::size_t limit) {
  if (s == t) return 0;
  std::vector<std::size_t> dist(adj.size(), kInfiniteGirth);
  dist[s] = 0;
  std::deque<std::size_t> q{s};
  while (!q.empty()) {
    std::size_t u = q.front();
    q.pop_front();
    if (dist[u] >= limit) break;
    for (std::size_t v : adj[u]) {
      if (dist[v] != kInfiniteGirth) continue;
      dist[v] = dist[u] + 1;
      if (v == t) return dist[v];
      q.push_back(v);
    }
  }
  return kInfiniteGirth;
}

// Random Δ-regular graph with girth at least g_min, built by random stub
// pairing that refuses edges closing a short cycle; restarts on dead ends.
inline GeneratedGraph gen_regular_girth(std::size_t n, std::size_t delta, std::size_t g_min, std::uint64_t seed,
                                        std::size_t max_tries = 2000) {
  if ((n * delta) % 2 != 0) throw PreconditionError("gen_regular_girth: n*delta must be even");
  if (delta >= n && n > 0) throw GenerationFailed("gen_regular_girth: degree too large");
  std::mt19937_64 rng(seed);
  for (std::size_t t = 1; t <= max_tries; ++t) {
    std::vector<std::vector<std::size_t>> adj(n);
    std::vector<std::pair<std::size_t, std::size_t>> es;
    bool ok = true;
    while (ok) {
      std::vector<std::size_t> open;
      for (std::size_t v = 0; v < n; ++v)
        if (adj[v].size() < delta) open.push_back(v);
      if (open.empty()) break;
      std::size_t u = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
      std::vector<std::size_t> cand;
      for (std::size_t v : open) {
        if (v == u || std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end()) continue;
        if (g_min > 2) {
          std::size_t d = bfs_distance(adj, u, v, g_min);
          if (d != kInfiniteGirth && d + 1 < g_min) continue;
        }
        cand.push_back(v);
      }
      if (cand.empty()) {
        ok = false;
        break;
      }
      std::size_t v = cand[std::uniform_int_distribution<std::size_t>(0, cand.size() - 1)(rng)];
      adj[u].push_back(v);
      adj[v].push_back(u);
      es.push_back({std::min(u, v), std::max(u, v)});
    }
    if (!ok) continue;
    std::sort(es.begin(), es.end());
    Graph g(n, es);
    GeneratedGraph out{g, {}};
    out.certificate.girth = girth(g);
    if (out.certificate.girth < g_min) continue;
    out.certificate.tries = t;
    if (n <= node_guard()) out.certificate.independence_number = independence_number(g);
    return out;
  }
  throw GenerationFailed("gen_regular_girth: no graph with the requested girth within the retry budget");
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> es;
  for (std::size_t i = 0; i < n; ++i) es.push_back({std::min(i, (i + 1) % n), std::max(i, (i + 1) % n)});
  return Graph(n, es);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> es;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) es.push_back({i, j});
  return Graph(n, es);
}

inline BipartiteGraph complete_bipartite(std::size_t a, std::size_t b) {
  std::vector<std::pair<std::size_t, std::size_t>> es;
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) es.push_back({i, j});
  return BipartiteGraph(a, b, es);
}

// Bipartite 2n-cycle: white i joined to black i and black i-1.
inline BipartiteGraph bipartite_cycle(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> es;
  for (std::size_t i = 0; i < n; ++i) {
    es.push_back({i, i});
    es.push_back({i, (i + n - 1) % n});
  }
  return BipartiteGraph(n, n, es);
}

}  // namespace sre
