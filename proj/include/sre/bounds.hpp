#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>

#include "sre/error.hpp"
#include "sre/graphs.hpp"

namespace sre {

enum class BoundKind { bipartite, hypergraph };

inline const char* bound_kind_name(BoundKind k) { return k == BoundKind::bipartite ? "bipartite" : "hypergraph"; }

namespace detail {

// Floor with a small tolerance so that values like 9.9999999997 coming from
// log ratios land on the intended integer.
inline std::int64_t tolerant_floor(double v) { return static_cast<std::int64_t>(std::floor(v + 1e-9)); }

}  // namespace detail

// Rounds needed given a lower bound sequence of length k on a support of girth
// g: min{2k, floor((g-4)/2)} for bipartite supports, min{k, ...} for
// hypergraphs, where g is the girth of the hypergraph itself.
inline std::int64_t det_bound(BoundKind kind, std::int64_t k, std::size_t girth) {
  if (k < 0) throw PreconditionError("det_bound: k must be non-negative");
  std::int64_t seq = kind == BoundKind::bipartite ? 2 * k : k;
  if (girth == kInfiniteGirth) return seq;
  if (girth < 4) throw PreconditionError("det_bound: girth must be at least 4");
  std::int64_t half = (static_cast<std::int64_t>(girth) - 4) / 2;
  return std::min(seq, half);
}

struct BoundReport {
  double n = 0;
  std::size_t delta = 0;
  std::size_t rank = 0;
  std::int64_t k = 0;
  double eps = 0;
  double c = 0;
  BoundKind kind = BoundKind::bipartite;
  std::int64_t deterministic = 0;
  std::int64_t randomized = 0;
  std::string formula_tag;
};

namespace detail {

inline std::int64_t support_bound(BoundKind kind, double n, std::size_t delta, std::size_t rank, std::int64_t k,
                                  double eps, double c) {
  std::int64_t seq = kind == BoundKind::bipartite ? 2 * k : k;
  if (n <= 0) return 0;
  double g_term = (eps * (std::log(n) / std::log(static_cast<double>(delta * rank)) - c) - 4) / 2;
  double m = std::min(static_cast<double>(seq), g_term);
  return std::max<std::int64_t>(0, tolerant_floor(m) - 1);
}

}  // namespace detail

// Deterministic and randomized Supported LOCAL lower bounds from a lift-based
// lower bound sequence of length k on supports of girth eps log_{delta r} n.
// The randomized bound substitutes n by sqrt(log2(n)/3) (bipartite) or
// cbrt(log2(n)/4) (hypergraph).
inline BoundReport theorem34_bounds(BoundKind kind, double n, std::size_t delta, std::size_t rank, std::int64_t k,
                                    double eps, double c) {
  if (n < 2 || delta < 2 || rank < 2) throw PreconditionError("theorem34_bounds: requires n, delta, rank >= 2");
  if (k < 0) throw PreconditionError("theorem34_bounds: k must be non-negative");
  BoundReport r{n, delta, rank, k, eps, c, kind, 0, 0, ""};
  r.deterministic = detail::support_bound(kind, n, delta, rank, k, eps, c);
  double l = std::log2(n);
  double n_rand = kind == BoundKind::bipartite ? std::sqrt(l / 3) : std::cbrt(l / 4);
  r.randomized = detail::support_bound(kind, n_rand, delta, rank, k, eps, c);
  r.formula_tag = kind == BoundKind::bipartite ? "lift-bipartite" : "lift-hypergraph";
  return r;
}

// Largest m with 2^{3m^2} <= n (graph) or 2^{4m^3} <= n (hypergraph), given
// log2(n).
inline std::int64_t derand_argument(BoundKind kind, double log2_n) {
  if (log2_n < 0) throw PreconditionError("derand_translate: requires n >= 1");
  auto cost = [&](std::int64_t m) {
    double md = static_cast<double>(m);
    return kind == BoundKind::bipartite ? 3 * md * md : 4 * md * md * md;
  };
  double guess = kind == BoundKind::bipartite ? std::sqrt(log2_n / 3) : std::cbrt(log2_n / 4);
  std::int64_t m = static_cast<std::int64_t>(guess);
  while (m > 0 && cost(m) > log2_n + 1e-9) --m;
  while (cost(m + 1) <= log2_n + 1e-9) ++m;
  return m;
}

// Randomized lower bound at n from a deterministic complexity function D.
inline std::int64_t derand_translate(BoundKind kind, const std::function<std::int64_t(std::int64_t)>& det, double log2_n) {
  return det(derand_argument(kind, log2_n));
}

enum class SequenceKind { matching, ruling };

// floor((delta' - x) / y) - 2.
inline std::int64_t matching_sequence_length(std::int64_t delta_in, std::int64_t x, std::int64_t y) {
  if (y <= 0) throw PreconditionError("sequence_length: y must be positive");
  if (delta_in < x) throw PreconditionError("sequence_length: requires x <= delta'");
  return (delta_in - x) / y - 2;
}

// floor(eps * beta * (k / ac)^(1/beta)) with ac = (alpha + 1) c.
inline std::int64_t ruling_sequence_length(double eps, std::int64_t beta, double k, double ac) {
  if (beta <= 0 || ac <= 0) throw PreconditionError("sequence_length: beta and (alpha+1)c must be positive");
  double root = std::pow(k / ac, 1.0 / static_cast<double>(beta));
  double nearest = std::round(root);
  if (std::abs(root - nearest) < 1e-9) root = nearest;
  return detail::tolerant_floor(eps * static_cast<double>(beta) * root);
}

}  // namespace sre
