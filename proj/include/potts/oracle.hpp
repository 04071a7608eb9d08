#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "potts/detail/union_find.hpp"
#include "potts/error.hpp"
#include "potts/graph.hpp"
#include "potts/weights.hpp"

// Brute-force references for the partition function and colourings. They
// share nothing with the transfer matrix beyond the coefficient rings.

namespace potts {

inline constexpr std::size_t kFkEdgeGuard = 24;
inline constexpr std::size_t kDelConEdgeGuard = 20;
inline constexpr double kColouringGuard = 1e8;

namespace oracle_detail {

template <class Ring>
typename Ring::value_type power_of_q(const Ring& ring, std::size_t k) {
  auto w = ring.one();
  for (std::size_t i = 0; i < k; ++i) ring.times_q(w);
  return w;
}

}  // namespace oracle_detail

/// Sum over all edge subsets A of v^|A| Q^k(A) (scaled by den(v)^{|E|-|A|}
/// for rational v, as in the engine).
template <class Ring>
typename Ring::value_type fk_brute_force(const Graph& g, const Ring& ring) {
  const std::size_t m = g.n_edges();
  if (m > kFkEdgeGuard) throw GuardError("fk_brute_force is limited to " + std::to_string(kFkEdgeGuard) + " edges");
  const auto n = static_cast<std::size_t>(g.n_vertices());

  // counts[a][k] = number of subsets with |A| = a and k(A) = k.
  std::vector<std::vector<std::uint64_t>> counts(m + 1, std::vector<std::uint64_t>(n + 1, 0));
  detail::UnionFind uf;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    uf.reset(n);
    std::size_t a = 0;
    for (std::size_t e = 0; e < m; ++e) {
      if (!(mask >> e & 1)) continue;
      ++a;
      uf.unite(static_cast<std::size_t>(g.edges()[e].u), static_cast<std::size_t>(g.edges()[e].v));
    }
    ++counts[a][uf.set_count()];
  }

  auto total = ring.zero();
  for (std::size_t a = 0; a <= m; ++a)
    for (std::size_t k = 0; k <= n; ++k) {
      if (!counts[a][k]) continue;
      auto w = oracle_detail::power_of_q(ring, k);
      for (std::size_t i = 0; i < a; ++i) ring.times_v(w);
      for (std::size_t i = a; i < m; ++i) ring.times_keep(w);
      ring.times_int(w, BigInt(counts[a][k]));
      Ring::add_to(total, w);
    }
  return total;
}

inline Weight fk_brute_force(const Graph& g, const ModeSpec& mode) {
  return with_ring(mode, [&](auto ring) { return ring.wrap(fk_brute_force(g, ring)); });
}

/// Number of proper q-colourings, by backtracking over vertices in id order.
inline std::uint64_t colouring_count(const Graph& g, int q) {
  if (q < 0) throw InputError("colour count must be nonnegative");
  const int n = g.n_vertices();
  if (std::pow(static_cast<double>(q), n) > kColouringGuard)
    throw GuardError("colouring_count is limited to q^N <= 1e8");
  if (n == 0) return 1;
  std::vector<std::vector<Vertex>> earlier(static_cast<std::size_t>(n));
  for (const Edge& e : g.edges()) {
    const auto [lo, hi] = std::minmax(e.u, e.v);
    earlier[static_cast<std::size_t>(hi)].push_back(lo);
  }
  std::vector<int> colour(static_cast<std::size_t>(n), -1);
  std::uint64_t count = 0;
  // Explicit stack over (vertex, next colour to try).
  Vertex x = 0;
  while (x >= 0) {
    auto& c = colour[static_cast<std::size_t>(x)];
    ++c;
    while (c < q && std::any_of(earlier[static_cast<std::size_t>(x)].begin(), earlier[static_cast<std::size_t>(x)].end(),
                                [&](Vertex y) { return colour[static_cast<std::size_t>(y)] == c; }))
      ++c;
    if (c >= q) {
      c = -1;
      --x;
    } else if (x == n - 1) {
      ++count;
    } else {
      ++x;
    }
  }
  return count;
}

/// Graph with edge multiplicities; the vertex count only tracks how many
/// vertices remain after contractions.
struct MultiGraph {
  int n_vertices = 0;
  std::map<Edge, int> multiplicity;  // keys normalised, u < v

  static MultiGraph from(const Graph& g) {
    MultiGraph m;
    m.n_vertices = g.n_vertices();
    for (const Edge& e : g.edges()) ++m.multiplicity[e.normalized()];
    return m;
  }

  std::size_t edge_count() const {
    std::size_t c = 0;
    for (const auto& [e, k] : multiplicity) c += static_cast<std::size_t>(k);
    return c;
  }
};

struct MinorOp {
  enum class Kind { remove, contract };
  Kind kind;
  Edge edge;
};

/// Deletes the whole parallel class of `op.edge`, or contracts it, merging the
/// larger endpoint into the smaller and adding up multiplicities of edges
/// that become parallel. Vertex ids are not compacted.
inline MultiGraph apply_minor(const MultiGraph& g, const MinorOp& op) {
  const Edge e = op.edge.normalized();
  if (!g.multiplicity.count(e)) throw InputError("minor operation on an edge not in the graph");
  MultiGraph out;
  out.n_vertices = g.n_vertices;
  if (op.kind == MinorOp::Kind::remove) {
    out.multiplicity = g.multiplicity;
    out.multiplicity.erase(e);
    return out;
  }
  out.n_vertices = g.n_vertices - 1;
  for (const auto& [f, k] : g.multiplicity) {
    if (f == e) continue;
    Edge h{f.u == e.v ? e.u : f.u, f.v == e.v ? e.u : f.v};
    out.multiplicity[h.normalized()] += k;
  }
  return out;
}

/// Simple-graph contraction: merges the endpoints of `e` and drops the
/// parallels that appear. Vertices above the removed one shift down by one.
inline Graph contract_edge(const Graph& g, const Edge& e) {
  const Edge f = e.normalized();
  if (!g.has_edge(f.u, f.v)) throw InputError("contract_edge: edge not in graph");
  auto relabel = [&](Vertex x) {
    if (x == f.v) x = f.u;
    return x > f.v ? x - 1 : x;
  };
  std::vector<Edge> edges;
  std::set<Edge> seen;
  for (const Edge& h : g.edges()) {
    Edge r{relabel(h.u), relabel(h.v)};
    if (r.u == r.v) continue;
    if (seen.insert(r.normalized()).second) edges.push_back(r);
  }
  return Graph(g.n_vertices() - 1, std::move(edges));
}

inline Graph delete_edge(const Graph& g, const Edge& e) {
  std::vector<Edge> edges;
  for (const Edge& h : g.edges())
    if (h.normalized() != e.normalized()) edges.push_back(h);
  if (edges.size() == g.n_edges()) throw InputError("delete_edge: edge not in graph");
  return Graph(g.n_vertices(), std::move(edges));
}

namespace oracle_detail {

template <class Ring>
typename Ring::value_type delcon(const MultiGraph& g, const Ring& ring) {
  if (g.multiplicity.empty()) return power_of_q(ring, static_cast<std::size_t>(g.n_vertices));
  const auto [e, m] = *g.multiplicity.begin();

  // A class of m parallel edges acts like one edge of weight (1+v)^m - 1;
  // with rational v the factors are keep^m and (keep+v)^m - keep^m.
  auto keep_m = ring.one();
  auto both_m = ring.one();
  for (int i = 0; i < m; ++i) {
    ring.times_keep(keep_m);
    auto with_v = both_m;
    ring.times_v(with_v);
    ring.times_keep(both_m);
    Ring::add_to(both_m, with_v);
  }
  const auto join_factor = Ring::sub(both_m, keep_m);

  auto removed = delcon(apply_minor(g, {MinorOp::Kind::remove, e}), ring);
  auto contracted = delcon(apply_minor(g, {MinorOp::Kind::contract, e}), ring);
  auto total = Ring::mul(keep_m, removed);
  Ring::add_to(total, Ring::mul(join_factor, contracted));
  return total;
}

}  // namespace oracle_detail

/// Z_G = Z_{G-e} + v Z_{G/e}, recursing on parallel classes.
template <class Ring>
typename Ring::value_type deletion_contraction(const Graph& g, const Ring& ring) {
  if (g.n_edges() > kDelConEdgeGuard)
    throw GuardError("deletion_contraction is limited to " + std::to_string(kDelConEdgeGuard) + " edges");
  return oracle_detail::delcon(MultiGraph::from(g), ring);
}

inline Weight deletion_contraction(const Graph& g, const ModeSpec& mode) {
  return with_ring(mode, [&](auto ring) { return ring.wrap(deletion_contraction(g, ring)); });
}

}  // namespace potts
