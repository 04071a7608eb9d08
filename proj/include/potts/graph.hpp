#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "potts/detail/union_find.hpp"
#include "potts/error.hpp"

namespace potts {

using Vertex = int;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  // Endpoints in ascending order; the edge is unordered.
  Edge normalized() const { return u < v ? Edge{u, v} : Edge{v, u}; }

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph on vertices 0..n-1.
///
/// Edges keep the order and orientation they were given in, so a graph read
/// from a file serialises back to the same text. Self-loops, parallel edges
/// and out-of-range endpoints are rejected by the constructor.
class Graph {
 public:
  Graph() = default;

  Graph(int n_vertices, std::vector<Edge> edges)
      : n_(n_vertices), edges_(std::move(edges)) {
    if (n_ < 0) throw InputError("negative vertex count");
    std::set<Edge> seen;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const Edge& e = edges_[k];
      if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
        throw InputError("edge " + std::to_string(k) + " has an endpoint out of range");
      if (e.u == e.v) throw InputError("edge " + std::to_string(k) + " is a self-loop");
      if (!seen.insert(e.normalized()).second)
        throw InputError("edge " + std::to_string(k) + " duplicates an earlier edge");
    }
  }

  int n_vertices() const noexcept { return n_; }
  std::size_t n_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  // Sorted neighbour lists.
  std::vector<std::vector<Vertex>> adjacency() const {
    std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(n_));
    for (const Edge& e : edges_) {
      adj[static_cast<std::size_t>(e.u)].push_back(e.v);
      adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    return adj;
  }

  bool has_edge(Vertex a, Vertex b) const {
    const Edge key = Edge{a, b}.normalized();
    return std::any_of(edges_.begin(), edges_.end(),
                       [&](const Edge& e) { return e.normalized() == key; });
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

namespace detail {

inline bool is_comment_or_blank(std::string_view line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string_view::npos || line[first] == '#';
}

// Reads exactly `count` whitespace-separated integers from a line, nothing else.
inline bool read_ints(std::string_view line, std::span<long long> out) {
  std::istringstream in{std::string(line)};
  for (auto& x : out)
    if (!(in >> x)) return false;
  std::string rest;
  return !(in >> rest);
}

}  // namespace detail

/// Parses the edge-list format: a `N M` header, then M lines `u v`.
/// Lines starting with `#` and blank lines are ignored.
inline Graph parse_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  long long n = -1, m = -1;
  std::vector<Edge> edges;
  std::set<Edge> seen;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::is_comment_or_blank(line)) continue;

    if (n < 0) {
      long long hdr[2];
      if (!detail::read_ints(line, hdr) || hdr[0] < 0 || hdr[1] < 0)
        throw ParseError(line_no, "malformed header, expected `N M`");
      if (hdr[0] > (1LL << 30)) throw ParseError(line_no, "vertex count too large");
      n = hdr[0];
      m = hdr[1];
      continue;
    }

    if (static_cast<long long>(edges.size()) == m)
      throw ParseError(line_no, "more edge lines than declared in the header");
    long long uv[2];
    if (!detail::read_ints(line, uv)) throw ParseError(line_no, "malformed edge line, expected `u v`");
    if (uv[0] < 0 || uv[0] >= n || uv[1] < 0 || uv[1] >= n)
      throw ParseError(line_no, "endpoint out of range [0, " + std::to_string(n) + ")");
    if (uv[0] == uv[1]) throw ParseError(line_no, "self-loop on vertex " + std::to_string(uv[0]));
    const Edge e{static_cast<Vertex>(uv[0]), static_cast<Vertex>(uv[1])};
    if (!seen.insert(e.normalized()).second)
      throw ParseError(line_no, "duplicate edge " + std::to_string(uv[0]) + " " + std::to_string(uv[1]));
    edges.push_back(e);
  }

  if (n < 0) throw ParseError(line_no + 1, "missing header");
  if (static_cast<long long>(edges.size()) != m)
    throw ParseError(line_no + 1, "expected " + std::to_string(m) + " edges, found " +
                                      std::to_string(edges.size()));
  return Graph(static_cast<int>(n), std::move(edges));
}

inline Graph parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_graph(in);
}

inline std::string serialize_graph(const Graph& g) {
  std::ostringstream out;
  out << g.n_vertices() << ' ' << g.n_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  return out.str();
}

/// Number of connected components of (V, active_edges), isolated vertices included.
inline std::size_t connected_components(const Graph& g, std::span<const Edge> active_edges) {
  detail::UnionFind uf(static_cast<std::size_t>(g.n_vertices()));
  for (const Edge& e : active_edges) {
    if (e.u < 0 || e.u >= g.n_vertices() || e.v < 0 || e.v >= g.n_vertices())
      throw InputError("active edge endpoint out of range");
    uf.unite(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v));
  }
  return uf.set_count();
}

inline std::size_t connected_components(const Graph& g) { return connected_components(g, g.edges()); }

inline bool is_connected(const Graph& g) {
  return g.n_vertices() <= 1 || connected_components(g) == 1;
}

/// Vertex sets of the connected components, each ascending, ordered by smallest vertex.
inline std::vector<std::vector<Vertex>> component_vertex_sets(const Graph& g) {
  detail::UnionFind uf(static_cast<std::size_t>(g.n_vertices()));
  for (const Edge& e : g.edges()) uf.unite(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v));
  std::vector<std::vector<Vertex>> out;
  std::vector<int> slot(static_cast<std::size_t>(g.n_vertices()), -1);
  for (Vertex x = 0; x < g.n_vertices(); ++x) {
    const auto root = uf.find(static_cast<std::size_t>(x));
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(slot[root])].push_back(x);
  }
  return out;
}

/// Subgraph induced by `vertices` (ascending), relabelled to 0..k-1 in that order.
inline Graph induced_subgraph(const Graph& g, std::span<const Vertex> vertices) {
  std::vector<int> index(static_cast<std::size_t>(g.n_vertices()), -1);
  for (std::size_t k = 0; k < vertices.size(); ++k) index[static_cast<std::size_t>(vertices[k])] = static_cast<int>(k);
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    const int a = index[static_cast<std::size_t>(e.u)];
    const int b = index[static_cast<std::size_t>(e.v)];
    if (a >= 0 && b >= 0) edges.push_back({a, b});
  }
  return Graph(static_cast<int>(vertices.size()), std::move(edges));
}

/// Connected planar graph from a random stacked triangulation with edges thinned out.
///
/// Each new vertex is placed into a uniformly chosen face of the current
/// triangulation. Every edge is then dropped with probability 1/3, and
/// edges of a BFS spanning tree of the triangulation are put back wherever
/// they reconnect two components. The ensemble is not uniform over planar
/// graphs. Randomness comes only from mt19937_64, so output is identical
/// across platforms for a given seed.
inline Graph random_planar_graph(int n, std::uint64_t seed) {
  if (n < 3) throw InputError("random_planar_graph needs n >= 3");
  std::mt19937_64 rng(seed);

  struct Face {
    Vertex a, b, c;
  };
  std::vector<Face> faces{{0, 1, 2}, {0, 1, 2}};
  std::set<Edge> tri{{0, 1}, {0, 2}, {1, 2}};
  for (Vertex k = 3; k < n; ++k) {
    const std::size_t pick = static_cast<std::size_t>(rng() % faces.size());
    const Face f = faces[pick];
    tri.insert(Edge{f.a, k}.normalized());
    tri.insert(Edge{f.b, k}.normalized());
    tri.insert(Edge{f.c, k}.normalized());
    faces[pick] = {f.a, f.b, k};
    faces.push_back({f.b, f.c, k});
    faces.push_back({f.c, f.a, k});
  }

  std::vector<Edge> kept;
  detail::UnionFind uf(static_cast<std::size_t>(n));
  for (const Edge& e : tri) {
    if (rng() % 3 == 0) continue;
    kept.push_back(e);
    uf.unite(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v));
  }

  if (uf.set_count() > 1) {
    std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(n));
    for (const Edge& e : tri) {
      adj[static_cast<std::size_t>(e.u)].push_back(e.v);
      adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<Vertex> queue{0};
    seen[0] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex x = queue[head];
      for (Vertex y : adj[static_cast<std::size_t>(x)]) {
        if (seen[static_cast<std::size_t>(y)]) continue;
        seen[static_cast<std::size_t>(y)] = true;
        queue.push_back(y);
        if (uf.unite(static_cast<std::size_t>(x), static_cast<std::size_t>(y)))
          kept.push_back(Edge{x, y}.normalized());
      }
    }
  }
  std::sort(kept.begin(), kept.end());
  return Graph(n, std::move(kept));
}

}  // namespace potts
