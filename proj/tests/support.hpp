#pragma once

// Test-side references. None of these call into the engine or the
// decomposition code; they are deliberately naive.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "potts/graph.hpp"
#include "potts/polynomial.hpp"

namespace potts::testkit {

inline Graph triangle() { return Graph(3, {{0, 1}, {1, 2}, {0, 2}}); }

// The nine-vertex planar example, vertices renumbered from 0.
inline Graph example_graph() {
  return Graph(9, {{0, 2}, {0, 1}, {1, 3}, {3, 7}, {7, 8}, {8, 4}, {4, 6}, {6, 5}, {5, 2}, {2, 3}, {3, 4}, {4, 2}});
}

inline Graph path_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph(n, std::move(e));
}

inline Graph cycle_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return Graph(n, std::move(e));
}

inline Graph complete_graph(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j});
  return Graph(n, std::move(e));
}

inline Graph grid_graph(int w, int h) {
  std::vector<Edge> e;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int id = y * w + x;
      if (x + 1 < w) e.push_back({id, id + 1});
      if (y + 1 < h) e.push_back({id, id + w});
    }
  return Graph(w * h, std::move(e));
}

// Uniform random labelled tree via a random parent for each vertex.
inline Graph random_tree(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Edge> e;
  for (int i = 1; i < n; ++i) e.push_back({static_cast<int>(rng() % static_cast<std::uint64_t>(i)), i});
  return Graph(n, std::move(e));
}

// G(n, m): m distinct edges chosen uniformly, possibly disconnected.
inline Graph random_graph(int n, std::size_t m, std::uint64_t seed) {
  std::vector<Edge> all;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) all.push_back({i, j});
  std::mt19937_64 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(m, all.size()));
  return Graph(n, std::move(all));
}

inline bool connected_by_bfs(int n, const std::vector<Edge>& edges) {
  if (n == 0) return true;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (auto e : edges) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (int y : adj[static_cast<std::size_t>(x)])
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = true;
        ++count;
        stack.push_back(y);
      }
  }
  return count == n;
}

// Every connected labelled graph on 1..max_n vertices.
inline std::vector<Graph> all_connected_graphs(int max_n) {
  std::vector<Graph> out;
  for (int n = 1; n <= max_n; ++n) {
    std::vector<Edge> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
      std::vector<Edge> e;
      for (std::size_t k = 0; k < pairs.size(); ++k)
        if (mask >> k & 1) e.push_back(pairs[k]);
      if (connected_by_bfs(n, e)) out.emplace_back(n, std::move(e));
    }
  }
  return out;
}

// Exact treewidth by the subset recurrence
//   TW(S) = min_{v in S} max(TW(S - v), |Q(S - v, v)|)
// where Q(S, v) is the set of vertices outside S + v reachable from v
// through S. Exponential; fine up to ~16 vertices.
inline int exact_treewidth(const Graph& g) {
  const int n = g.n_vertices();
  if (n == 0) return -1;
  std::vector<std::uint32_t> nb(static_cast<std::size_t>(n), 0);
  for (auto e : g.edges()) {
    nb[static_cast<std::size_t>(e.u)] |= 1u << e.v;
    nb[static_cast<std::size_t>(e.v)] |= 1u << e.u;
  }
  auto q_size = [&](std::uint32_t s, int v) {
    std::uint32_t seen = 1u << v, frontier = 1u << v, out = 0;
    while (frontier) {
      const int x = __builtin_ctz(frontier);
      frontier &= frontier - 1;
      std::uint32_t next = nb[static_cast<std::size_t>(x)] & ~seen;
      seen |= next;
      out |= next & ~s;
      frontier |= next & s;
    }
    return __builtin_popcount(out);
  };
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  std::vector<int> tw(std::size_t{1} << n, n);
  tw[0] = -1;
  for (std::uint32_t s = 1; s <= full; ++s) {
    for (int v = 0; v < n; ++v) {
      if (!(s >> v & 1)) continue;
      const std::uint32_t rest = s & ~(1u << v);
      tw[s] = std::min(tw[s], std::max(tw[rest], q_size(rest, v)));
    }
  }
  return tw[full];
}

// Closed-form chromatic polynomials built with plain polynomial products.
inline IntPoly linear(long long a) { return IntPoly({BigInt(-a), BigInt(1)}); }  // Q - a

inline IntPoly pow(IntPoly base, int k) {
  IntPoly r = IntPoly::constant(1);
  for (int i = 0; i < k; ++i) r = r * base;
  return r;
}

inline IntPoly tree_chromatic(int n) { return linear(0) * pow(linear(1), n - 1); }

inline IntPoly cycle_chromatic(int n) {
  IntPoly sign = IntPoly::constant(n % 2 ? -1 : 1);
  return pow(linear(1), n) + sign * linear(1);
}

inline IntPoly complete_chromatic(int n) {
  IntPoly r = IntPoly::constant(1);
  for (int k = 0; k < n; ++k) r = r * linear(k);
  return r;
}

// Number of non-crossing set partitions of {0..n-1}, counted by enumerating
// all partitions and testing every pair of blocks for a crossing a<b<c<d
// with a,c in one block and b,d in another.
inline std::uint64_t count_noncrossing_partitions(int n) {
  std::uint64_t count = 0;
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int blocks) {
    if (i == n) {
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          for (int c = b + 1; c < n; ++c)
            for (int d = c + 1; d < n; ++d)
              if (label[a] == label[c] && label[b] == label[d] && label[a] != label[b]) return;
      ++count;
      return;
    }
    for (int l = 0; l <= blocks; ++l) {
      label[static_cast<std::size_t>(i)] = l;
      rec(i + 1, std::max(blocks, l + 1));
    }
  };
  rec(0, 0);
  return count;
}

inline std::uint64_t count_all_partitions(int n) {
  std::uint64_t count = 0;
  std::function<void(int, int)> rec = [&](int i, int blocks) {
    if (i == n) {
      ++count;
      return;
    }
    for (int l = 0; l <= blocks; ++l) rec(i + 1, std::max(blocks, l + 1));
  };
  rec(0, 0);
  return count;
}

}  // namespace potts::testkit
