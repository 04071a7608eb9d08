#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "potts/error.hpp"
#include "potts/graph.hpp"

namespace potts {

/// Bags (each ascending) joined by tree edges, with a designated root bag.
struct TreeDecomposition {
  std::vector<std::vector<Vertex>> bags;
  std::vector<std::pair<int, int>> tree_edges;
  int root = 0;

  std::size_t bag_count() const noexcept { return bags.size(); }

  std::size_t n_max() const {
    std::size_t m = 0;
    for (const auto& b : bags) m = std::max(m, b.size());
    return m;
  }

  int width() const { return static_cast<int>(n_max()) - 1; }

  std::vector<std::vector<int>> tree_adjacency() const {
    std::vector<std::vector<int>> adj(bags.size());
    for (auto [a, b] : tree_edges) {
      adj[static_cast<std::size_t>(a)].push_back(b);
      adj[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    return adj;
  }

  friend bool operator==(const TreeDecomposition&, const TreeDecomposition&) = default;
};

struct DecompositionCheck {
  bool valid = true;
  std::string violation;

  explicit operator bool() const noexcept { return valid; }
};

/// Checks tree-ness and the three covering properties; reports the first violation.
inline DecompositionCheck verify_decomposition(const Graph& g, const TreeDecomposition& td) {
  auto fail = [](std::string why) { return DecompositionCheck{false, std::move(why)}; };
  const auto nb = td.bags.size();
  const int n = g.n_vertices();

  if (nb == 0) return n == 0 ? DecompositionCheck{} : fail("no bags");
  if (td.root < 0 || static_cast<std::size_t>(td.root) >= nb) return fail("root index out of range");
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& bag = td.bags[b];
    for (std::size_t k = 0; k < bag.size(); ++k) {
      if (bag[k] < 0 || bag[k] >= n) return fail("bag " + std::to_string(b) + " has an out-of-range vertex");
      if (k && bag[k - 1] >= bag[k]) return fail("bag " + std::to_string(b) + " is not strictly ascending");
    }
  }

  if (td.tree_edges.size() != nb - 1)
    return fail("tree has " + std::to_string(td.tree_edges.size()) + " edges for " + std::to_string(nb) + " bags");
  detail::UnionFind uf(nb);
  for (auto [a, b] : td.tree_edges) {
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= nb || static_cast<std::size_t>(b) >= nb)
      return fail("tree edge index out of range");
    if (!uf.unite(static_cast<std::size_t>(a), static_cast<std::size_t>(b)))
      return fail("tree edges contain a cycle at " + std::to_string(a) + "-" + std::to_string(b));
  }

  auto contains = [&](std::size_t b, Vertex x) {
    return std::binary_search(td.bags[b].begin(), td.bags[b].end(), x);
  };

  std::vector<std::vector<std::size_t>> holders(static_cast<std::size_t>(n));
  for (std::size_t b = 0; b < nb; ++b)
    for (Vertex x : td.bags[b]) holders[static_cast<std::size_t>(x)].push_back(b);

  for (Vertex x = 0; x < n; ++x)
    if (holders[static_cast<std::size_t>(x)].empty())
      return fail("property (i): vertex " + std::to_string(x) + " is in no bag");

  for (const Edge& e : g.edges()) {
    const auto& hu = holders[static_cast<std::size_t>(e.u)];
    const bool covered = std::any_of(hu.begin(), hu.end(), [&](std::size_t b) { return contains(b, e.v); });
    if (!covered)
      return fail("property (ii): edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") is in no bag");
  }

  const auto adj = td.tree_adjacency();
  for (Vertex x = 0; x < n; ++x) {
    const auto& hx = holders[static_cast<std::size_t>(x)];
    std::vector<bool> seen(nb, false);
    std::vector<std::size_t> stack{hx.front()};
    seen[hx.front()] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const auto b = stack.back();
      stack.pop_back();
      for (int c : adj[b]) {
        const auto cu = static_cast<std::size_t>(c);
        if (seen[cu] || !contains(cu, x)) continue;
        seen[cu] = true;
        ++reached;
        stack.push_back(cu);
      }
    }
    if (reached != hx.size())
      return fail("property (iii): bags containing vertex " + std::to_string(x) + " are not connected");
  }
  return {};
}

namespace detail {

// Repeatedly contracts tree edges whose one side is a subset of the other,
// keeping the larger bag. Bag order among survivors is preserved.
inline TreeDecomposition absorb_subset_bags(TreeDecomposition td) {
  auto is_subset = [](const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  std::vector<bool> alive(td.bags.size(), true);
  std::vector<std::set<int>> adj(td.bags.size());
  for (auto [a, b] : td.tree_edges) {
    adj[static_cast<std::size_t>(a)].insert(b);
    adj[static_cast<std::size_t>(b)].insert(a);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < td.bags.size(); ++a) {
      if (!alive[a]) continue;
      for (int b : adj[a]) {
        const auto bu = static_cast<std::size_t>(b);
        if (!is_subset(td.bags[a], td.bags[bu])) continue;
        // Contract a into b.
        for (int c : adj[a]) {
          if (c == b) continue;
          adj[static_cast<std::size_t>(c)].erase(static_cast<int>(a));
          adj[static_cast<std::size_t>(c)].insert(b);
          adj[bu].insert(c);
        }
        adj[bu].erase(static_cast<int>(a));
        adj[a].clear();
        alive[a] = false;
        if (td.root == static_cast<int>(a)) td.root = b;
        changed = true;
        break;
      }
    }
  }
  std::vector<int> index(td.bags.size(), -1);
  TreeDecomposition out;
  for (std::size_t a = 0; a < td.bags.size(); ++a) {
    if (!alive[a]) continue;
    index[a] = static_cast<int>(out.bags.size());
    out.bags.push_back(std::move(td.bags[a]));
  }
  for (std::size_t a = 0; a < adj.size(); ++a)
    for (int b : adj[a])
      if (static_cast<int>(a) < b) out.tree_edges.emplace_back(index[a], index[static_cast<std::size_t>(b)]);
  std::sort(out.tree_edges.begin(), out.tree_edges.end());
  out.root = index[static_cast<std::size_t>(td.root)];
  return out;
}

struct Elimination {
  std::vector<Vertex> order;
  // Neighbourhood of each vertex at the moment it was eliminated (ascending).
  std::vector<std::vector<Vertex>> neighbourhood;
};

// Min-fill elimination; ties broken by smaller current degree, then smaller id.
inline Elimination greedy_fill_in_elimination(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.n_vertices());
  std::vector<std::set<Vertex>> adj(n);
  for (const Edge& e : g.edges()) {
    adj[static_cast<std::size_t>(e.u)].insert(e.v);
    adj[static_cast<std::size_t>(e.v)].insert(e.u);
  }
  std::vector<bool> gone(n, false);
  Elimination out;
  out.neighbourhood.resize(n);

  auto fill_of = [&](std::size_t x) {
    std::size_t missing = 0;
    const auto& nb = adj[x];
    for (auto i = nb.begin(); i != nb.end(); ++i)
      for (auto j = std::next(i); j != nb.end(); ++j)
        if (!adj[static_cast<std::size_t>(*i)].count(*j)) ++missing;
    return missing;
  };

  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    std::size_t best_fill = 0, best_deg = 0;
    for (std::size_t x = 0; x < n; ++x) {
      if (gone[x]) continue;
      const std::size_t f = fill_of(x);
      const std::size_t d = adj[x].size();
      if (best == n || f < best_fill || (f == best_fill && d < best_deg)) {
        best = x;
        best_fill = f;
        best_deg = d;
      }
    }
    const auto nb = std::vector<Vertex>(adj[best].begin(), adj[best].end());
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        adj[static_cast<std::size_t>(nb[i])].insert(nb[j]);
        adj[static_cast<std::size_t>(nb[j])].insert(nb[i]);
      }
    for (Vertex y : nb) adj[static_cast<std::size_t>(y)].erase(static_cast<Vertex>(best));
    adj[best].clear();
    gone[best] = true;
    out.order.push_back(static_cast<Vertex>(best));
    out.neighbourhood[best] = nb;
  }
  return out;
}

}  // namespace detail

/// The min-fill elimination ordering used by greedy_fill_in.
inline std::vector<Vertex> greedy_fill_in_order(const Graph& g) {
  return detail::greedy_fill_in_elimination(g).order;
}

/// GreedyFillIn tree decomposition of a connected graph.
///
/// The bag of an eliminated vertex x is {x} together with its neighbours at
/// elimination time. It hangs below the bag of whichever of those neighbours
/// is eliminated next. Bags contained in an adjacent bag are then absorbed.
inline TreeDecomposition greedy_fill_in(const Graph& g) {
  if (g.n_vertices() == 0) return {};
  if (!is_connected(g)) throw InputError("greedy_fill_in requires a connected graph");

  const auto elim = detail::greedy_fill_in_elimination(g);
  const auto n = elim.order.size();
  std::vector<std::size_t> rank(n);
  for (std::size_t t = 0; t < n; ++t) rank[static_cast<std::size_t>(elim.order[t])] = t;

  TreeDecomposition td;
  td.bags.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const Vertex x = elim.order[t];
    auto bag = elim.neighbourhood[static_cast<std::size_t>(x)];
    bag.push_back(x);
    std::sort(bag.begin(), bag.end());
    td.bags[t] = std::move(bag);

    const auto& nb = elim.neighbourhood[static_cast<std::size_t>(x)];
    if (nb.empty()) continue;
    const Vertex next = *std::min_element(nb.begin(), nb.end(), [&](Vertex a, Vertex b) {
      return rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)];
    });
    td.tree_edges.emplace_back(static_cast<int>(t), static_cast<int>(rank[static_cast<std::size_t>(next)]));
  }
  td.root = static_cast<int>(n - 1);
  return detail::absorb_subset_bags(std::move(td));
}

/// Time-sliced path decomposition: processing v_t, the bag holds v_t and every
/// unprocessed vertex adjacent to an already processed one (or to v_t).
inline TreeDecomposition path_decomposition(const Graph& g, std::span<const Vertex> order) {
  const auto n = static_cast<std::size_t>(g.n_vertices());
  if (order.size() != n) throw InputError("vertex order is not a permutation");
  std::vector<bool> seen(n, false);
  for (Vertex x : order) {
    if (x < 0 || static_cast<std::size_t>(x) >= n || seen[static_cast<std::size_t>(x)])
      throw InputError("vertex order is not a permutation");
    seen[static_cast<std::size_t>(x)] = true;
  }

  const auto adj = g.adjacency();
  std::vector<bool> processed(n, false), active(n, false);
  TreeDecomposition td;
  for (std::size_t t = 0; t < n; ++t) {
    const Vertex x = order[t];
    for (Vertex y : adj[static_cast<std::size_t>(x)])
      if (!processed[static_cast<std::size_t>(y)]) active[static_cast<std::size_t>(y)] = true;
    std::vector<Vertex> bag{x};
    for (std::size_t y = 0; y < n; ++y)
      if (active[y] && !processed[y] && static_cast<Vertex>(y) != x) bag.push_back(static_cast<Vertex>(y));
    std::sort(bag.begin(), bag.end());
    td.bags.push_back(std::move(bag));
    processed[static_cast<std::size_t>(x)] = true;
    active[static_cast<std::size_t>(x)] = false;
    if (t) td.tree_edges.emplace_back(static_cast<int>(t - 1), static_cast<int>(t));
  }
  td.root = n ? static_cast<int>(n - 1) : 0;
  return td;
}

inline TreeDecomposition path_decomposition(const Graph& g) {
  return path_decomposition(g, greedy_fill_in_order(g));
}

struct DecomposeOptions {
  bool path = false;
  // Processing order for path decompositions; GreedyFillIn order when empty.
  std::vector<Vertex> order;
};

/// Decomposition of an arbitrary (possibly disconnected) graph: each
/// component is decomposed on its own and the component trees are hung
/// below the first component's root.
inline TreeDecomposition decompose(const Graph& g, const DecomposeOptions& opt = {}) {
  if (opt.path) {
    if (!opt.order.empty()) return path_decomposition(g, opt.order);
    return path_decomposition(g);
  }
  if (g.n_vertices() == 0) return {};
  TreeDecomposition whole;
  for (const auto& comp : component_vertex_sets(g)) {
    const Graph sub = induced_subgraph(g, comp);
    TreeDecomposition part = greedy_fill_in(sub);
    const int offset = static_cast<int>(whole.bags.size());
    for (auto& bag : part.bags) {
      for (auto& x : bag) x = comp[static_cast<std::size_t>(x)];
      whole.bags.push_back(std::move(bag));
    }
    for (auto [a, b] : part.tree_edges) whole.tree_edges.emplace_back(a + offset, b + offset);
    if (offset == 0)
      whole.root = part.root;
    else
      whole.tree_edges.emplace_back(whole.root, part.root + offset);
  }
  return whole;
}

// ---------------------------------------------------------------------------
// Text format:
//   B n_max
//   <B lines: bag vertex ids>
//   <B-1 lines: a b>
//   root r
// `#` lines are comments. A trailing `estimate X` line is accepted and ignored.

inline std::string format_decomposition(const TreeDecomposition& td) {
  std::ostringstream out;
  out << td.bags.size() << ' ' << td.n_max() << '\n';
  for (const auto& bag : td.bags) {
    for (std::size_t k = 0; k < bag.size(); ++k) out << (k ? " " : "") << bag[k];
    out << '\n';
  }
  for (auto [a, b] : td.tree_edges) out << a << ' ' << b << '\n';
  out << "root " << td.root << '\n';
  return out.str();
}

inline TreeDecomposition parse_decomposition(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&](bool allow_blank) -> std::optional<std::string> {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first != std::string::npos && line[first] == '#') continue;
      if (first == std::string::npos && !allow_blank) continue;
      return line;
    }
    return std::nullopt;
  };
  auto ints = [&](const std::string& s) {
    std::istringstream ls(s);
    std::vector<long long> v;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        v.push_back(std::stoll(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError(line_no, "not an integer: '" + tok + "'");
      }
    }
    return v;
  };

  auto header = next_line(false);
  if (!header) throw ParseError(line_no + 1, "missing decomposition header");
  const auto h = ints(*header);
  if (h.size() != 2 || h[0] < 0 || h[1] < 0) throw ParseError(line_no, "malformed header, expected `B n_max`");
  const auto nb = static_cast<std::size_t>(h[0]);

  TreeDecomposition td;
  for (std::size_t b = 0; b < nb; ++b) {
    auto l = next_line(true);
    if (!l) throw ParseError(line_no + 1, "missing bag line");
    std::vector<Vertex> bag;
    for (long long x : ints(*l)) {
      if (x < 0) throw ParseError(line_no, "negative vertex id");
      bag.push_back(static_cast<Vertex>(x));
    }
    std::sort(bag.begin(), bag.end());
    if (std::adjacent_find(bag.begin(), bag.end()) != bag.end()) throw ParseError(line_no, "repeated vertex in bag");
    td.bags.push_back(std::move(bag));
  }
  if (td.n_max() != static_cast<std::size_t>(h[1])) throw ParseError(line_no, "n_max does not match the bags");
  for (std::size_t k = 0; k + 1 < nb; ++k) {
    auto l = next_line(false);
    if (!l) throw ParseError(line_no + 1, "missing tree edge line");
    const auto e = ints(*l);
    if (e.size() != 2) throw ParseError(line_no, "malformed tree edge, expected `a b`");
    td.tree_edges.emplace_back(static_cast<int>(e[0]), static_cast<int>(e[1]));
  }
  auto r = next_line(false);
  if (!r) throw ParseError(line_no + 1, "missing `root r` line");
  {
    std::istringstream ls(*r);
    std::string kw;
    long long root = -1;
    std::string extra;
    if (!(ls >> kw >> root) || kw != "root" || (ls >> extra)) throw ParseError(line_no, "malformed root line");
    td.root = static_cast<int>(root);
  }
  while (auto l = next_line(false)) {
    std::istringstream ls(*l);
    std::string kw;
    ls >> kw;
    if (kw != "estimate") throw ParseError(line_no, "unexpected content after root line");
  }
  return td;
}

inline TreeDecomposition parse_decomposition(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_decomposition(in);
}

}  // namespace potts
