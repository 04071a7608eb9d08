#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "potts/bigint.hpp"
#include "potts/error.hpp"
#include "potts/graph.hpp"
#include "potts/partition.hpp"
#include "potts/treedecomp.hpp"

namespace potts {

/// What the transfer matrix does at one bag.
///
/// Execution order is: fuse the daughters' states in `fuse_order`, insert
/// `insert_set` as singletons, apply `edge_plan` edge by edge, then delete
/// `delete_set` before handing the state to the parent.
/// `prune_lookahead[k]` lists the edges still ahead once k edges of the plan
/// are done: the rest of this bag's plan plus the parent's whole plan.
struct BagPlan {
  int bag = 0;
  int parent = -1;
  std::vector<int> fuse_order;
  std::vector<Vertex> insert_set;
  std::vector<Edge> edge_plan;
  std::vector<Vertex> delete_set;
  std::vector<std::vector<Edge>> prune_lookahead;
};

struct Schedule {
  std::vector<BagPlan> steps;  // post-order, root last
  int root = 0;
};

/// Fusion work for one parent: sum over l of C(|D_1..D_{l-1} ∩ P|) * C(|D_l ∩ P|).
inline BigInt fusion_cost(const std::vector<Vertex>& parent, const std::vector<std::vector<Vertex>>& daughters,
                          const std::vector<std::size_t>& order) {
  std::vector<Vertex> acc;
  BigInt total = 0;
  for (auto idx : order) {
    std::vector<Vertex> part;
    std::set_intersection(daughters[idx].begin(), daughters[idx].end(), parent.begin(), parent.end(),
                          std::back_inserter(part));
    total += catalan(static_cast<unsigned>(acc.size())) * catalan(static_cast<unsigned>(part.size()));
    std::vector<Vertex> merged;
    std::set_union(acc.begin(), acc.end(), part.begin(), part.end(), std::back_inserter(merged));
    acc = std::move(merged);
  }
  return total;
}

/// Order of successive fusions minimising fusion_cost: exhaustive over all
/// orderings for up to 8 daughters (first minimum in lexicographic order
/// wins), ascending |D ∩ P| beyond that.
inline std::vector<std::size_t> fusion_order_optimise(const std::vector<Vertex>& parent,
                                                      const std::vector<std::vector<Vertex>>& daughters) {
  std::vector<std::size_t> order(daughters.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (daughters.size() <= 1) return order;

  if (daughters.size() > 8) {
    std::vector<std::size_t> overlap(daughters.size());
    for (std::size_t k = 0; k < daughters.size(); ++k) {
      std::vector<Vertex> part;
      std::set_intersection(daughters[k].begin(), daughters[k].end(), parent.begin(), parent.end(),
                            std::back_inserter(part));
      overlap[k] = part.size();
    }
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return overlap[a] < overlap[b]; });
    return order;
  }

  std::vector<std::size_t> best = order;
  BigInt best_cost = fusion_cost(parent, daughters, order);
  while (std::next_permutation(order.begin(), order.end())) {
    BigInt c = fusion_cost(parent, daughters, order);
    if (c < best_cost) {
      best_cost = std::move(c);
      best = order;
    }
  }
  return best;
}

namespace detail {

struct Rooted {
  std::vector<int> parent;
  std::vector<std::vector<int>> children;  // in fusion order
  std::vector<int> post_order;
};

inline Rooted root_tree(const TreeDecomposition& td, int root) {
  const auto nb = td.bags.size();
  const auto adj = td.tree_adjacency();
  Rooted r;
  r.parent.assign(nb, -1);
  r.children.resize(nb);
  std::vector<int> bfs{root};
  std::vector<bool> seen(nb, false);
  seen[static_cast<std::size_t>(root)] = true;
  for (std::size_t h = 0; h < bfs.size(); ++h) {
    const int b = bfs[h];
    std::vector<int> kids;
    for (int c : adj[static_cast<std::size_t>(b)])
      if (!seen[static_cast<std::size_t>(c)]) {
        seen[static_cast<std::size_t>(c)] = true;
        r.parent[static_cast<std::size_t>(c)] = b;
        kids.push_back(c);
        bfs.push_back(c);
      }
    std::vector<std::vector<Vertex>> daughter_bags;
    for (int c : kids) daughter_bags.push_back(td.bags[static_cast<std::size_t>(c)]);
    for (auto k : fusion_order_optimise(td.bags[static_cast<std::size_t>(b)], daughter_bags))
      r.children[static_cast<std::size_t>(b)].push_back(kids[k]);
  }
  // Iterative post-order: children in fusion order, then the bag itself.
  std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
  while (!stack.empty()) {
    auto& [b, next] = stack.back();
    const auto& kids = r.children[static_cast<std::size_t>(b)];
    if (next < kids.size()) {
      const int c = kids[next++];
      stack.emplace_back(c, 0);
    } else {
      r.post_order.push_back(b);
      stack.pop_back();
    }
  }
  return r;
}

inline std::size_t fusion_count(const Rooted& r) {
  std::size_t f = 0;
  for (const auto& kids : r.children)
    if (kids.size() > 1) f += kids.size() - 1;
  return f;
}

}  // namespace detail

/// Number of binary fusions, F = sum over bags of (daughters - 1).
inline std::size_t fusion_count(const Schedule& s) {
  std::size_t f = 0;
  for (const auto& step : s.steps)
    if (step.fuse_order.size() > 1) f += step.fuse_order.size() - 1;
  return f;
}

/// Worst-case work estimate (N + M + B) S n_max + F S^2 n_max, where
/// S = count_states(n_max, planar).
inline BigInt estimate_cost(std::size_t n_vertices, std::size_t n_edges, std::size_t bags, std::size_t n_max,
                            std::size_t fusions, bool planar) {
  const BigInt s = count_states(static_cast<unsigned>(n_max), planar);
  return BigInt(n_vertices + n_edges + bags) * s * n_max + BigInt(fusions) * s * s * n_max;
}

inline BigInt estimate_cost(const Graph& g, const TreeDecomposition& td, const Schedule& s, bool planar) {
  return estimate_cost(static_cast<std::size_t>(g.n_vertices()), g.n_edges(), td.bags.size(), td.n_max(),
                       fusion_count(s), planar);
}

inline constexpr int kAutoRoot = -1;

namespace detail {

inline Schedule schedule_for_root(const Graph& g, const TreeDecomposition& td, int root) {
  const Rooted r = root_tree(td, root);
  Schedule s;
  s.root = root;

  std::vector<bool> assigned(g.n_edges(), false);
  std::vector<std::size_t> step_of(td.bags.size(), 0);
  for (int b : r.post_order) {
    const auto bu = static_cast<std::size_t>(b);
    const auto& bag = td.bags[bu];
    BagPlan plan;
    plan.bag = b;
    plan.parent = r.parent[bu];
    plan.fuse_order = r.children[bu];

    std::vector<Vertex> inherited;
    for (int c : plan.fuse_order) {
      const auto& cb = td.bags[static_cast<std::size_t>(c)];
      std::vector<Vertex> part, merged;
      std::set_intersection(cb.begin(), cb.end(), bag.begin(), bag.end(), std::back_inserter(part));
      std::set_union(inherited.begin(), inherited.end(), part.begin(), part.end(), std::back_inserter(merged));
      inherited = std::move(merged);
    }
    std::set_difference(bag.begin(), bag.end(), inherited.begin(), inherited.end(),
                        std::back_inserter(plan.insert_set));

    for (std::size_t k = 0; k < g.n_edges(); ++k) {
      if (assigned[k]) continue;
      const Edge& e = g.edges()[k];
      if (std::binary_search(bag.begin(), bag.end(), e.u) && std::binary_search(bag.begin(), bag.end(), e.v)) {
        assigned[k] = true;
        plan.edge_plan.push_back(e);
      }
    }

    if (plan.parent < 0) {
      plan.delete_set = bag;
    } else {
      const auto& pb = td.bags[static_cast<std::size_t>(plan.parent)];
      std::set_difference(bag.begin(), bag.end(), pb.begin(), pb.end(), std::back_inserter(plan.delete_set));
    }
    step_of[bu] = s.steps.size();
    s.steps.push_back(std::move(plan));
  }

  for (auto& plan : s.steps) {
    const std::vector<Edge>* parent_edges = nullptr;
    if (plan.parent >= 0) parent_edges = &s.steps[step_of[static_cast<std::size_t>(plan.parent)]].edge_plan;
    plan.prune_lookahead.resize(plan.edge_plan.size() + 1);
    for (std::size_t k = 0; k <= plan.edge_plan.size(); ++k) {
      auto& ahead = plan.prune_lookahead[k];
      ahead.assign(plan.edge_plan.begin() + static_cast<std::ptrdiff_t>(k), plan.edge_plan.end());
      if (parent_edges) ahead.insert(ahead.end(), parent_edges->begin(), parent_edges->end());
    }
  }
  return s;
}

inline BigInt total_fusion_cost(const TreeDecomposition& td, const Schedule& s) {
  BigInt total = 0;
  for (const auto& step : s.steps) {
    if (step.fuse_order.empty()) continue;
    std::vector<std::vector<Vertex>> daughters;
    std::vector<std::size_t> order;
    for (int c : step.fuse_order) {
      order.push_back(daughters.size());
      daughters.push_back(td.bags[static_cast<std::size_t>(c)]);
    }
    total += fusion_cost(td.bags[static_cast<std::size_t>(step.bag)], daughters, order);
  }
  return total;
}

}  // namespace detail

/// Builds the per-bag plan. Each edge goes to the first bag in post-order
/// that holds both endpoints; each vertex is deleted at the topmost bag that
/// holds it. With `kAutoRoot`, every bag is tried as root and the one with
/// the lowest estimate_cost wins (ties: lower total fusion cost, then lower
/// bag index).
inline Schedule build_schedule(const Graph& g, const TreeDecomposition& td, int root_choice = kAutoRoot,
                               bool planar = true) {
  if (auto check = verify_decomposition(g, td); !check)
    throw InputError("invalid tree decomposition: " + check.violation);
  if (td.bags.empty()) return {};
  if (root_choice != kAutoRoot) {
    if (root_choice < 0 || static_cast<std::size_t>(root_choice) >= td.bags.size())
      throw InputError("root bag index out of range");
    return detail::schedule_for_root(g, td, root_choice);
  }

  std::optional<Schedule> best;
  BigInt best_cost, best_fusion;
  for (int r = 0; r < static_cast<int>(td.bags.size()); ++r) {
    Schedule s = detail::schedule_for_root(g, td, r);
    BigInt cost = estimate_cost(g, td, s, planar);
    BigInt fusion = detail::total_fusion_cost(td, s);
    if (!best || cost < best_cost || (cost == best_cost && fusion < best_fusion)) {
      best = std::move(s);
      best_cost = std::move(cost);
      best_fusion = std::move(fusion);
    }
  }
  return std::move(*best);
}

/// Replays a schedule on scopes alone. Returns a description of the first
/// structural problem, or nothing when every edge is processed exactly once
/// with both endpoints in scope, every vertex is deleted exactly once after
/// its last edge, and copies of a vertex introduced in separate branches
/// meet in a fusion before that deletion.
inline std::optional<std::string> audit_schedule(const Graph& g, const Schedule& s) {
  using Scope = std::vector<Vertex>;
  std::map<int, Scope> pending;
  std::map<Edge, int> processed;
  std::vector<int> deletions(static_cast<std::size_t>(g.n_vertices()), 0);
  std::vector<int> insertions(static_cast<std::size_t>(g.n_vertices()), 0);
  auto in = [](const Scope& sc, Vertex x) { return std::binary_search(sc.begin(), sc.end(), x); };

  for (const auto& step : s.steps) {
    Scope scope;
    for (int c : step.fuse_order) {
      auto it = pending.find(c);
      if (it == pending.end()) return "bag " + std::to_string(step.bag) + " fuses a daughter that was not processed";
      Scope merged;
      std::set_union(scope.begin(), scope.end(), it->second.begin(), it->second.end(), std::back_inserter(merged));
      scope = std::move(merged);
      pending.erase(it);
    }
    for (Vertex x : step.insert_set) {
      if (in(scope, x)) return "vertex " + std::to_string(x) + " inserted while already in scope";
      if (deletions[static_cast<std::size_t>(x)]) return "vertex " + std::to_string(x) + " inserted after deletion";
      ++insertions[static_cast<std::size_t>(x)];
      scope.insert(std::upper_bound(scope.begin(), scope.end(), x), x);
    }
    for (const Edge& e : step.edge_plan) {
      if (!in(scope, e.u) || !in(scope, e.v))
        return "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") processed with an endpoint out of scope";
      ++processed[e.normalized()];
    }
    if (step.prune_lookahead.size() != step.edge_plan.size() + 1)
      return "bag " + std::to_string(step.bag) + " has a malformed prune lookahead";
    for (Vertex x : step.delete_set) {
      if (!in(scope, x)) return "vertex " + std::to_string(x) + " deleted while not in scope";
      ++deletions[static_cast<std::size_t>(x)];
      scope.erase(std::lower_bound(scope.begin(), scope.end(), x));
    }
    if (step.parent >= 0) pending[step.bag] = std::move(scope);
    else if (!scope.empty()) return "root hands on a nonempty scope";
  }
  if (!pending.empty()) return "some bag states never reached their parent";
  for (const Edge& e : g.edges())
    if (processed[e.normalized()] != 1)
      return "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") processed " +
             std::to_string(processed[e.normalized()]) + " times";
  if (processed.size() != g.n_edges()) return "schedule processes an edge not in the graph";
  for (Vertex x = 0; x < g.n_vertices(); ++x) {
    if (deletions[static_cast<std::size_t>(x)] != 1)
      return "vertex " + std::to_string(x) + " deleted " + std::to_string(deletions[static_cast<std::size_t>(x)]) +
             " times";
    if (insertions[static_cast<std::size_t>(x)] < 1) return "vertex " + std::to_string(x) + " never inserted";
  }
  return std::nullopt;
}

}  // namespace potts
