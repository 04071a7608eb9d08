#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "potts/error.hpp"
#include "potts/graph.hpp"
#include "potts/partition.hpp"
#include "potts/schedule.hpp"
#include "potts/treedecomp.hpp"
#include "potts/weights.hpp"

namespace potts {

/// Linear combination of set partitions of `scope`, keyed by canonical label
/// string. Entries with an exactly zero weight are never stored.
template <class Ring>
struct WeightedState {
  using value_type = typename Ring::value_type;
  using Table = std::unordered_map<PartitionKey, value_type>;

  std::vector<Vertex> scope;
  Table table;

  std::size_t size() const noexcept { return table.size(); }

  // The single all-singleton basis state with weight `w`.
  static WeightedState basis(std::vector<Vertex> scope, value_type w) {
    WeightedState s;
    std::sort(scope.begin(), scope.end());
    PartitionKey key = singleton_partition(scope).labels();
    s.scope = std::move(scope);
    if (!Ring::is_zero(w)) s.table.emplace(std::move(key), std::move(w));
    return s;
  }

  std::optional<value_type> weight_of(const SetPartition& p) const {
    if (p.scope() != scope) return std::nullopt;
    auto it = table.find(p.labels());
    if (it == table.end()) return std::nullopt;
    return it->second;
  }
};

enum class TracePhase { after_fuse, after_insert, after_edge, after_delete };

inline const char* to_string(TracePhase p) {
  switch (p) {
    case TracePhase::after_fuse: return "after_fuse";
    case TracePhase::after_insert: return "after_insert";
    case TracePhase::after_edge: return "after_edge";
    case TracePhase::after_delete: return "after_delete";
  }
  return "?";
}

template <class Ring>
struct TraceEvent {
  int bag;
  TracePhase phase;
  const WeightedState<Ring>& state;
};

struct RunStats {
  std::size_t peak_table_size = 0;
  std::size_t max_scope = 0;
  // Largest observed table size divided by C_{|scope|}, over all steps.
  double max_catalan_ratio = 0.0;
  // Steps whose table exceeded B_{|scope|}; always zero for a correct engine.
  std::size_t bell_violations = 0;
  std::size_t pruned_entries = 0;
};

template <class Ring>
struct EngineOptions {
  bool pruning = false;
  std::function<void(const TraceEvent<Ring>&)> trace;
};

namespace detail {

template <class Ring>
void accumulate(typename WeightedState<Ring>::Table& table, PartitionKey key, typename Ring::value_type w) {
  if (Ring::is_zero(w)) return;
  auto [it, fresh] = table.try_emplace(std::move(key), std::move(w));
  if (fresh) return;
  Ring::add_to(it->second, w);
  if (Ring::is_zero(it->second)) table.erase(it);
}

inline std::size_t position_in(const std::vector<Vertex>& scope, Vertex v) {
  const auto it = std::lower_bound(scope.begin(), scope.end(), v);
  if (it == scope.end() || *it != v) throw InputError("vertex " + std::to_string(v) + " not in state scope");
  return static_cast<std::size_t>(it - scope.begin());
}

// For a canonical key, the pairs (position, first position of its block)
// for every position that is not the first of its block.
inline void block_links(const PartitionKey& key, const std::vector<std::uint8_t>& to_union,
                        std::vector<std::pair<std::uint8_t, std::uint8_t>>& out) {
  out.clear();
  std::array<int, 256> first;
  first.fill(-1);
  for (std::size_t k = 0; k < key.size(); ++k) {
    auto& f = first[static_cast<unsigned char>(key[k])];
    if (f < 0)
      f = to_union[k];
    else
      out.emplace_back(to_union[k], static_cast<std::uint8_t>(f));
  }
}

}  // namespace detail

/// The tree-decomposed transfer matrix over one coefficient ring.
template <class Ring>
class Engine {
 public:
  using value_type = typename Ring::value_type;
  using State = WeightedState<Ring>;

  explicit Engine(Ring ring = {}, EngineOptions<Ring> options = {}) : ring_(std::move(ring)), opt_(std::move(options)) {
    if (opt_.pruning && (Ring::mode == WeightMode::scalar || !ring_.chromatic()))
      throw ComputeError("pruning requires v = -1 in an exact mode");
  }

  const Ring& ring() const noexcept { return ring_; }
  const RunStats& stats() const noexcept { return stats_; }

  /// Applies 1 + v J_ij: each entry keeps its partition and also spawns the
  /// partition with the blocks of i and j merged, weighted by v.
  void apply_edge(State& s, Vertex i, Vertex j) const {
    const auto a = detail::position_in(s.scope, i);
    const auto b = detail::position_in(s.scope, j);
    std::vector<std::pair<PartitionKey, value_type>> spawned;
    spawned.reserve(s.table.size());
    for (auto it = s.table.begin(); it != s.table.end();) {
      value_type& w = it->second;
      if (keyops::same_block(it->first, a, b)) {
        value_type joined = w;
        ring_.times_v(joined);
        ring_.times_keep(w);
        Ring::add_to(w, joined);
      } else {
        value_type joined = w;
        ring_.times_v(joined);
        ring_.times_keep(w);
        PartitionKey key = it->first;
        keyops::join(key, a, b);
        spawned.emplace_back(std::move(key), std::move(joined));
      }
      if (Ring::is_zero(w))
        it = s.table.erase(it);
      else
        ++it;
    }
    for (auto& [key, w] : spawned) detail::accumulate<Ring>(s.table, std::move(key), std::move(w));
  }

  State apply_edge(State s, const Edge& e) const {
    apply_edge(s, e.u, e.v);
    return s;
  }

  /// Removes `deleted` (a factor Q for each one that is a singleton), then
  /// adds `inserted` as new singleton blocks.
  void delete_and_insert(State& s, const std::vector<Vertex>& deleted, const std::vector<Vertex>& inserted) const {
    if (!deleted.empty()) {
      std::vector<std::size_t> positions;
      for (Vertex x : deleted) positions.push_back(detail::position_in(s.scope, x));
      std::sort(positions.begin(), positions.end());
      if (std::adjacent_find(positions.begin(), positions.end()) != positions.end())
        throw InputError("vertex listed twice for deletion");

      std::vector<Vertex> scope;
      for (std::size_t k = 0, d = 0; k < s.scope.size(); ++k) {
        if (d < positions.size() && positions[d] == k)
          ++d;
        else
          scope.push_back(s.scope[k]);
      }
      typename State::Table table;
      table.reserve(s.table.size());
      for (auto& [key, w] : s.table) {
        std::array<std::uint8_t, 256> count{};
        for (char c : key) ++count[static_cast<unsigned char>(c)];
        PartitionKey reduced;
        reduced.reserve(scope.size());
        for (std::size_t k = 0, d = 0; k < key.size(); ++k) {
          if (d < positions.size() && positions[d] == k)
            ++d;
          else
            reduced.push_back(key[k]);
        }
        // One factor Q per block that loses all of its members.
        std::array<bool, 256> survives{};
        for (char c : reduced) survives[static_cast<unsigned char>(c)] = true;
        std::size_t emptied = 0;
        for (std::size_t l = 0; l < 256; ++l)
          if (count[l] && !survives[l]) ++emptied;
        canonicalize(reduced);
        value_type nw = std::move(w);
        for (std::size_t q = 0; q < emptied; ++q) ring_.times_q(nw);
        detail::accumulate<Ring>(table, std::move(reduced), std::move(nw));
      }
      s.scope = std::move(scope);
      s.table = std::move(table);
    }

    if (!inserted.empty()) {
      std::vector<Vertex> added = inserted;
      std::sort(added.begin(), added.end());
      if (std::adjacent_find(added.begin(), added.end()) != added.end())
        throw InputError("vertex listed twice for insertion");
      std::vector<Vertex> scope;
      std::vector<int> source;  // old position, or -(k+1) for the k-th insertion
      std::size_t i = 0, k = 0;
      while (i < s.scope.size() || k < added.size()) {
        if (k == added.size() || (i < s.scope.size() && s.scope[i] < added[k])) {
          scope.push_back(s.scope[i]);
          source.push_back(static_cast<int>(i++));
        } else {
          if (i < s.scope.size() && s.scope[i] == added[k])
            throw InputError("vertex " + std::to_string(added[k]) + " inserted while already in scope");
          scope.push_back(added[k]);
          source.push_back(-static_cast<int>(++k));
        }
      }
      if (scope.size() > kMaxScope) throw ComputeError("state scope exceeds the supported size");
      typename State::Table table;
      table.reserve(s.table.size());
      for (auto& [key, w] : s.table) {
        PartitionKey grown(scope.size(), '\0');
        for (std::size_t p = 0; p < scope.size(); ++p)
          grown[p] = source[p] >= 0 ? key[static_cast<std::size_t>(source[p])]
                                    : static_cast<char>(key.size() - 1 - static_cast<std::size_t>(source[p]));
        canonicalize(grown);
        table.emplace(std::move(grown), std::move(w));
      }
      s.scope = std::move(scope);
      s.table = std::move(table);
    }
  }

  /// Fusion: every pair of entries combines into the lattice join of their
  /// partitions over the union scope, with the product weight.
  State fuse(const State& s1, const State& s2) const {
    State out;
    std::set_union(s1.scope.begin(), s1.scope.end(), s2.scope.begin(), s2.scope.end(),
                   std::back_inserter(out.scope));
    const auto n = out.scope.size();
    if (n > kMaxScope) throw ComputeError("state scope exceeds the supported size");
    auto mapping = [&](const std::vector<Vertex>& sc) {
      std::vector<std::uint8_t> m;
      for (Vertex x : sc) m.push_back(static_cast<std::uint8_t>(detail::position_in(out.scope, x)));
      return m;
    };
    const auto m1 = mapping(s1.scope);
    const auto m2 = mapping(s2.scope);

    using Links = std::vector<std::pair<std::uint8_t, std::uint8_t>>;
    std::vector<std::pair<Links, const value_type*>> left, right;
    Links scratch;
    for (const auto& [key, w] : s1.table) {
      detail::block_links(key, m1, scratch);
      left.emplace_back(scratch, &w);
    }
    for (const auto& [key, w] : s2.table) {
      detail::block_links(key, m2, scratch);
      right.emplace_back(scratch, &w);
    }

    out.table.reserve(std::min<std::size_t>(left.size() * right.size(), std::size_t{1} << 20));
    std::array<std::uint8_t, 256> parent;
    auto find = [&](std::uint8_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    auto unite = [&](std::uint8_t a, std::uint8_t b) {
      a = find(a);
      b = find(b);
      if (a == b) return;
      if (b < a) std::swap(a, b);
      parent[b] = a;
    };
    PartitionKey key(n, '\0');
    for (const auto& [l1, w1] : left) {
      for (const auto& [l2, w2] : right) {
        for (std::size_t k = 0; k < n; ++k) parent[k] = static_cast<std::uint8_t>(k);
        for (auto [x, y] : l1) unite(x, y);
        for (auto [x, y] : l2) unite(x, y);
        for (std::size_t k = 0; k < n; ++k) key[k] = static_cast<char>(find(static_cast<std::uint8_t>(k)));
        canonicalize(key);
        detail::accumulate<Ring>(out.table, key, Ring::mul(*w1, *w2));
      }
    }
    return out;
  }

  /// Drops entries that put the two ends of any lookahead edge in one block.
  /// Edges with an endpoint outside the scope are ignored.
  void prune(State& s, const std::vector<Edge>& lookahead) {
    if (!opt_.pruning) throw ComputeError("prune called with pruning disabled");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const Edge& e : lookahead) {
      const auto a = std::lower_bound(s.scope.begin(), s.scope.end(), e.u);
      const auto b = std::lower_bound(s.scope.begin(), s.scope.end(), e.v);
      if (a == s.scope.end() || *a != e.u || b == s.scope.end() || *b != e.v) continue;
      pairs.emplace_back(static_cast<std::size_t>(a - s.scope.begin()), static_cast<std::size_t>(b - s.scope.begin()));
    }
    if (pairs.empty()) return;
    for (auto it = s.table.begin(); it != s.table.end();) {
      const auto& key = it->first;
      const bool doomed = std::any_of(pairs.begin(), pairs.end(), [&](auto pq) { return key[pq.first] == key[pq.second]; });
      if (doomed) {
        it = s.table.erase(it);
        ++stats_.pruned_entries;
      } else {
        ++it;
      }
    }
  }

  /// Runs the whole schedule and returns the weight of the empty partition.
  value_type run(const Graph& g, const Schedule& schedule) {
    stats_ = {};
    if (schedule.steps.empty()) {
      if (g.n_vertices() != 0) throw ComputeError("empty schedule for a nonempty graph");
      return ring_.one();
    }
    std::map<int, State> pending;
    std::optional<value_type> result;

    for (const auto& step : schedule.steps) {
      State s = State::basis({}, ring_.one());
      bool first = true;
      for (int c : step.fuse_order) {
        auto it = pending.find(c);
        if (it == pending.end()) throw ComputeError("schedule fuses an unprocessed bag");
        if (first)
          s = std::move(it->second);
        else
          s = fuse(s, it->second);
        first = false;
        pending.erase(it);
        observe(s);
      }
      emit(step.bag, TracePhase::after_fuse, s);

      delete_and_insert(s, {}, step.insert_set);
      observe(s);
      emit(step.bag, TracePhase::after_insert, s);
      if (opt_.pruning) prune(s, step.prune_lookahead.at(0));

      for (std::size_t k = 0; k < step.edge_plan.size(); ++k) {
        apply_edge(s, step.edge_plan[k].u, step.edge_plan[k].v);
        observe(s);
        emit(step.bag, TracePhase::after_edge, s);
        if (opt_.pruning) prune(s, step.prune_lookahead.at(k + 1));
      }

      delete_and_insert(s, step.delete_set, {});
      observe(s);
      emit(step.bag, TracePhase::after_delete, s);

      if (step.parent >= 0) {
        pending.emplace(step.bag, std::move(s));
      } else {
        if (!s.scope.empty()) throw ComputeError("root state still has active vertices");
        auto it = s.table.find(PartitionKey{});
        result = it == s.table.end() ? ring_.zero() : std::move(it->second);
      }
    }
    if (!result) throw ComputeError("schedule has no root step");
    return std::move(*result);
  }

 private:
  void emit(int bag, TracePhase phase, const State& s) const {
    if (opt_.trace) opt_.trace(TraceEvent<Ring>{bag, phase, s});
  }

  void observe(const State& s) {
    stats_.peak_table_size = std::max(stats_.peak_table_size, s.table.size());
    stats_.max_scope = std::max(stats_.max_scope, s.scope.size());
    const auto n = static_cast<unsigned>(s.scope.size());
    if (n < catalan_.size() || extend_tables(n)) {
      stats_.max_catalan_ratio = std::max(stats_.max_catalan_ratio, static_cast<double>(s.table.size()) / catalan_[n]);
      if (static_cast<double>(s.table.size()) > bell_[n]) ++stats_.bell_violations;
    }
  }

  bool extend_tables(unsigned n) {
    while (catalan_.size() <= n) {
      const auto k = static_cast<unsigned>(catalan_.size());
      catalan_.push_back(catalan(k).convert_to<double>());
      bell_.push_back(bell(k).convert_to<double>());
    }
    return true;
  }

  Ring ring_;
  EngineOptions<Ring> opt_;
  RunStats stats_;
  std::vector<double> catalan_, bell_;
};

// ---------------------------------------------------------------------------
// Mode-erased front end.

struct TraceSnapshot {
  int bag;
  TracePhase phase;
  std::vector<Vertex> scope;
  std::vector<std::pair<SetPartition, Weight>> entries;  // sorted by label string
};

struct EngineConfig {
  ModeSpec mode = UnivariateMode{};
  bool pruning = false;
  std::function<void(const TraceSnapshot&)> trace;
};

struct RunResult {
  Weight value;
  RunStats stats;
};

inline RunResult run(const Graph& g, const Schedule& schedule, const EngineConfig& config) {
  return with_ring(config.mode, [&](auto ring) -> RunResult {
    using R = decltype(ring);
    EngineOptions<R> opt;
    opt.pruning = config.pruning;
    if (config.trace) {
      opt.trace = [&](const TraceEvent<R>& ev) {
        TraceSnapshot snap{ev.bag, ev.phase, ev.state.scope, {}};
        std::vector<std::pair<PartitionKey, const typename R::value_type*>> rows;
        for (const auto& [key, w] : ev.state.table) rows.emplace_back(key, &w);
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [key, w] : rows) snap.entries.emplace_back(SetPartition(ev.state.scope, key), ring.wrap(*w));
        config.trace(snap);
      };
    }
    Engine<R> engine(ring, std::move(opt));
    auto value = engine.run(g, schedule);
    return RunResult{ring.wrap(std::move(value)), engine.stats()};
  });
}

struct SolveOptions {
  bool pruning = true;
  bool path = false;
  bool planar = true;
};

/// Chromatic polynomial with a GreedyFillIn decomposition and automatic root.
inline IntPoly chromatic_polynomial(const Graph& g, const SolveOptions& opt = {}, RunStats* stats = nullptr) {
  DecomposeOptions dopt;
  dopt.path = opt.path;
  const auto td = decompose(g, dopt);
  const auto schedule = build_schedule(g, td, kAutoRoot, opt.planar);
  Engine<UnivariateRing> engine(UnivariateRing{}, EngineOptions<UnivariateRing>{opt.pruning, {}});
  auto chi = engine.run(g, schedule);
  if (stats) *stats = engine.stats();
  return chi;
}

/// Full Potts partition function Z(Q, v) as a bivariate polynomial.
inline BiPoly potts_polynomial(const Graph& g, const SolveOptions& opt = {}) {
  DecomposeOptions dopt;
  dopt.path = opt.path;
  const auto td = decompose(g, dopt);
  const auto schedule = build_schedule(g, td, kAutoRoot, opt.planar);
  Engine<BivariateRing> engine;
  return engine.run(g, schedule);
}

}  // namespace potts
