#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "potts/bigint.hpp"
#include "potts/detail/union_find.hpp"
#include "potts/error.hpp"
#include "potts/graph.hpp"

namespace potts {

// Block labels of a partition as a restricted-growth string, one byte per
// scope position. Used directly as the hash-table key in the engine.
using PartitionKey = std::string;

inline constexpr std::size_t kMaxScope = 250;

/// Rewrites labels in place into restricted-growth form: scanning left to
/// right, each newly seen block gets the next unused label starting at 0.
inline void canonicalize(PartitionKey& labels) {
  std::array<unsigned char, 256> remap;
  remap.fill(0xff);
  unsigned char next = 0;
  for (char& c : labels) {
    auto& slot = remap[static_cast<unsigned char>(c)];
    if (slot == 0xff) slot = next++;
    c = static_cast<char>(slot);
  }
}

inline bool is_restricted_growth(std::string_view labels) {
  int max_seen = -1;
  for (char c : labels) {
    const int x = static_cast<unsigned char>(c);
    if (x > max_seen + 1) return false;
    max_seen = std::max(max_seen, x);
  }
  return true;
}

// Key-level operators used by the transfer-matrix inner loops. Inputs and
// outputs are canonical restricted-growth strings.
namespace keyops {

// Merges the blocks at positions a and b.
inline void join(PartitionKey& key, std::size_t a, std::size_t b) {
  auto la = static_cast<unsigned char>(key[a]);
  auto lb = static_cast<unsigned char>(key[b]);
  if (la == lb) return;
  if (lb < la) std::swap(la, lb);
  // lb's first occurrence disappears; later-numbered blocks shift down by one.
  for (char& c : key) {
    auto x = static_cast<unsigned char>(c);
    if (x == lb)
      x = la;
    else if (x > lb)
      --x;
    c = static_cast<char>(x);
  }
}

inline bool same_block(const PartitionKey& key, std::size_t a, std::size_t b) { return key[a] == key[b]; }

// Removes position pos; returns true when it was a singleton block.
inline bool erase(PartitionKey& key, std::size_t pos) {
  const char label = key[pos];
  key.erase(pos, 1);
  const bool singleton = key.find(label) == PartitionKey::npos;
  canonicalize(key);
  return singleton;
}

}  // namespace keyops

/// A set partition of an ascending list of distinct vertices.
class SetPartition {
 public:
  SetPartition() = default;

  // Scope may be given in any order; labels travel with their vertices.
  SetPartition(std::vector<Vertex> scope, PartitionKey labels) {
    if (scope.size() != labels.size()) throw InputError("scope and label lengths differ");
    if (scope.size() > kMaxScope) throw InputError("partition scope too large");
    std::vector<std::size_t> order(scope.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scope[a] < scope[b]; });
    scope_.reserve(scope.size());
    labels_.reserve(scope.size());
    for (auto k : order) {
      if (!scope_.empty() && scope_.back() == scope[k]) throw InputError("duplicate vertex in scope");
      scope_.push_back(scope[k]);
      labels_.push_back(labels[k]);
    }
    canonicalize(labels_);
  }

  static SetPartition from_blocks(const std::vector<std::vector<Vertex>>& blocks) {
    std::vector<Vertex> scope;
    PartitionKey labels;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].empty()) throw InputError("empty block");
      for (Vertex v : blocks[b]) {
        scope.push_back(v);
        labels.push_back(static_cast<char>(b));
      }
    }
    return SetPartition(std::move(scope), std::move(labels));
  }

  const std::vector<Vertex>& scope() const noexcept { return scope_; }
  const PartitionKey& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return scope_.size(); }
  bool empty() const noexcept { return scope_.empty(); }

  std::optional<std::size_t> position(Vertex v) const {
    const auto it = std::lower_bound(scope_.begin(), scope_.end(), v);
    if (it == scope_.end() || *it != v) return std::nullopt;
    return static_cast<std::size_t>(it - scope_.begin());
  }

  std::size_t block_count() const {
    int top = -1;
    for (char c : labels_) top = std::max(top, static_cast<int>(static_cast<unsigned char>(c)));
    return static_cast<std::size_t>(top + 1);
  }

  // Blocks in label order; each block ascending.
  std::vector<std::vector<Vertex>> blocks() const {
    std::vector<std::vector<Vertex>> out(block_count());
    for (std::size_t k = 0; k < scope_.size(); ++k)
      out[static_cast<unsigned char>(labels_[k])].push_back(scope_[k]);
    return out;
  }

  friend bool operator==(const SetPartition&, const SetPartition&) = default;

 private:
  std::vector<Vertex> scope_;
  PartitionKey labels_;
};

/// `{{1,3},{2}}`: blocks sorted internally and among themselves.
inline std::string to_string(const SetPartition& p) {
  auto blocks = p.blocks();
  std::sort(blocks.begin(), blocks.end());
  std::ostringstream out;
  out << '{';
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (b) out << ',';
    out << '{';
    for (std::size_t k = 0; k < blocks[b].size(); ++k) out << (k ? "," : "") << blocks[b][k];
    out << '}';
  }
  out << '}';
  return out.str();
}

inline SetPartition singleton_partition(std::vector<Vertex> scope) {
  PartitionKey labels(scope.size(), '\0');
  for (std::size_t k = 0; k < labels.size(); ++k) labels[k] = static_cast<char>(k);
  return SetPartition(std::move(scope), std::move(labels));
}

namespace detail {
inline std::size_t require_position(const SetPartition& p, Vertex v) {
  const auto pos = p.position(v);
  if (!pos) throw InputError("vertex " + std::to_string(v) + " not in partition scope");
  return *pos;
}
}  // namespace detail

/// Amalgamates the blocks containing i and j.
inline SetPartition join_vertices(const SetPartition& p, Vertex i, Vertex j) {
  const auto a = detail::require_position(p, i);
  const auto b = detail::require_position(p, j);
  PartitionKey key = p.labels();
  keyops::join(key, a, b);
  return SetPartition(p.scope(), std::move(key));
}

struct DeleteResult {
  SetPartition partition;
  bool was_singleton = false;
};

/// Removes i from the scope. The caller applies the factor Q when i was a singleton.
inline DeleteResult delete_vertex(const SetPartition& p, Vertex i) {
  const auto pos = detail::require_position(p, i);
  std::vector<Vertex> scope = p.scope();
  scope.erase(scope.begin() + static_cast<std::ptrdiff_t>(pos));
  PartitionKey key = p.labels();
  const bool singleton = keyops::erase(key, pos);
  return {SetPartition(std::move(scope), std::move(key)), singleton};
}

/// Adds i as a new singleton block.
inline SetPartition insert_singleton(const SetPartition& p, Vertex i) {
  if (p.position(i)) throw InputError("vertex " + std::to_string(i) + " already in scope");
  std::vector<Vertex> scope = p.scope();
  PartitionKey key = p.labels();
  scope.push_back(i);
  key.push_back(static_cast<char>(p.block_count()));
  return SetPartition(std::move(scope), std::move(key));
}

/// Join in the partition lattice over the union of both scopes; a vertex
/// missing from one operand counts as a singleton there.
inline SetPartition lattice_join(const SetPartition& p1, const SetPartition& p2) {
  std::vector<Vertex> scope;
  std::set_union(p1.scope().begin(), p1.scope().end(), p2.scope().begin(), p2.scope().end(),
                 std::back_inserter(scope));
  ::potts::detail::UnionFind uf(scope.size());
  auto absorb = [&](const SetPartition& p) {
    std::array<int, 256> first;
    first.fill(-1);
    std::size_t u = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      while (scope[u] != p.scope()[k]) ++u;
      auto& f = first[static_cast<unsigned char>(p.labels()[k])];
      if (f < 0)
        f = static_cast<int>(u);
      else
        uf.unite(static_cast<std::size_t>(f), u);
    }
  };
  absorb(p1);
  absorb(p2);
  PartitionKey key(scope.size(), '\0');
  for (std::size_t u = 0; u < scope.size(); ++u) key[u] = static_cast<char>(uf.find(u));
  return SetPartition(std::move(scope), std::move(key));
}

inline BigInt catalan(unsigned n) {
  BigInt c = 1;
  for (unsigned k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return c;
}

// Bell triangle.
inline BigInt bell(unsigned n) {
  std::vector<BigInt> row{1};
  for (unsigned k = 0; k < n; ++k) {
    std::vector<BigInt> next{row.back()};
    for (const BigInt& x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}

/// Upper bound on the number of basis states for n active vertices:
/// Catalan C_n when the graph is planar, Bell B_n otherwise.
inline BigInt count_states(unsigned n, bool planar) { return planar ? catalan(n) : bell(n); }

/// Calls f(labels) for every restricted-growth string of length n.
inline void for_each_partition(std::size_t n, const std::function<void(const PartitionKey&)>& f) {
  PartitionKey key(n, '\0');
  if (n == 0) {
    f(key);
    return;
  }
  std::vector<int> prefix_max(n, 0);
  while (true) {
    f(key);
    std::size_t k = n - 1;
    while (k > 0 && static_cast<int>(key[k]) > prefix_max[k - 1]) --k;
    if (k == 0) return;
    key[k] = static_cast<char>(key[k] + 1);
    prefix_max[k] = std::max(prefix_max[k - 1], static_cast<int>(key[k]));
    for (std::size_t j = k + 1; j < n; ++j) {
      key[j] = 0;
      prefix_max[j] = prefix_max[j - 1];
    }
  }
}

}  // namespace potts
