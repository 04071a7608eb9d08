#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace potts::detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0) { reset(n); }

  void reset(std::size_t n) {
    parent_.resize(n);
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    sets_ = n;
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns true when the two elements were in different sets.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    // Smaller root wins so that representatives are stable and reproducible.
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    --sets_;
    return true;
  }

  std::size_t size() const noexcept { return parent_.size(); }
  std::size_t set_count() const noexcept { return sets_; }

 private:
  std::vector<std::size_t> parent_;
  std::size_t sets_ = 0;
};

}  // namespace potts::detail
