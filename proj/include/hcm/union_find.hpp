#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace hcm {

class UnionFind {
 public:
  explicit UnionFind(std::int64_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::int64_t{0});
  }

  std::int64_t find(std::int64_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns false if x and y were already connected.
  bool unite(std::int64_t x, std::int64_t y) {
    std::int64_t rx = find(x), ry = find(y);
    if (rx == ry) return false;
    if (size_[rx] < size_[ry]) std::swap(rx, ry);
    parent_[ry] = rx;
    size_[rx] += size_[ry];
    return true;
  }

  std::int64_t component_size(std::int64_t x) { return size_[find(x)]; }
  std::int64_t count() const { return static_cast<std::int64_t>(parent_.size()); }

 private:
  std::vector<std::int64_t> parent_;
  std::vector<std::int64_t> size_;
};

}  // namespace hcm
