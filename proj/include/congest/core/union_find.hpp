#pragma once

#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

namespace congest {

// Disjoint sets over 0..n-1 with path compression and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::size_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_offset_;
    return true;
  }

  bool same(std::size_t a, std::size_t b) { return find(a) == find(b); }
  std::size_t size() const noexcept { return parent_.size(); }
  std::size_t components() const noexcept { return parent_.size() + components_offset_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::ptrdiff_t components_offset_ = 0;
};

// Union-find keyed by arbitrary sparse integer labels (fragment IDs). Used by
// node programs that only know the labels they have seen.
class LabelUnionFind {
 public:
  std::uint64_t find(std::uint64_t label) {
    auto it = parent_.find(label);
    if (it == parent_.end()) return label;
    std::uint64_t root = it->second;
    if (root == label) return label;
    root = find(root);
    it = parent_.find(label);
    it->second = root;
    return root;
  }

  bool unite(std::uint64_t a, std::uint64_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    auto sa = weight(a), sb = weight(b);
    if (sa < sb) std::swap(a, b);
    parent_[b] = a;
    parent_.try_emplace(a, a);
    size_[a] = sa + sb;
    return true;
  }

  bool same(std::uint64_t a, std::uint64_t b) { return find(a) == find(b); }

 private:
  std::size_t weight(std::uint64_t root) const {
    auto it = size_.find(root);
    return it == size_.end() ? 1 : it->second;
  }

  std::unordered_map<std::uint64_t, std::uint64_t> parent_;
  std::unordered_map<std::uint64_t, std::size_t> size_;
};

}  // namespace congest
