#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sea/common.hpp"

namespace sea {

// Sorted duplicate-free set of 0-based column indices. The sorted vector
// itself is the canonical key for memoization.
struct Support {
  std::vector<int> idx;

  Support() = default;
  explicit Support(std::vector<int> indices) : idx(std::move(indices)) {
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  }

  int size() const { return static_cast<int>(idx.size()); }
  bool empty() const { return idx.empty(); }

  bool contains(int i) const {
    return std::binary_search(idx.begin(), idx.end(), i);
  }

  bool is_subset_of(const Support& other) const {
    return std::includes(other.idx.begin(), other.idx.end(), idx.begin(),
                         idx.end());
  }

  int intersection_size(const Support& other) const {
    int count = 0;
    auto a = idx.begin();
    auto b = other.idx.begin();
    while (a != idx.end() && b != other.idx.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++count;
        ++a;
        ++b;
      }
    }
    return count;
  }

  friend bool operator==(const Support& a, const Support& b) {
    return a.idx == b.idx;
  }
  friend bool operator!=(const Support& a, const Support& b) {
    return !(a == b);
  }
  friend bool operator<(const Support& a, const Support& b) {
    return a.idx < b.idx;
  }
};

// Indices of the k largest |v_i|. Ties prefer the higher index, so
// largest_k(0) is the k last indices.
inline Support largest_k(const Vector& v, int k) {
  const int n = static_cast<int>(v.size());
  if (k < 1 || k > n) throw DimensionMismatch("largest_k: k out of range");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto prefer = [&v](int a, int b) {
    const double fa = std::abs(v[a]);
    const double fb = std::abs(v[b]);
    if (fa != fb) return fa > fb;
    return a > b;
  };
  std::partial_sort(order.begin(), order.begin() + k, order.end(), prefer);
  order.resize(k);
  std::sort(order.begin(), order.end());
  Support s;
  s.idx = std::move(order);
  return s;
}

struct SparseVector {
  int n = 0;
  Support support;
  Vector values;  // aligned with support.idx

  SparseVector() = default;
  SparseVector(int dim, Support s, Vector vals)
      : n(dim), support(std::move(s)), values(std::move(vals)) {
    if (support.size() != values.size())
      throw DimensionMismatch("sparse vector: support/value size mismatch");
  }

  Vector densify() const {
    Vector out = Vector::Zero(n);
    for (int j = 0; j < support.size(); ++j) out[support.idx[j]] = values[j];
    return out;
  }

  // Indices whose stored value is numerically nonzero.
  Support effective_support(double tol = kSupportZeroTol) const {
    Support s;
    for (int j = 0; j < support.size(); ++j)
      if (std::abs(values[j]) > tol) s.idx.push_back(support.idx[j]);
    return s;
  }

  double norm1() const { return values.lpNorm<1>(); }
};

inline SparseVector sparsify(const Vector& dense) {
  SparseVector out;
  out.n = static_cast<int>(dense.size());
  for (int i = 0; i < out.n; ++i)
    if (dense[i] != 0.0) out.support.idx.push_back(i);
  out.values.resize(out.support.size());
  for (int j = 0; j < out.support.size(); ++j)
    out.values[j] = dense[out.support.idx[j]];
  return out;
}

}  // namespace sea
