#pragma once

#include <cmath>

#include "sea/common.hpp"
#include "sea/support.hpp"

namespace sea {

// (k - |S* n supp(x)|) / k
inline double dist_supp(const SparseVector& x, const Support& s_star, int k) {
  if (k < 1) throw ConfigError("dist_supp: k < 1");
  if (s_star.size() > k) throw ConfigError("dist_supp: |S*| > k");
  const Support sx = x.effective_support();
  return (k - s_star.intersection_size(sx)) / static_cast<double>(k);
}

inline double dist_supp_kprime(const SparseVector& x, const Support& s_star,
                               int k_prime) {
  if (k_prime < 1) throw ConfigError("dist_supp_kprime: k' < 1");
  const Support sx = x.effective_support();
  return (k_prime - s_star.intersection_size(sx)) /
         static_cast<double>(k_prime);
}

// Support distance restricted to the K = min(k, k') largest entries of
// each vector, selected with the largest_k tie rule.
inline double dist_supp_largest(const SparseVector& x,
                                const SparseVector& x_star, int k,
                                int k_prime) {
  if (x.n != x_star.n)
    throw DimensionMismatch("dist_supp_largest: dimension mismatch");
  const int cap = std::min(k, k_prime);
  if (cap < 1) throw ConfigError("dist_supp_largest: empty selection");
  auto top_support = [cap](const SparseVector& v) {
    const Vector dense = v.densify();
    const Support sel = largest_k(dense, cap);
    Support nonzero;
    for (int i : sel.idx)
      if (std::abs(dense[i]) > kSupportZeroTol) nonzero.idx.push_back(i);
    return nonzero;
  };
  const Support a = top_support(x);
  const Support b = top_support(x_star);
  return (cap - a.intersection_size(b)) / static_cast<double>(cap);
}

inline double rel_l2_loss(const Matrix& a, const SparseVector& x,
                          const Vector& y) {
  const double yn = y.norm();
  if (yn == 0.0) throw ZeroObservation("rel_l2_loss: ||y|| = 0");
  return (a * x.densify() - y).norm() / yn;
}

// W1 between the normalized magnitude profiles, straight-line index
// metric: sum over positions of |CDF_p - CDF_q|.
inline double wasserstein1_spikes(const SparseVector& x,
                                  const SparseVector& x_star) {
  if (x.n != x_star.n)
    throw DimensionMismatch("wasserstein1: dimension mismatch");
  const double mass_x = x.norm1();
  const double mass_star = x_star.norm1();
  if (mass_x == 0.0 || mass_star == 0.0)
    throw ZeroMass("wasserstein1: zero total mass");
  const Vector p = x.densify().cwiseAbs() / mass_x;
  const Vector q = x_star.densify().cwiseAbs() / mass_star;
  double cdf_gap = 0.0;
  double total = 0.0;
  for (int i = 0; i < x.n; ++i) {
    cdf_gap += p[i] - q[i];
    total += std::abs(cdf_gap);
  }
  return total;
}

inline bool exact_support_match(const SparseVector& x, const Support& s_star) {
  return x.effective_support() == s_star;
}

}  // namespace sea
