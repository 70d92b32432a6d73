#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "sea/common.hpp"
#include "sea/rng.hpp"
#include "sea/support.hpp"

namespace sea {

struct ColumnScaling {
  Vector scales;  // original column l2 norms, all > 0
};

// Rescales each column to unit l2 norm. The input factors exactly as
// A = A_norm * diag(scales).
inline std::pair<Matrix, ColumnScaling> normalize_columns(const Matrix& a) {
  const int n = static_cast<int>(a.cols());
  Matrix out = a;
  ColumnScaling scaling;
  scaling.scales.resize(n);
  for (int j = 0; j < n; ++j) {
    const double norm = a.col(j).norm();
    if (norm < 1e-300) throw ZeroColumn(j);
    scaling.scales[j] = norm;
    out.col(j) /= norm;
  }
  return {std::move(out), std::move(scaling)};
}

inline Matrix submatrix(const Matrix& a, const Support& s) {
  Matrix out(a.rows(), s.size());
  for (int j = 0; j < s.size(); ++j) out.col(j) = a.col(s.idx[j]);
  return out;
}

// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
// ascending. Intended for the small Gram matrices that show up in
// restricted-isometry scans; not a general-purpose eigensolver.
inline Vector jacobi_eigenvalues(Matrix g, int max_sweeps = 64,
                                 double tol = 1e-14) {
  const int d = static_cast<int>(g.rows());
  if (g.cols() != d) throw DimensionMismatch("jacobi: matrix not square");
  if (d == 1) return g.col(0);
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < d; ++p)
      for (int q = p + 1; q < d; ++q) off += g(p, q) * g(p, q);
    if (std::sqrt(off) <= tol * scale) break;
    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) {
        if (std::abs(g(p, q)) <= 1e-300) continue;
        const double theta = (g(q, q) - g(p, p)) / (2.0 * g(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int i = 0; i < d; ++i) {
          const double gip = g(i, p);
          const double giq = g(i, q);
          g(i, p) = c * gip - s * giq;
          g(i, q) = s * gip + c * giq;
        }
        for (int i = 0; i < d; ++i) {
          const double gpi = g(p, i);
          const double gqi = g(q, i);
          g(p, i) = c * gpi - s * gqi;
          g(q, i) = s * gpi + c * gqi;
        }
      }
    }
  }
  Vector eig = g.diagonal();
  std::sort(eig.data(), eig.data() + d);
  return eig;
}

// Largest eigenvalue of A^T A via power iteration with a fixed-seed
// random start. Convergence is declared on the eigen-residual, which
// bounds the eigenvalue error directly.
inline double spectral_norm_sq(const Matrix& a, double tol = 1e-10,
                               int max_iter = 1000) {
  const int n = static_cast<int>(a.cols());
  auto engine = make_engine(0x5EA0001ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = gauss(engine);
  double vn = v.norm();
  if (vn == 0.0) throw NoConvergence("power iteration: degenerate start");
  v /= vn;
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = a.transpose() * (a * v);
    lambda = v.dot(w);
    const double resid = (w - lambda * v).norm();
    if (resid <= tol * std::max(lambda, 1e-300)) return lambda;
    const double wn = w.norm();
    if (wn < 1e-300) return 0.0;  // start landed in the null space of A
    v = w / wn;
  }
  throw NoConvergence("power iteration: no convergence within max_iter");
}

// Solves A_S^T A_S x_S = A_S^T y by conjugate gradient on the normal
// equations. Stops when ||A_S^T A_S x - A_S^T y|| <= tol * ||A_S^T y||,
// otherwise returns the iterate after max_iter steps. Singular Gram
// matrices are routine for coherent columns, so running out the budget
// is not an error.
inline Vector restricted_least_squares(const Matrix& a, const Support& s,
                                       const Vector& y, double tol = 1e-10,
                                       int max_iter = -1) {
  if (s.empty()) throw EmptySupport("restricted least squares: empty support");
  if (y.size() != a.rows())
    throw DimensionMismatch("restricted least squares: y has wrong length");
  for (int i : s.idx)
    if (i < 0 || i >= a.cols())
      throw DimensionMismatch("restricted least squares: index out of range");
  const int k = s.size();
  if (max_iter < 0) max_iter = 4 * k;
  const Matrix as = submatrix(a, s);
  const Matrix gram = as.transpose() * as;
  const Vector b = as.transpose() * y;
  const double bn = b.norm();
  Vector x = Vector::Zero(k);
  if (bn == 0.0) return x;
  Vector r = b;
  Vector p = r;
  double rs = r.squaredNorm();
  for (int it = 0; it < max_iter; ++it) {
    Vector gp = gram * p;
    const double curvature = p.dot(gp);
    if (!(curvature > 0.0)) break;
    const double alpha = rs / curvature;
    x += alpha * p;
    r -= alpha * gp;
    const double rs_next = r.squaredNorm();
    if (std::sqrt(rs_next) <= tol * bn) break;
    p = r + (rs_next / rs) * p;
    rs = rs_next;
  }
  return x;
}

inline Matrix gaussian_matrix(int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw DimensionMismatch("gaussian_matrix: empty shape");
  auto engine = make_engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = gauss(engine);
  return a;
}

// Square circulant matrix whose column j is the circularly shifted,
// discretized Gaussian kernel, column-normalized. All columns are shifts
// of column 0, so they share one norm.
inline Matrix gaussian_convolution_matrix(int n, double sigma) {
  if (n < 3) throw DimensionMismatch("convolution matrix: n < 3");
  if (!(sigma > 0)) throw ConfigError("convolution matrix: sigma <= 0");
  Vector kernel(n);
  for (int i = 0; i < n; ++i) {
    const double d = std::min(i, n - i);
    kernel[i] = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  kernel /= kernel.norm();
  Matrix a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = kernel[((i - j) % n + n) % n];
  return a;
}

// max_{i != j} |A_i^T A_j| for a column-normalized matrix.
inline double coherence(const Matrix& a) {
  const Matrix gram = a.transpose() * a;
  const int n = static_cast<int>(a.cols());
  double best = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      best = std::max(best, std::abs(gram(i, j)));
  return best;
}

inline Matrix random_orthonormal(int m, int n, std::uint64_t seed) {
  if (m < n) throw DimensionMismatch("random_orthonormal: m < n");
  const Matrix g = gaussian_matrix(m, n, seed);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(m, n);
  return q;
}

}  // namespace sea
