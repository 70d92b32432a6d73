#pragma once

#include "oracles.hpp"
#include "sea/problem.hpp"

namespace test_util {

using sea::Matrix;
using sea::Vector;

inline sea::Problem gaussian_problem(int n, int m, int k, std::uint64_t seed,
                                     double noise_fraction = 0.0,
                                     double lo = 1.0, double hi = 2.0) {
  sea::GeneratorSpec spec;
  spec.n = n;
  spec.m = m;
  spec.k = k;
  spec.seed = seed;
  spec.noise_radius_fraction = noise_fraction;
  spec.amplitude_lo = lo;
  spec.amplitude_hi = hi;
  return sea::build_problem(spec);
}

inline sea::Problem orthonormal_problem(int n, int k, std::uint64_t seed,
                                        double noise_fraction = 0.0) {
  sea::GeneratorSpec spec;
  spec.n = n;
  spec.m = n;
  spec.k = k;
  spec.seed = seed;
  spec.noise_radius_fraction = noise_fraction;
  spec.matrix_kind = sea::MatrixKind::orthonormal;
  return sea::build_problem(spec);
}

inline sea::Problem convolution_problem(int n, int k, std::uint64_t seed,
                                        double noise_fraction = 0.0) {
  sea::GeneratorSpec spec;
  spec.n = n;
  spec.m = n;
  spec.k = k;
  spec.seed = seed;
  spec.noise_radius_fraction = noise_fraction;
  spec.matrix_kind = sea::MatrixKind::convolution;
  return sea::build_problem(spec);
}

struct ReferenceRun {
  std::vector<std::vector<int>> supports;
  std::vector<double> losses;
  Vector x_final;
  int iterations = 0;
};

// Literal re-implementation of hard thresholding with manual loops.
inline ReferenceRun reference_iht(const Matrix& a, const Vector& y, int k,
                                  double eta, int iters, const Vector& x0) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  Vector state = x0;
  ReferenceRun run;
  for (int t = 0; t < iters; ++t) {
    const std::vector<int> s = oracles::naive_largest_k(state, k);
    Vector x = Vector::Zero(n);
    for (int i : s) x[i] = state[i];
    Vector r(m);
    for (int row = 0; row < m; ++row) {
      double acc = -y[row];
      for (int i : s) acc += a(row, i) * x[i];
      r[row] = acc;
    }
    double loss = 0.0;
    for (int row = 0; row < m; ++row) loss += r[row] * r[row];
    loss *= 0.5;
    run.supports.push_back(s);
    run.losses.push_back(loss);
    Vector g(n);
    for (int col = 0; col < n; ++col) {
      double acc = 0.0;
      for (int row = 0; row < m; ++row) acc += a(row, col) * r[row];
      g[col] = acc;
    }
    for (int i = 0; i < n; ++i) state[i] = x[i] - eta * g[i];
  }
  run.x_final = state;
  run.iterations = iters;
  return run;
}

// Pursuit variant: refit on the selected support, halt when it repeats.
inline ReferenceRun reference_htp(const Matrix& a, const Vector& y, int k,
                                  double eta, int max_iter,
                                  const Vector& x0) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  Vector state = x0;
  ReferenceRun run;
  std::vector<int> previous;
  for (int t = 0; t < max_iter; ++t) {
    const std::vector<int> s = oracles::naive_largest_k(state, k);
    const Vector coeffs = oracles::ls_direct(a, s, y);
    Vector x = Vector::Zero(n);
    for (size_t j = 0; j < s.size(); ++j) x[s[j]] = coeffs[j];
    Vector r(m);
    for (int row = 0; row < m; ++row) {
      double acc = -y[row];
      for (size_t j = 0; j < s.size(); ++j)
        acc += a(row, s[j]) * coeffs[j];
      r[row] = acc;
    }
    double loss = 0.0;
    for (int row = 0; row < m; ++row) loss += r[row] * r[row];
    loss *= 0.5;
    run.supports.push_back(s);
    run.losses.push_back(loss);
    run.iterations = t + 1;
    if (t > 0 && s == previous) break;
    previous = s;
    Vector g(n);
    for (int col = 0; col < n; ++col) {
      double acc = 0.0;
      for (int row = 0; row < m; ++row) acc += a(row, col) * r[row];
      g[col] = acc;
    }
    for (int i = 0; i < n; ++i) state[i] = x[i] - eta * g[i];
    run.x_final = x;
  }
  return run;
}

}  // namespace test_util
