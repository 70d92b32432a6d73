#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "sea/common.hpp"
#include "sea/linalg.hpp"
#include "sea/rng.hpp"
#include "sea/support.hpp"

namespace sea {

struct GroundTruth {
  SparseVector x_star;
  Vector e;  // measurement-domain error, y = A x* + e holds exactly
};

struct Problem {
  Matrix a;  // column-normalized
  Vector y;
  int k = 0;
  std::optional<GroundTruth> truth;
  std::optional<ColumnScaling> scaling;

  int rows() const { return static_cast<int>(a.rows()); }
  int cols() const { return static_cast<int>(a.cols()); }
};

enum class NoiseMode { after_a, before_a };
enum class MatrixKind { gaussian, convolution, orthonormal };

inline std::string to_string(NoiseMode m) {
  return m == NoiseMode::after_a ? "after_A" : "before_A";
}
inline std::string to_string(MatrixKind k) {
  switch (k) {
    case MatrixKind::gaussian: return "gaussian";
    case MatrixKind::convolution: return "convolution";
    default: return "orthonormal";
  }
}

struct GeneratorSpec {
  int n = 0;
  int m = 0;
  int k = 0;
  double noise_radius_fraction = 0.0;
  double amplitude_lo = 1.0;
  double amplitude_hi = 2.0;
  NoiseMode noise_mode = NoiseMode::after_a;
  MatrixKind matrix_kind = MatrixKind::gaussian;
  double sigma = 3.0;  // convolution kernel width
  std::uint64_t seed = 0;

  void validate() const {
    if (n < 1 || m < 1 || k < 1) throw ConfigError("generator: empty shape");
    if (k > n) throw ConfigError("generator: k > n");
    if (matrix_kind != MatrixKind::convolution && k > std::min(m, n))
      throw ConfigError("generator: k > min(m, n)");
    if (matrix_kind == MatrixKind::orthonormal && m < n)
      throw ConfigError("generator: orthonormal requires m >= n");
    if (matrix_kind == MatrixKind::convolution && m != n)
      throw ConfigError("generator: convolution matrix is square");
    if (noise_radius_fraction < 0) throw ConfigError("generator: negative noise");
    if (!(amplitude_lo > 0) || amplitude_lo > amplitude_hi)
      throw ConfigError("generator: bad amplitude range");
  }
};

// k support indices uniform without replacement; values uniform on
// [-hi,-lo] u [lo,hi] with the sign an independent fair coin.
inline SparseVector generate_sparse_signal(int n, int k, double lo, double hi,
                                           std::uint64_t seed) {
  if (k < 1 || k > n) throw ConfigError("sparse signal: k out of range");
  if (!(lo > 0) || lo > hi) throw ConfigError("sparse signal: bad range");
  auto engine = make_engine(seed);
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> chosen(k);
  for (int j = 0; j < k; ++j) {
    std::uniform_int_distribution<int> pick(j, n - 1);
    std::swap(pool[j], pool[pick(engine)]);
    chosen[j] = pool[j];
  }
  std::sort(chosen.begin(), chosen.end());
  std::uniform_real_distribution<double> magnitude(lo, hi);
  std::uniform_int_distribution<int> coin(0, 1);
  Vector values(k);
  for (int j = 0; j < k; ++j) {
    const double mag = magnitude(engine);
    values[j] = coin(engine) ? mag : -mag;
  }
  Support s;
  s.idx = std::move(chosen);
  return SparseVector(n, std::move(s), std::move(values));
}

// Gaussian direction rescaled to the requested l2 norm.
inline Vector sphere_noise(int dim, double radius, std::uint64_t seed) {
  if (radius < 0) throw ConfigError("sphere noise: negative radius");
  if (radius == 0.0) return Vector::Zero(dim);
  auto engine = make_engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector g(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) g[i] = gauss(engine);
    norm = g.norm();
  } while (norm < 1e-300);
  return g * (radius / norm);
}

inline Matrix make_measurement_matrix(const GeneratorSpec& spec,
                                      std::uint64_t matrix_seed) {
  switch (spec.matrix_kind) {
    case MatrixKind::gaussian:
      return normalize_columns(gaussian_matrix(spec.m, spec.n, matrix_seed))
          .first;
    case MatrixKind::convolution:
      return gaussian_convolution_matrix(spec.n, spec.sigma);
    default:
      return random_orthonormal(spec.m, spec.n, matrix_seed);
  }
}

// Assembles a problem from a pre-built normalized matrix; signal and
// noise streams are derived from the spec seed independently of the
// matrix, so a shared matrix still gives per-run fresh instances.
inline Problem build_problem_with_matrix(Matrix a, const GeneratorSpec& spec) {
  spec.validate();
  const std::uint64_t signal_seed = sub_seed(spec.seed, 0, SeedTag::signal);
  const std::uint64_t noise_seed = sub_seed(spec.seed, 0, SeedTag::noise);
  SparseVector x_star = generate_sparse_signal(
      spec.n, spec.k, spec.amplitude_lo, spec.amplitude_hi, signal_seed);
  const Vector x_dense = x_star.densify();
  const Vector ax = a * x_dense;
  Problem p;
  p.k = spec.k;
  GroundTruth truth;
  truth.x_star = std::move(x_star);
  if (spec.noise_mode == NoiseMode::after_a) {
    const double radius = spec.noise_radius_fraction * ax.norm();
    truth.e = sphere_noise(spec.m, radius, noise_seed);
    p.y = ax + truth.e;
  } else {
    const double radius = spec.noise_radius_fraction * x_dense.norm();
    const Vector e_signal = sphere_noise(spec.n, radius, noise_seed);
    truth.e = a * e_signal;  // recorded in the measurement domain
    p.y = ax + truth.e;
  }
  p.a = std::move(a);
  p.truth = std::move(truth);
  return p;
}

inline Problem build_problem(const GeneratorSpec& spec) {
  spec.validate();
  const std::uint64_t matrix_seed = sub_seed(spec.seed, 0, SeedTag::matrix);
  return build_problem_with_matrix(make_measurement_matrix(spec, matrix_seed),
                                   spec);
}

}  // namespace sea
