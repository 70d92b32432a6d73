#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "sea/linalg.hpp"
#include "sea/rng.hpp"

using namespace sea;

TEST_CASE("normalize_columns identity and 3-4-5 column") {
  auto [id_norm, id_scales] = normalize_columns(Matrix::Identity(3, 3));
  CHECK(id_norm.isApprox(Matrix::Identity(3, 3), 1e-15));
  CHECK(id_scales.scales.isApprox(Vector::Ones(3), 1e-15));

  Matrix a(2, 1);
  a << 3, 4;
  auto [norm, scales] = normalize_columns(a);
  CHECK(norm(0, 0) == Catch::Approx(0.6).epsilon(1e-12));
  CHECK(norm(1, 0) == Catch::Approx(0.8).epsilon(1e-12));
  CHECK(scales.scales[0] == Catch::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("normalize_columns recomposition round trip") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const Matrix a = gaussian_matrix(8, 5, seed);
    auto [norm, scaling] = normalize_columns(a);
    const Matrix recomposed = norm * scaling.scales.asDiagonal();
    CHECK((recomposed - a).cwiseAbs().maxCoeff() < 1e-12);
    for (int j = 0; j < 5; ++j)
      CHECK(std::abs(norm.col(j).norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("normalize_columns rejects zero columns") {
  Matrix a = Matrix::Identity(3, 3);
  a.col(1).setZero();
  CHECK_THROWS_AS(normalize_columns(a), ZeroColumn);
}

TEST_CASE("jacobi eigenvalues against closed forms and a dense solver") {
  Matrix diag = Vector::LinSpaced(4, 1.0, 4.0).asDiagonal();
  const Vector eig = jacobi_eigenvalues(diag);
  for (int i = 0; i < 4; ++i)
    CHECK(eig[i] == Catch::Approx(i + 1.0).epsilon(1e-12));

  Matrix two(2, 2);
  two << 2, 1, 1, 2;  // eigenvalues 1 and 3
  const Vector e2 = jacobi_eigenvalues(two);
  CHECK(e2[0] == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(e2[1] == Catch::Approx(3.0).epsilon(1e-12));

  for (std::uint64_t seed : {7u, 8u, 9u}) {
    const Matrix g = gaussian_matrix(6, 6, seed);
    const Matrix sym = g + g.transpose();
    const Vector mine = jacobi_eigenvalues(sym);
    Eigen::SelfAdjointEigenSolver<Matrix> dense(sym);
    for (int i = 0; i < 6; ++i)
      CHECK(mine[i] == Catch::Approx(dense.eigenvalues()[i]).margin(1e-10));
  }
}

TEST_CASE("spectral_norm_sq exact cases") {
  CHECK(spectral_norm_sq(Matrix::Identity(4, 4)) ==
        Catch::Approx(1.0).epsilon(1e-9));
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 1, 2, 3;
  CHECK(spectral_norm_sq(d) == Catch::Approx(9.0).epsilon(1e-9));
}

TEST_CASE("spectral_norm_sq matches the dense eigenvalue oracle") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const Matrix a = gaussian_matrix(10, 6, seed);
    const Vector eig = jacobi_eigenvalues(a.transpose() * a);
    const double top = eig[eig.size() - 1];
    CHECK(spectral_norm_sq(a) == Catch::Approx(top).epsilon(1e-8));
  }
}

TEST_CASE("spectral_norm_sq dominates every probe quotient") {
  const Matrix a = gaussian_matrix(9, 7, 21);
  const double lambda = spectral_norm_sq(a);
  auto engine = make_engine(22);
  std::normal_distribution<double> gauss;
  for (int probe = 0; probe < 100; ++probe) {
    Vector v(7);
    for (int i = 0; i < 7; ++i) v[i] = gauss(engine);
    const double quotient = (a * v).squaredNorm() / v.squaredNorm();
    CHECK(quotient <= lambda * (1.0 + 1e-9));
  }
}

TEST_CASE("spectral_norm_sq reports non-convergence") {
  const Matrix a = gaussian_matrix(6, 6, 5);
  CHECK_THROWS_AS(spectral_norm_sq(a, 1e-30, 2), NoConvergence);
}

TEST_CASE("restricted least squares on the identity") {
  const Matrix a = Matrix::Identity(3, 3);
  Vector y(3);
  y << 1, 5, 2;
  Support s;
  s.idx = {1};
  const Vector x = restricted_least_squares(a, s, y);
  REQUIRE(x.size() == 1);
  CHECK(x[0] == Catch::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("restricted least squares matches direct elimination") {
  for (std::uint64_t seed : {31u, 32u, 33u, 34u}) {
    const Matrix a = normalize_columns(gaussian_matrix(12, 4, seed)).first;
    const Vector y = gaussian_matrix(12, 1, seed + 100).col(0);
    Support s;
    s.idx = {0, 2, 3};
    const Vector mine = restricted_least_squares(a, s, y);
    const Vector direct = oracles::ls_direct(a, s.idx, y);
    CHECK((mine - direct).lpNorm<Eigen::Infinity>() < 1e-8);
  }
}

TEST_CASE("restricted least squares handles duplicated columns") {
  Matrix a = normalize_columns(gaussian_matrix(6, 3, 41)).first;
  a.col(1) = a.col(0);
  const Vector y = a.col(0);
  Support s;
  s.idx = {0, 1};
  const Vector x = restricted_least_squares(a, s, y);
  Vector r = y;
  for (int j = 0; j < 2; ++j) r -= a.col(s.idx[j]) * x[j];
  CHECK(r.norm() < 1e-8);
}

TEST_CASE("restricted least squares input validation") {
  const Matrix a = Matrix::Identity(3, 3);
  Support empty;
  CHECK_THROWS_AS(restricted_least_squares(a, empty, Vector::Zero(3)),
                  EmptySupport);
  Support s;
  s.idx = {0};
  CHECK_THROWS_AS(restricted_least_squares(a, s, Vector::Zero(2)),
                  DimensionMismatch);
}

TEST_CASE("gaussian_matrix determinism and moments") {
  const Matrix a = gaussian_matrix(4, 4, 99);
  const Matrix b = gaussian_matrix(4, 4, 99);
  CHECK(a == b);
  const Matrix c = gaussian_matrix(4, 4, 100);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0);

  const Matrix big = gaussian_matrix(1000, 1000, 7);
  const double mean = big.mean();
  const double var = (big.array() - mean).square().mean();
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("convolution matrix is circulant and symmetric") {
  const Matrix a = gaussian_convolution_matrix(128, 3.0);
  CHECK((a - a.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  for (int i = 0; i < 128; ++i)
    for (int j = 0; j < 128; j += 17)
      CHECK(a(i, j) ==
            Catch::Approx(a((i + 1) % 128, (j + 1) % 128)).margin(1e-15));
  for (int j = 0; j < 128; ++j)
    CHECK(std::abs(a.col(j).norm() - 1.0) < 1e-12);
}

TEST_CASE("coherence basics") {
  CHECK(coherence(Matrix::Identity(3, 3)) == 0.0);
  Matrix dup = normalize_columns(gaussian_matrix(5, 2, 3)).first;
  Matrix both(5, 2);
  both.col(0) = dup.col(0);
  both.col(1) = dup.col(0);
  CHECK(coherence(both) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("random_orthonormal produces orthonormal columns") {
  const Matrix square = random_orthonormal(4, 4, 17);
  CHECK((square.transpose() * square - Matrix::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  const Matrix tall = random_orthonormal(8, 3, 18);
  CHECK((tall.transpose() * tall - Matrix::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  CHECK(random_orthonormal(8, 3, 18) == tall);
}
