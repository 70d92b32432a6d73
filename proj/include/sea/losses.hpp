#pragma once

#include <cmath>

#include "sea/common.hpp"
#include "sea/linalg.hpp"
#include "sea/support.hpp"

namespace sea {

enum class LossKind { least_squares, logistic };

// Smooth data-fit model. For logistic, y entries must be 0/1 labels.
struct LossModel {
  LossKind kind = LossKind::least_squares;
  Matrix a;
  Vector y;

  void validate() const {
    if (kind == LossKind::logistic)
      for (int i = 0; i < y.size(); ++i)
        if (y[i] != 0.0 && y[i] != 1.0)
          throw ConfigError("logistic loss: labels must be 0 or 1");
  }
};

// A_S x_S accumulated column by column; the shared kernel for every
// sparse-iterate evaluation, so alternate code paths agree bitwise.
inline Vector apply_columns(const Matrix& a, const Support& s,
                            const Vector& xs) {
  Vector out = Vector::Zero(a.rows());
  for (int j = 0; j < s.size(); ++j) out.noalias() += a.col(s.idx[j]) * xs[j];
  return out;
}

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// -y log(sigma(z)) - (1-y) log(1-sigma(z)), evaluated without overflow.
inline double logistic_term(double z, double y) {
  return std::max(z, 0.0) - y * z + std::log1p(std::exp(-std::abs(z)));
}

inline double logistic_loss_from_scores(const Vector& z, const Vector& y) {
  double total = 0.0;
  for (int i = 0; i < z.size(); ++i) total += logistic_term(z[i], y[i]);
  return total;
}

inline double loss_value(const LossModel& model, const Vector& x) {
  if (x.size() != model.a.cols())
    throw DimensionMismatch("loss_value: x has wrong length");
  const Vector z = model.a * x;
  if (model.kind == LossKind::least_squares)
    return 0.5 * (z - model.y).squaredNorm();
  return logistic_loss_from_scores(z, model.y);
}

inline Vector loss_gradient(const LossModel& model, const Vector& x) {
  if (x.size() != model.a.cols())
    throw DimensionMismatch("loss_gradient: x has wrong length");
  const Vector z = model.a * x;
  if (model.kind == LossKind::least_squares)
    return model.a.transpose() * (z - model.y);
  Vector p(z.size());
  for (int i = 0; i < z.size(); ++i) p[i] = sigmoid(z[i]);
  return model.a.transpose() * (p - model.y);
}

struct RestrictedMinimizeResult {
  Vector x;               // coefficients on the support, |S| entries
  bool converged = true;  // gradient tolerance reached
  bool cap_hit = false;   // parameter-norm safeguard triggered
};

inline constexpr double kLogisticParamCap = 1e3;

// argmin of the loss restricted to S. Least squares delegates to the CG
// solver; logistic runs damped Newton on the |S|-dimensional restriction.
// Separable restrictions have no finite minimizer, hence the norm cap.
inline RestrictedMinimizeResult restricted_minimize(const LossModel& model,
                                                    const Support& s,
                                                    double tol = 1e-8,
                                                    int max_iter = 100) {
  if (s.empty()) throw EmptySupport("restricted_minimize: empty support");
  for (int i : s.idx)
    if (i < 0 || i >= model.a.cols())
      throw DimensionMismatch("restricted_minimize: index out of range");
  RestrictedMinimizeResult result;
  if (model.kind == LossKind::least_squares) {
    result.x = restricted_least_squares(model.a, s, model.y, tol, max_iter);
    return result;
  }
  const Matrix as = submatrix(model.a, s);
  const int k = s.size();
  Vector w = Vector::Zero(k);
  auto value_at = [&](const Vector& wt) {
    return logistic_loss_from_scores(as * wt, model.y);
  };
  double current = value_at(w);
  result.converged = false;
  for (int it = 0; it < max_iter; ++it) {
    const Vector z = as * w;
    Vector p(z.size());
    for (int i = 0; i < z.size(); ++i) p[i] = sigmoid(z[i]);
    const Vector grad = as.transpose() * (p - model.y);
    if (grad.norm() <= tol) {
      result.converged = true;
      break;
    }
    Matrix hessian = as.transpose() *
                     (p.array() * (1.0 - p.array())).matrix().asDiagonal() *
                     as;
    hessian.diagonal().array() += 1e-12;
    Vector step = hessian.ldlt().solve(-grad);
    if (!step.allFinite()) step = -grad;
    double t = 1.0;
    double next = value_at(w + t * step);
    while (next > current && t > 1e-12) {
      t *= 0.5;
      next = value_at(w + t * step);
    }
    if (next > current) break;
    w += t * step;
    current = next;
    if (w.lpNorm<Eigen::Infinity>() > kLogisticParamCap) {
      result.cap_hit = true;
      break;
    }
  }
  result.x = std::move(w);
  return result;
}

}  // namespace sea
