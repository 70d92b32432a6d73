#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "sea/common.hpp"
#include "sea/linalg.hpp"
#include "sea/problem.hpp"
#include "sea/solvers.hpp"
#include "sea/support.hpp"

namespace sea {

inline double combination_count(int n, int l) {
  double count = 1.0;
  for (int i = 0; i < l; ++i) {
    count *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (count > 1e18) return kInf;
  }
  return count;
}

inline constexpr double kRipEnumerationCap = 2e6;

// Exhaustive order-l restricted isometry constant: max over all size-l
// supports of the Gram spectrum's deviation from 1, eigenvalues by the
// dense Jacobi sweep. Exact by enumeration, hence the hard cap; beyond
// it the caller must mark the order as not computed rather than guess.
inline double rip_constant(const Matrix& a, int l,
                           double cap = kRipEnumerationCap) {
  const int n = static_cast<int>(a.cols());
  if (l < 1 || l > n) throw ConfigError("rip_constant: order out of range");
  if (combination_count(n, l) > cap)
    throw TooLarge("rip_constant: too many supports to enumerate");
  std::vector<int> comb(l);
  for (int i = 0; i < l; ++i) comb[i] = i;
  double delta = 0.0;
  while (true) {
    Matrix gram(l, l);
    for (int p = 0; p < l; ++p)
      for (int q = 0; q <= p; ++q) {
        gram(p, q) = a.col(comb[p]).dot(a.col(comb[q]));
        gram(q, p) = gram(p, q);
      }
    const Vector eig = jacobi_eigenvalues(gram);
    delta = std::max(delta, std::max(eig[l - 1] - 1.0, 1.0 - eig[0]));
    int pos = l - 1;
    while (pos >= 0 && comb[pos] == n - l + pos) --pos;
    if (pos < 0) break;
    ++comb[pos];
    for (int i = pos + 1; i < l; ++i) comb[i] = comb[i - 1] + 1;
  }
  return delta;
}

// Gradient-noise constants. With delta_l the order-l restricted isometry
// constants of the column-normalized A, x the least-squares fit on a
// size-k support S, and u/eta equal to -x* on S* \ S and zero elsewhere:
//
//   ||(x - x*)_S||_2 <= delta_2k/(1 - delta_k) * ||u||_2/eta
//                       + sqrt(1 + delta_k)/(1 - delta_k) * ||e||_2,
//
// since (A_S^T A_S)^{-1} has spectral norm <= 1/(1 - delta_k), the
// cross-Gram of disjoint supports is bounded by the joint-order delta,
// and ||A_S^T e|| <= sqrt(1 + delta_k) ||e||. Entrywise, the gap between
// the accumulated-gradient step and the missed-entry push obeys
//
//   |u_i/eta - (A^T(Ax - y))_i| <= delta_{2k+1} (||(x - x*)_S|| + ||u||/eta)
//                                  + ||e||_2,
//
// and ||u||_2/eta <= ||x*||_2 collapses the chain to
//
//   alpha = delta_{2k+1} (1 + delta_2k/(1 - delta_k)),
//   gamma = 1 + delta_{2k+1} sqrt(1 + delta_k)/(1 - delta_k),
//
// so that ||u/eta - A^T(Ax - y)||_inf <= alpha ||x*||_2 + gamma ||e||_2.
// For delta_k <= 1/2 (and delta_2k <= delta_{2k+1} < 1) these sit in the
// bands delta_{2k+1} <= alpha <= 3 delta_{2k+1} and
// (1 + delta_{2k+1}) <= gamma <= sqrt(6) (1 + delta_{2k+1}).
inline std::pair<double, double> alpha_gamma(double delta_k, double delta_2k,
                                             double delta_2k1) {
  if (delta_k >= 1.0)
    throw DegenerateRIP("alpha_gamma: delta_k >= 1");
  const double alpha = delta_2k1 * (1.0 + delta_2k / (1.0 - delta_k));
  const double gamma =
      1.0 + delta_2k1 * std::sqrt(1.0 + delta_k) / (1.0 - delta_k);
  return {alpha, gamma};
}

inline double min_abs_on_support(const SparseVector& x_star) {
  double lo = kInf;
  for (int j = 0; j < x_star.values.size(); ++j)
    lo = std::min(lo, std::abs(x_star.values[j]));
  return lo;
}

inline bool check_hrip(const SparseVector& x_star, double e_norm, double alpha,
                       double gamma, int k) {
  const double lo = min_abs_on_support(x_star);
  return gamma * e_norm < lo / (2.0 * k) - alpha * x_star.values.norm();
}

inline std::pair<double, bool> check_hsrip(const SparseVector& x_star,
                                           double alpha, int k) {
  const double lo = min_abs_on_support(x_star);
  const double tau = 2.0 * k * alpha * x_star.values.norm() / lo;
  return {tau, tau < 1.0};
}

inline bool check_rc(double eps_max, double eta, const SparseVector& x_star,
                     int k) {
  return eps_max < eta / (2.0 * k) * min_abs_on_support(x_star);
}

inline bool check_min_condition(const SparseVector& x_star, double e_norm,
                                double delta_2k) {
  if (delta_2k >= 1.0) return false;
  return min_abs_on_support(x_star) >
         2.0 / std::sqrt(1.0 - delta_2k) * e_norm;
}

struct IterationBounds {
  double t_oracle = kInf;
  double t_max = kInf;
  double t_rip = kInf;
  double t_srip = kInf;
};

inline IterationBounds iteration_bounds(int k, double x0_inf_norm, double eta,
                                        double min_xstar, double eps_max,
                                        double alpha, double gamma,
                                        double xstar_norm, double e_norm,
                                        double tau) {
  IterationBounds b;
  if (min_xstar > 0 && eta > 0)
    b.t_oracle = k * (1.0 + 2.0 * x0_inf_norm / (eta * min_xstar));
  const double denom_max = eta * min_xstar - 2.0 * k * eps_max;
  if (denom_max > 0)
    b.t_max =
        (2.0 * k * x0_inf_norm + (k + 1) * eta * min_xstar) / denom_max;
  const double denom_rip =
      min_xstar - 2.0 * k * (alpha * xstar_norm + gamma * e_norm);
  if (denom_rip > 0)
    b.t_rip =
        (2.0 * k * x0_inf_norm / eta + (k + 1) * min_xstar) / denom_rip;
  if (tau < 1.0) b.t_srip = (k + 1) / (1.0 - tau);
  return b;
}

struct SharpBound {
  bool rc_prime_holds = false;
  double t_max_sharp = kInf;
};

// Sharper visit bound using the per-entry magnitudes of x* instead of
// their minimum.
inline SharpBound sharp_iteration_bound(const SparseVector& x_star,
                                        const Vector& x0, int k, double eta,
                                        double eps_max) {
  SharpBound out;
  double sum_inv = 0.0;
  for (int j = 0; j < x_star.values.size(); ++j) {
    const double mag = std::abs(x_star.values[j]);
    if (!(mag > 0)) return out;
    sum_inv += 1.0 / (eta * mag);
  }
  out.rc_prime_holds = eps_max < 1.0 / (2.0 * sum_inv);
  double off_max = 0.0;
  for (int i = 0; i < x0.size(); ++i)
    if (!x_star.support.contains(i))
      off_max = std::max(off_max, std::abs(x0[i]));
  double numerator = k + 1.0;
  for (int j = 0; j < x_star.support.size(); ++j) {
    const int i = x_star.support.idx[j];
    numerator += (off_max + std::abs(x0[i])) /
                 (eta * std::abs(x_star.values[j]));
  }
  const double denom = 1.0 - 2.0 * eps_max * sum_inv;
  if (denom > 0) out.t_max_sharp = numerator / denom;
  return out;
}

struct GradientNoiseStep {
  double eps = 0.0;            // ||b^t||_inf
  double on_support_max = 0.0; // max |b_i| over i in S^t
  bool lemma_bound_ok = true;  // eps/eta <= alpha||x*|| + gamma||e||
};

struct GradientNoiseReport {
  double eps_max = 0.0;
  bool annihilation_ok = true;  // on-support entries below 1e-9 ||A^T y||_inf
  bool lemma_bound_ok = true;
  std::vector<GradientNoiseStep> per_t;
};

// Recomputes the idealized update u^t and the gap b^t = u^t - eta *
// grad(x^t) along a recorded support sequence.
inline GradientNoiseReport check_gradient_noise(
    const Problem& p, const std::vector<Support>& support_sequence, double eta,
    std::optional<std::pair<double, double>> constants = std::nullopt,
    double ls_tol = 1e-10, int ls_iter_mult = 4) {
  if (!p.truth)
    throw MissingGroundTruth("gradient noise check needs ground truth");
  const SparseVector& x_star = p.truth->x_star;
  const double xstar_norm = x_star.values.norm();
  const double e_norm = p.truth->e.norm();
  const double grad_scale =
      (p.a.transpose() * p.y).lpNorm<Eigen::Infinity>();
  GradientNoiseReport report;
  report.per_t.reserve(support_sequence.size());
  for (const Support& s : support_sequence) {
    const SupportEval ev =
        evaluate_ls_support(p.a, p.y, s, ls_tol, ls_iter_mult);
    Vector b = -eta * ev.grad;
    for (int j = 0; j < x_star.support.size(); ++j) {
      const int i = x_star.support.idx[j];
      if (!s.contains(i)) b[i] -= eta * x_star.values[j];
    }
    GradientNoiseStep step;
    step.eps = b.lpNorm<Eigen::Infinity>();
    for (int i : s.idx)
      step.on_support_max = std::max(step.on_support_max, std::abs(b[i]));
    if (constants)
      step.lemma_bound_ok =
          step.eps / eta <=
          constants->first * xstar_norm + constants->second * e_norm + 1e-12;
    report.eps_max = std::max(report.eps_max, step.eps);
    if (step.on_support_max > 1e-9 * std::max(grad_scale, 1e-300))
      report.annihilation_ok = false;
    report.lemma_bound_ok = report.lemma_bound_ok && step.lemma_bound_ok;
    report.per_t.push_back(step);
  }
  return report;
}

struct ClosedFormReport {
  double max_rel_error = 0.0;  // ||X^t - closed form||_inf / (1 + ||X^t||_inf)
  bool counting_ok = true;     // sum_{i in S*} c_i^t >= t up to t_s
  bool supports_consistent = true;  // replayed selector matches the trace
  long t_s = -1;                    // first t with S* covered
};

// Replays the exploration trajectory from a support sequence and checks
// it against X^t = X0 + eta * c^t . x* + B^t, where c counts missed
// true-support selections and B accumulates the gradient noise.
inline ClosedFormReport counting_and_closed_form(
    const Problem& p, const std::vector<Support>& support_sequence, double eta,
    const Vector& x0, double ls_tol = 1e-10, int ls_iter_mult = 4) {
  if (!p.truth)
    throw MissingGroundTruth("closed-form check needs ground truth");
  const SparseVector& x_star = p.truth->x_star;
  const Vector xs_dense = x_star.densify();
  const int n = p.cols();
  if (x0.size() != n)
    throw DimensionMismatch("closed-form check: X0 has wrong length");
  ClosedFormReport report;
  Vector grad_sum = Vector::Zero(n);
  Vector x_explore = x0;
  Vector counting = Vector::Zero(n);
  Vector noise_acc = Vector::Zero(n);
  long t = 0;
  for (const Support& s : support_sequence) {
    if (largest_k(x_explore, p.k) != s) report.supports_consistent = false;
    const Vector closed =
        x0 + eta * counting.cwiseProduct(xs_dense) + noise_acc;
    const double rel =
        (x_explore - closed).lpNorm<Eigen::Infinity>() /
        (1.0 + x_explore.lpNorm<Eigen::Infinity>());
    report.max_rel_error = std::max(report.max_rel_error, rel);
    if (report.t_s < 0 && x_star.support.is_subset_of(s)) report.t_s = t;
    if (report.t_s < 0 || t <= report.t_s) {
      double covered = 0.0;
      for (int i : x_star.support.idx) covered += counting[i];
      if (covered < static_cast<double>(t)) report.counting_ok = false;
    }
    const SupportEval ev =
        evaluate_ls_support(p.a, p.y, s, ls_tol, ls_iter_mult);
    Vector b = -eta * ev.grad;
    for (int j = 0; j < x_star.support.size(); ++j) {
      const int i = x_star.support.idx[j];
      if (!s.contains(i)) {
        b[i] -= eta * x_star.values[j];
        counting[i] += 1.0;
      }
    }
    noise_acc += b;
    grad_sum += ev.grad;
    x_explore = x0 - eta * grad_sum;
    ++t;
  }
  return report;
}

struct TheoryReport {
  std::map<int, double> delta;       // order -> exhaustive constant
  std::vector<int> delta_skipped;    // orders past the enumeration cap
  double alpha_k = std::numeric_limits<double>::quiet_NaN();
  double gamma_k = std::numeric_limits<double>::quiet_NaN();
  bool hrip_holds = false;
  bool hsrip_holds = false;
  bool hr_holds = false;
  bool min_cond_holds = false;
  bool rc_prime_holds = false;
  double tau = std::numeric_limits<double>::quiet_NaN();
  IterationBounds bounds;
  double t_max_sharp = kInf;
  double eps_max = std::numeric_limits<double>::quiet_NaN();
  bool annihilation_ok = false;
  bool lemma_bound_ok = false;
  double closed_form_max_rel_error =
      std::numeric_limits<double>::quiet_NaN();
  bool counting_ok = false;
  bool supports_consistent = false;
  long t_s = -1;
};

// Full numerical certification of a recorded run: exhaustive constants
// where enumeration is feasible, measured gradient noise, all recovery
// conditions, and the visit bounds.
inline TheoryReport certify(const Problem& p,
                            const std::vector<Support>& support_sequence,
                            double eta, const Vector& x0,
                            double rip_cap = kRipEnumerationCap) {
  if (!p.truth) throw MissingGroundTruth("certification needs ground truth");
  const SparseVector& x_star = p.truth->x_star;
  const int k = p.k;
  TheoryReport report;
  for (int order : {k, 2 * k, 2 * k + 1}) {
    if (order > p.cols()) {
      report.delta_skipped.push_back(order);
      continue;
    }
    if (report.delta.count(order)) continue;
    try {
      report.delta[order] = rip_constant(p.a, order, rip_cap);
    } catch (const TooLarge&) {
      report.delta_skipped.push_back(order);
    }
  }
  const GradientNoiseReport noise =
      check_gradient_noise(p, support_sequence, eta);
  report.eps_max = noise.eps_max;
  report.annihilation_ok = noise.annihilation_ok;
  const ClosedFormReport closed =
      counting_and_closed_form(p, support_sequence, eta, x0);
  report.closed_form_max_rel_error = closed.max_rel_error;
  report.counting_ok = closed.counting_ok;
  report.supports_consistent = closed.supports_consistent;
  report.t_s = closed.t_s;
  const double min_xstar = min_abs_on_support(x_star);
  const double xstar_norm = x_star.values.norm();
  const double e_norm = p.truth->e.norm();
  const double x0_inf = x0.lpNorm<Eigen::Infinity>();
  report.hr_holds = check_rc(noise.eps_max, eta, x_star, k);
  double tau = std::numeric_limits<double>::quiet_NaN();
  if (report.delta.count(k) && report.delta.count(2 * k) &&
      report.delta.count(2 * k + 1) && report.delta[k] < 1.0) {
    const auto [alpha, gamma] = alpha_gamma(
        report.delta[k], report.delta[2 * k], report.delta[2 * k + 1]);
    report.alpha_k = alpha;
    report.gamma_k = gamma;
    report.hrip_holds = check_hrip(x_star, e_norm, alpha, gamma, k);
    const auto [tau_value, holds] = check_hsrip(x_star, alpha, k);
    report.tau = tau_value;
    report.hsrip_holds = holds;
    tau = tau_value;
    const GradientNoiseReport bounded = check_gradient_noise(
        p, support_sequence, eta, std::make_pair(alpha, gamma));
    report.lemma_bound_ok = bounded.lemma_bound_ok;
  }
  if (report.delta.count(2 * k))
    report.min_cond_holds =
        check_min_condition(x_star, e_norm, report.delta[2 * k]);
  report.bounds = iteration_bounds(
      k, x0_inf, eta, min_xstar, noise.eps_max, report.alpha_k,
      report.gamma_k, xstar_norm, e_norm, tau);
  const SharpBound sharp =
      sharp_iteration_bound(x_star, x0, k, eta, noise.eps_max);
  report.rc_prime_holds = sharp.rc_prime_holds;
  report.t_max_sharp = sharp.t_max_sharp;
  return report;
}

}  // namespace sea
