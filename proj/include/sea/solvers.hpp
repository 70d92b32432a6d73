#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sea/common.hpp"
#include "sea/losses.hpp"
#include "sea/problem.hpp"
#include "sea/support.hpp"

namespace sea {

enum class EtaMode { spectral_sq, spectral };

struct SolverConfig {
  double eta = std::numeric_limits<double>::quiet_NaN();  // NaN: use 1.8/L
  int max_iter = 0;                                       // <=0: 256*k
  std::optional<Vector> init;                             // exploration start
  std::uint64_t seed = 0;                                 // random search only
  bool record_trace = false;
  bool record_support_sequence = false;
  double ls_tol = 1e-10;
  int ls_iter_mult = 4;  // CG budget = mult * |S|
  EtaMode eta_mode = EtaMode::spectral_sq;
};

struct NewSupportRecord {
  int t = 0;
  Support support;
  double loss = 0.0;
};

struct Trace {
  std::vector<double> per_iteration_loss;
  std::vector<NewSupportRecord> per_new_support;
  std::vector<Support> support_sequence;
  std::vector<double> step_sizes;  // adaptive-step solvers only
};

struct SolverResult {
  SparseVector x_best;
  int t_best = 0;
  double loss_best = kInf;
  int iterations_run = 0;
  long supports_explored = 0;
  long supports_after_init = 0;
  long ls_solves = 0;
  double eta_used = 0.0;
  std::optional<Trace> trace;
};

inline double default_step_size(const Matrix& a,
                                EtaMode mode = EtaMode::spectral_sq) {
  double lip = spectral_norm_sq(a);
  if (mode == EtaMode::spectral) lip = std::sqrt(lip);
  return 1.8 / lip;
}

inline double resolve_eta(const SolverConfig& cfg, const Matrix& a) {
  return std::isnan(cfg.eta) ? default_step_size(a, cfg.eta_mode) : cfg.eta;
}

inline int resolve_max_iter(const SolverConfig& cfg, int k) {
  return cfg.max_iter > 0 ? cfg.max_iter : 256 * k;
}

inline Vector resolve_init(const SolverConfig& cfg, int n) {
  if (!cfg.init) return Vector::Zero(n);
  if (cfg.init->size() != n)
    throw DimensionMismatch("solver init has wrong length");
  return *cfg.init;
}

struct SupportEval {
  Vector xs;    // fitted coefficients on the support
  double loss = 0.0;
  Vector grad;  // full objective gradient at the sparse iterate
};

// One shared evaluation kernel so dedicated and generalized paths agree
// bitwise on least squares.
inline SupportEval evaluate_ls_support(const Matrix& a, const Vector& y,
                                       const Support& s, double tol,
                                       int iter_mult) {
  SupportEval ev;
  ev.xs = restricted_least_squares(a, s, y, tol, iter_mult * s.size());
  const Vector r = apply_columns(a, s, ev.xs) - y;
  ev.loss = 0.5 * r.squaredNorm();
  ev.grad = a.transpose() * r;
  return ev;
}

struct LeastSquaresObjective {
  const Matrix& a;
  const Vector& y;
  double ls_tol;
  int ls_iter_mult;

  int dim() const { return static_cast<int>(a.cols()); }
  SupportEval evaluate(const Support& s) const {
    return evaluate_ls_support(a, y, s, ls_tol, ls_iter_mult);
  }
};

struct GeneralObjective {
  const LossModel& model;
  double ls_tol;
  int ls_iter_mult;
  double inner_tol = 1e-8;
  int inner_iter = 100;

  int dim() const { return static_cast<int>(model.a.cols()); }
  SupportEval evaluate(const Support& s) const {
    if (model.kind == LossKind::least_squares)
      return evaluate_ls_support(model.a, model.y, s, ls_tol, ls_iter_mult);
    SupportEval ev;
    ev.xs = restricted_minimize(model, s, inner_tol, inner_iter).x;
    const Vector z = apply_columns(model.a, s, ev.xs);
    ev.loss = logistic_loss_from_scores(z, model.y);
    Vector p(z.size());
    for (int i = 0; i < z.size(); ++i) p[i] = sigmoid(z[i]);
    ev.grad = model.a.transpose() * (p - model.y);
    return ev;
  }
};

namespace detail {

struct BestTracker {
  double loss = kInf;
  int t = -1;
  Support support;
  Vector xs;

  void offer(int iteration, const Support& s, const Vector& values,
             double value) {
    if (value < loss) {
      loss = value;
      t = iteration;
      support = s;
      xs = values;
    }
  }
};

inline Vector dense_from(int n, const Support& s, const Vector& xs) {
  Vector out = Vector::Zero(n);
  for (int j = 0; j < s.size(); ++j) out[s.idx[j]] = xs[j];
  return out;
}

// The exploration variable is kept as X^t = X0 - eta * (sum of raw
// gradients). Algebraically identical to the per-step update; keeps the
// support path independent of eta when X0 = 0.
template <class Objective>
SolverResult sea_core(const Objective& obj, int k, double eta, int max_iter,
                      const Vector& x0, bool memoize,
                      const SolverConfig& cfg) {
  const int n = obj.dim();
  if (k < 1 || k > n) throw ConfigError("sea: k out of range");
  if (max_iter < 1) throw ConfigError("sea: max_iter < 1");
  SolverResult res;
  res.eta_used = eta;
  Trace trace;
  std::map<std::vector<int>, SupportEval> memo;
  std::set<std::vector<int>> seen;
  BestTracker best;
  Vector grad_sum = Vector::Zero(n);
  Vector x_explore = x0;
  for (int t = 0; t < max_iter; ++t) {
    const Support s = largest_k(x_explore, k);
    const SupportEval* ev = nullptr;
    SupportEval fresh;
    bool is_new = false;
    if (memoize) {
      auto it = memo.find(s.idx);
      if (it == memo.end()) {
        ++res.ls_solves;
        it = memo.emplace(s.idx, obj.evaluate(s)).first;
        is_new = true;
      }
      ev = &it->second;
    } else {
      ++res.ls_solves;
      fresh = obj.evaluate(s);
      is_new = seen.insert(s.idx).second;
      ev = &fresh;
    }
    best.offer(t, s, ev->xs, ev->loss);
    if (cfg.record_trace) {
      trace.per_iteration_loss.push_back(ev->loss);
      if (is_new) trace.per_new_support.push_back({t, s, ev->loss});
    }
    if (cfg.record_support_sequence) trace.support_sequence.push_back(s);
    grad_sum += ev->grad;
    x_explore = x0 - eta * grad_sum;
  }
  res.x_best = SparseVector(n, best.support, best.xs);
  res.t_best = best.t;
  res.loss_best = best.loss;
  res.iterations_run = max_iter;
  res.supports_explored =
      memoize ? static_cast<long>(memo.size()) : static_cast<long>(seen.size());
  res.supports_after_init = res.supports_explored;
  if (cfg.record_trace || cfg.record_support_sequence)
    res.trace = std::move(trace);
  return res;
}

}  // namespace detail

inline SolverResult sea(const Problem& p, const SolverConfig& cfg) {
  LeastSquaresObjective obj{p.a, p.y, cfg.ls_tol, cfg.ls_iter_mult};
  return detail::sea_core(obj, p.k, resolve_eta(cfg, p.a),
                          resolve_max_iter(cfg, p.k),
                          resolve_init(cfg, p.cols()), /*memoize=*/false, cfg);
}

inline SolverResult sea_efficient(const Problem& p, const SolverConfig& cfg) {
  LeastSquaresObjective obj{p.a, p.y, cfg.ls_tol, cfg.ls_iter_mult};
  return detail::sea_core(obj, p.k, resolve_eta(cfg, p.a),
                          resolve_max_iter(cfg, p.k),
                          resolve_init(cfg, p.cols()), /*memoize=*/true, cfg);
}

inline SolverResult sea_generalized(const LossModel& model, int k,
                                    const SolverConfig& cfg) {
  model.validate();
  GeneralObjective obj{model, cfg.ls_tol, cfg.ls_iter_mult};
  return detail::sea_core(obj, k, resolve_eta(cfg, model.a),
                          resolve_max_iter(cfg, k),
                          resolve_init(cfg, static_cast<int>(model.a.cols())),
                          /*memoize=*/true, cfg);
}

// Exploration driven by the idealized update that pushes the missed
// true-support entries directly; halts once the true support is covered.
inline SolverResult oracle_sea(const Problem& p, const SolverConfig& cfg) {
  if (!p.truth) throw MissingGroundTruth("oracle sea: problem has no truth");
  const SparseVector& x_star = p.truth->x_star;
  const Support& s_star = x_star.support;
  double min_abs = kInf;
  for (int j = 0; j < x_star.values.size(); ++j)
    min_abs = std::min(min_abs, std::abs(x_star.values[j]));
  if (!(min_abs > 0))
    throw ConfigError("oracle sea: ground-truth values must be nonzero");
  const int n = p.cols();
  const double eta = resolve_eta(cfg, p.a);
  Vector x_explore = resolve_init(cfg, n);
  const double bound =
      s_star.size() *
      (1.0 + 2.0 * x_explore.lpNorm<Eigen::Infinity>() / (eta * min_abs));
  const long cap = static_cast<long>(std::ceil(bound)) + p.k + 16;
  SolverResult res;
  res.eta_used = eta;
  Trace trace;
  std::set<std::vector<int>> seen;
  long t = 0;
  Support s;
  while (true) {
    s = largest_k(x_explore, p.k);
    seen.insert(s.idx);
    if (cfg.record_support_sequence) trace.support_sequence.push_back(s);
    if (s_star.is_subset_of(s)) break;
    for (int j = 0; j < s_star.size(); ++j) {
      const int i = s_star.idx[j];
      if (!s.contains(i)) x_explore[i] += eta * x_star.values[j];
    }
    ++t;
    if (t > cap)
      throw NoConvergence("oracle sea: exceeded its iteration bound");
  }
  SupportEval ev = evaluate_ls_support(p.a, p.y, s, cfg.ls_tol,
                                       cfg.ls_iter_mult);
  ++res.ls_solves;
  res.x_best = SparseVector(n, s, ev.xs);
  res.t_best = static_cast<int>(t);
  res.loss_best = ev.loss;
  res.iterations_run = static_cast<int>(t) + 1;
  res.supports_explored = static_cast<long>(seen.size());
  res.supports_after_init = res.supports_explored;
  if (cfg.record_trace) {
    trace.per_iteration_loss.push_back(ev.loss);
    trace.per_new_support.push_back({res.t_best, s, ev.loss});
  }
  if (cfg.record_trace || cfg.record_support_sequence)
    res.trace = std::move(trace);
  return res;
}

inline SolverResult iht(const Problem& p, const SolverConfig& cfg) {
  const int n = p.cols();
  const double eta = resolve_eta(cfg, p.a);
  const int max_iter = resolve_max_iter(cfg, p.k);
  Vector x_explore = resolve_init(cfg, n);
  SolverResult res;
  res.eta_used = eta;
  Trace trace;
  detail::BestTracker best;
  std::set<std::vector<int>> seen;
  for (int t = 0; t < max_iter; ++t) {
    const Support s = largest_k(x_explore, p.k);
    Vector xs(s.size());
    for (int j = 0; j < s.size(); ++j) xs[j] = x_explore[s.idx[j]];
    const Vector r = apply_columns(p.a, s, xs) - p.y;
    const double loss = 0.5 * r.squaredNorm();
    const bool is_new = seen.insert(s.idx).second;
    best.offer(t, s, xs, loss);
    if (cfg.record_trace) {
      trace.per_iteration_loss.push_back(loss);
      if (is_new) trace.per_new_support.push_back({t, s, loss});
    }
    if (cfg.record_support_sequence) trace.support_sequence.push_back(s);
    const Vector grad = p.a.transpose() * r;
    x_explore = detail::dense_from(n, s, xs) - eta * grad;
  }
  res.x_best = SparseVector(n, best.support, best.xs);
  res.t_best = best.t;
  res.loss_best = best.loss;
  res.iterations_run = max_iter;
  res.supports_explored = static_cast<long>(seen.size());
  res.supports_after_init = res.supports_explored;
  if (cfg.record_trace || cfg.record_support_sequence)
    res.trace = std::move(trace);
  return res;
}

// IHT with the adaptive step eta_t = ||g_S||^2 / ||A g_S||^2. When the
// proposed support differs from the current one, the step is halved
// while eta_t > 0.99 ||x - x'||^2 / ||A(x - x')||^2; a same-support
// proposal is the exact line-search step and is accepted as is. A
// vanishing denominator reuses the previous step instead of failing.
inline SolverResult niht(const Problem& p, const SolverConfig& cfg) {
  const int n = p.cols();
  const int max_iter = resolve_max_iter(cfg, p.k);
  Vector x_explore = resolve_init(cfg, n);
  double eta_prev = std::isnan(cfg.eta) ? 1.0 : cfg.eta;
  SolverResult res;
  Trace trace;
  detail::BestTracker best;
  std::set<std::vector<int>> seen;
  for (int t = 0; t < max_iter; ++t) {
    const Support s = largest_k(x_explore, p.k);
    Vector xs(s.size());
    for (int j = 0; j < s.size(); ++j) xs[j] = x_explore[s.idx[j]];
    const Vector x_dense = detail::dense_from(n, s, xs);
    const Vector r = p.y - apply_columns(p.a, s, xs);
    const double loss = 0.5 * r.squaredNorm();
    const bool is_new = seen.insert(s.idx).second;
    best.offer(t, s, xs, loss);
    if (cfg.record_trace) {
      trace.per_iteration_loss.push_back(loss);
      if (is_new) trace.per_new_support.push_back({t, s, loss});
    }
    if (cfg.record_support_sequence) trace.support_sequence.push_back(s);
    const Vector g = p.a.transpose() * r;
    Vector gs(s.size());
    for (int j = 0; j < s.size(); ++j) gs[j] = g[s.idx[j]];
    const double num = gs.squaredNorm();
    const double den = apply_columns(p.a, s, gs).squaredNorm();
    double eta_t = den <= 1e-300 ? eta_prev : num / den;
    Vector x_next = x_dense + eta_t * g;
    while (true) {
      const Support s_next = largest_k(x_next, p.k);
      if (s_next == s) break;
      Vector xs_next(s_next.size());
      for (int j = 0; j < s_next.size(); ++j)
        xs_next[j] = x_next[s_next.idx[j]];
      const Vector d = x_dense - detail::dense_from(n, s_next, xs_next);
      const double dsq = d.squaredNorm();
      if (dsq == 0.0) break;
      const double adsq = (p.a * d).squaredNorm();
      if (adsq <= 1e-300) break;
      if (eta_t <= 0.99 * dsq / adsq || eta_t < 1e-300) break;
      eta_t *= 0.5;
      x_next = x_dense + eta_t * g;
    }
    if (cfg.record_trace) trace.step_sizes.push_back(eta_t);
    x_explore = x_next;
    eta_prev = eta_t;
  }
  res.eta_used = eta_prev;
  res.x_best = SparseVector(n, best.support, best.xs);
  res.t_best = best.t;
  res.loss_best = best.loss;
  res.iterations_run = max_iter;
  res.supports_explored = static_cast<long>(seen.size());
  res.supports_after_init = res.supports_explored;
  if (cfg.record_trace || cfg.record_support_sequence)
    res.trace = std::move(trace);
  return res;
}

inline SolverResult htp(const Problem& p, const SolverConfig& cfg) {
  const int n = p.cols();
  const double eta = resolve_eta(cfg, p.a);
  const int max_iter = resolve_max_iter(cfg, p.k);
  Vector x_explore = resolve_init(cfg, n);
  SolverResult res;
  res.eta_used = eta;
  Trace trace;
  detail::BestTracker best;
  std::set<std::vector<int>> seen;
  std::optional<Support> previous;
  int t = 0;
  for (; t < max_iter; ++t) {
    const Support s = largest_k(x_explore, p.k);
    const SupportEval ev =
        evaluate_ls_support(p.a, p.y, s, cfg.ls_tol, cfg.ls_iter_mult);
    ++res.ls_solves;
    const bool is_new = seen.insert(s.idx).second;
    best.offer(t, s, ev.xs, ev.loss);
    if (cfg.record_trace) {
      trace.per_iteration_loss.push_back(ev.loss);
      if (is_new) trace.per_new_support.push_back({t, s, ev.loss});
    }
    if (cfg.record_support_sequence) trace.support_sequence.push_back(s);
    if (previous && s == *previous) {
      ++t;  // the stabilized support counts as the final iteration
      break;
    }
    previous = s;
    x_explore = detail::dense_from(n, s, ev.xs) - eta * ev.grad;
  }
  res.x_best = SparseVector(n, best.support, best.xs);
  res.t_best = best.t;
  res.loss_best = best.loss;
  res.iterations_run = t;
  res.supports_explored = static_cast<long>(seen.size());
  res.supports_after_init = res.supports_explored;
  if (cfg.record_trace || cfg.record_support_sequence)
    res.trace = std::move(trace);
  return res;
}

namespace detail {

// argmax over i not in S of |c_i|, ties to the higher index.
inline int argmax_correlation(const Vector& c, const Support& s) {
  int pick = -1;
  double value = -1.0;
  for (int i = 0; i < c.size(); ++i) {
    if (s.contains(i)) continue;
    const double magnitude = std::abs(c[i]);
    if (magnitude > value || (magnitude == value && i > pick)) {
      value = magnitude;
      pick = i;
    }
  }
  return pick;
}

}  // namespace detail

inline SolverResult omp(const Problem& p, const SolverConfig& cfg) {
  const int n = p.cols();
  if (p.k < 1 || p.k > n) throw ConfigError("omp: k out of range");
  SolverResult res;
  res.eta_used = 0.0;
  Trace trace;
  Support s;
  Vector xs;
  Vector r = p.y;
  double loss = 0.5 * r.squaredNorm();
  for (int step = 0; step < p.k; ++step) {
    const Vector c = p.a.transpose() * r;
    const int j = detail::argmax_correlation(c, s);
    s.idx.insert(std::lower_bound(s.idx.begin(), s.idx.end(), j), j);
    xs = restricted_least_squares(p.a, s, p.y, cfg.ls_tol,
                                  cfg.ls_iter_mult * s.size());
    ++res.ls_solves;
    r = p.y - apply_columns(p.a, s, xs);
    loss = 0.5 * r.squaredNorm();
    if (cfg.record_trace) {
      trace.per_iteration_loss.push_back(loss);
      trace.per_new_support.push_back({step, s, loss});
    }
    if (cfg.record_support_sequence) trace.support_sequence.push_back(s);
  }
  res.x_best = SparseVector(n, s, xs);
  res.t_best = p.k - 1;
  res.loss_best = loss;
  res.iterations_run = p.k;
  res.supports_explored = p.k;
  res.supports_after_init = p.k;
  if (cfg.record_trace || cfg.record_support_sequence)
    res.trace = std::move(trace);
  return res;
}

namespace detail {

// Shared swap move for replacement-style searches: grow by one index,
// refit, drop the smallest coefficient, refit on the k-set.
struct SwapCandidate {
  Support support;
  SupportEval eval;
};

inline SwapCandidate swap_refit(const Problem& p, const SolverConfig& cfg,
                                Support s, int j, long& ls_solves) {
  s.idx.insert(std::lower_bound(s.idx.begin(), s.idx.end(), j), j);
  const Vector grown = restricted_least_squares(
      p.a, s, p.y, cfg.ls_tol, cfg.ls_iter_mult * s.size());
  ++ls_solves;
  const Support kept = largest_k(dense_from(p.cols(), s, grown), p.k);
  SwapCandidate cand;
  cand.eval =
      evaluate_ls_support(p.a, p.y, kept, cfg.ls_tol, cfg.ls_iter_mult);
  ++ls_solves;
  cand.support = kept;
  return cand;
}

}  // namespace detail

// Single-swap replacement with full correction, accepted only while the
// residual strictly improves.
inline SolverResult ompr(const Problem& p, const SolverConfig& cfg,
                         const SparseVector& start) {
  if (start.support.size() != p.k)
    throw ConfigError("ompr: start must be k-sparse");
  const int n = p.cols();
  const int max_iter = resolve_max_iter(cfg, p.k);
  SolverResult res;
  Trace trace;
  Support s = start.support;
  SupportEval current =
      evaluate_ls_support(p.a, p.y, s, cfg.ls_tol, cfg.ls_iter_mult);
  ++res.ls_solves;
  detail::BestTracker best;
  best.offer(0, s, current.xs, current.loss);
  if (cfg.record_trace) {
    trace.per_iteration_loss.push_back(current.loss);
    trace.per_new_support.push_back({0, s, current.loss});
  }
  if (cfg.record_support_sequence) trace.support_sequence.push_back(s);
  int iterations = 0;
  for (int t = 1; t <= max_iter; ++t) {
    if (s.size() == n) break;
    const int j = detail::argmax_correlation(current.grad, s);
    const detail::SwapCandidate cand =
        detail::swap_refit(p, cfg, s, j, res.ls_solves);
    ++res.supports_explored;
    if (!(cand.eval.loss < current.loss)) break;
    s = cand.support;
    current = cand.eval;
    iterations = t;
    best.offer(t, s, current.xs, current.loss);
    if (cfg.record_trace) {
      trace.per_iteration_loss.push_back(current.loss);
      trace.per_new_support.push_back({t, s, current.loss});
    }
    if (cfg.record_support_sequence) trace.support_sequence.push_back(s);
  }
  res.x_best = SparseVector(n, best.support, best.xs);
  res.t_best = best.t;
  res.loss_best = best.loss;
  res.iterations_run = iterations + 1;
  res.supports_after_init = res.supports_explored;
  if (cfg.record_trace || cfg.record_support_sequence)
    res.trace = std::move(trace);
  return res;
}

// Exhaustive local search: tries every single-index growth (n-k
// candidates per iteration), keeps the best correction, halts when no
// candidate strictly improves.
inline SolverResult els(const Problem& p, const SolverConfig& cfg,
                        const SparseVector& start) {
  if (start.support.size() != p.k)
    throw ConfigError("els: start must be k-sparse");
  const int n = p.cols();
  const int max_iter = resolve_max_iter(cfg, p.k);
  SolverResult res;
  Trace trace;
  Support s = start.support;
  SupportEval current =
      evaluate_ls_support(p.a, p.y, s, cfg.ls_tol, cfg.ls_iter_mult);
  ++res.ls_solves;
  detail::BestTracker best;
  best.offer(0, s, current.xs, current.loss);
  if (cfg.record_trace) {
    trace.per_iteration_loss.push_back(current.loss);
    trace.per_new_support.push_back({0, s, current.loss});
  }
  if (cfg.record_support_sequence) trace.support_sequence.push_back(s);
  int iterations = 0;
  for (int t = 1; t <= max_iter; ++t) {
    if (s.size() == n) break;
    std::optional<detail::SwapCandidate> champion;
    for (int j = 0; j < n; ++j) {
      if (s.contains(j)) continue;
      detail::SwapCandidate cand =
          detail::swap_refit(p, cfg, s, j, res.ls_solves);
      if (!champion || cand.eval.loss < champion->eval.loss)
        champion = std::move(cand);
    }
    res.supports_explored += n - p.k;
    if (!champion || !(champion->eval.loss < current.loss)) break;
    s = champion->support;
    current = champion->eval;
    iterations = t;
    best.offer(t, s, current.xs, current.loss);
    if (cfg.record_trace) {
      trace.per_iteration_loss.push_back(current.loss);
      trace.per_new_support.push_back({t, s, current.loss});
    }
    if (cfg.record_support_sequence) trace.support_sequence.push_back(s);
  }
  res.x_best = SparseVector(n, best.support, best.xs);
  res.t_best = best.t;
  res.loss_best = best.loss;
  res.iterations_run = iterations + 1;
  res.supports_after_init = res.supports_explored;
  if (cfg.record_trace || cfg.record_support_sequence)
    res.trace = std::move(trace);
  return res;
}

inline SolverResult random_search(const Problem& p, const SolverConfig& cfg) {
  const int n = p.cols();
  const int draws = resolve_max_iter(cfg, p.k);
  auto engine = make_engine(cfg.seed);
  SolverResult res;
  Trace trace;
  detail::BestTracker best;
  std::vector<int> pool(n);
  for (int t = 0; t < draws; ++t) {
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> chosen(p.k);
    for (int j = 0; j < p.k; ++j) {
      std::uniform_int_distribution<int> pick(j, n - 1);
      std::swap(pool[j], pool[pick(engine)]);
      chosen[j] = pool[j];
    }
    std::sort(chosen.begin(), chosen.end());
    Support s;
    s.idx = std::move(chosen);
    const SupportEval ev =
        evaluate_ls_support(p.a, p.y, s, cfg.ls_tol, cfg.ls_iter_mult);
    ++res.ls_solves;
    best.offer(t, s, ev.xs, ev.loss);
    if (cfg.record_trace) trace.per_iteration_loss.push_back(ev.loss);
  }
  res.x_best = SparseVector(n, best.support, best.xs);
  res.t_best = best.t;
  res.loss_best = best.loss;
  res.iterations_run = draws;
  res.supports_explored = draws;
  res.supports_after_init = draws;
  if (cfg.record_trace) res.trace = std::move(trace);
  return res;
}

inline SolverResult run_solver(const std::string& id, const Problem& p,
                               const SolverConfig& cfg);

// Runs the inner solver, densifies its output as the exploration start
// of the outer one. supports_explored covers both stages; the after-init
// counter covers only the outer stage.
inline SolverResult warm_start(const std::string& inner,
                               const std::string& outer, const Problem& p,
                               const SolverConfig& inner_cfg,
                               SolverConfig outer_cfg) {
  const SolverResult first = run_solver(inner, p, inner_cfg);
  outer_cfg.init = first.x_best.densify();
  SolverResult second = run_solver(outer, p, outer_cfg);
  second.supports_after_init = second.supports_explored;
  second.supports_explored += first.supports_explored;
  second.ls_solves += first.ls_solves;
  return second;
}

inline const std::vector<std::string>& solver_ids() {
  static const std::vector<std::string> ids = {
      "sea",  "sea-omp", "sea-els", "oracle-sea", "iht",
      "iht-omp", "iht-els", "niht",    "htp",        "htp-omp",
      "htp-els", "omp",     "ompr",    "els",        "random"};
  return ids;
}

inline SolverResult run_solver(const std::string& id, const Problem& p,
                               const SolverConfig& cfg) {
  if (id == "sea") return sea_efficient(p, cfg);
  if (id == "oracle-sea") return oracle_sea(p, cfg);
  if (id == "iht") return iht(p, cfg);
  if (id == "niht") return niht(p, cfg);
  if (id == "htp") return htp(p, cfg);
  if (id == "omp") return omp(p, cfg);
  if (id == "random") return random_search(p, cfg);
  if (id == "ompr" || id == "els") {
    SolverConfig omp_cfg = cfg;
    omp_cfg.record_trace = false;
    omp_cfg.record_support_sequence = false;
    const SolverResult start = omp(p, omp_cfg);
    SolverResult res = id == "ompr" ? ompr(p, cfg, start.x_best)
                                    : els(p, cfg, start.x_best);
    res.supports_explored += start.supports_explored;
    res.ls_solves += start.ls_solves;
    return res;
  }
  const auto dash = id.find('-');
  if (dash != std::string::npos) {
    const std::string outer = id.substr(0, dash);
    const std::string inner = id.substr(dash + 1);
    if ((outer == "sea" || outer == "iht" || outer == "htp") &&
        (inner == "omp" || inner == "els")) {
      SolverConfig inner_cfg = cfg;
      inner_cfg.init.reset();
      inner_cfg.record_trace = false;
      inner_cfg.record_support_sequence = false;
      return warm_start(inner, outer, p, inner_cfg, cfg);
    }
  }
  throw ConfigError("unknown solver id: " + id);
}

}  // namespace sea
