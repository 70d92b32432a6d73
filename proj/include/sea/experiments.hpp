#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sea/common.hpp"
#include "sea/io.hpp"
#include "sea/metrics.hpp"
#include "sea/problem.hpp"
#include "sea/rng.hpp"
#include "sea/solvers.hpp"
#include "sea/svg.hpp"

namespace sea {

enum class ExperimentKind { phase_transition, deconvolution };
enum class Scale { desk, paper };

inline std::string to_string(ExperimentKind k) {
  return k == ExperimentKind::phase_transition ? "phase_transition"
                                               : "deconvolution";
}
inline std::string to_string(Scale s) {
  return s == Scale::desk ? "desk" : "paper";
}

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::phase_transition;
  int n = 60;
  std::vector<int> m_grid;  // phase transition; empty = derive from scale
  std::vector<int> k_grid;  // deconvolution, or an explicit phase k-grid
  int runs_per_cell = 20;
  double noise_fraction = 0.01;
  NoiseMode noise_mode = NoiseMode::after_a;
  double amplitude_lo = 1.0;
  double amplitude_hi = 2.0;
  double sigma = 3.0;
  std::vector<std::string> algorithms;
  bool max_iter_per_k = true;  // 256*k when true, else fixed value
  int max_iter_fixed = 1000;
  std::optional<double> k_prime_ratio;
  std::vector<double> eta_multipliers;
  std::uint64_t base_seed = 0;
  int parallelism = 0;  // 0: hardware concurrency
  Scale scale = Scale::desk;
  bool timings = false;
};

inline constexpr long kDeskInvocationCap = 100000;

inline std::vector<int> phase_m_grid(int n, int points) {
  std::vector<int> grid;
  for (int i = 0; i < points; ++i) {
    const double zeta =
        0.05 + (1.0 - 0.05) * (points == 1 ? 1.0 : i / (points - 1.0));
    const int m = std::max(1, static_cast<int>(std::lround(n * zeta)));
    if (grid.empty() || grid.back() != m) grid.push_back(m);
  }
  return grid;
}

inline std::vector<int> phase_k_grid(int m, Scale scale) {
  std::vector<int> grid;
  const int hi = std::max(1, m / 2);
  const int step = scale == Scale::desk ? 2 : 1;
  for (int k = 1; k <= hi; k += step) grid.push_back(k);
  return grid;
}

inline std::vector<std::string> default_algorithms() {
  return {"sea",  "sea-omp", "sea-els", "iht", "niht",
          "htp", "omp",     "ompr",    "els"};
}

inline ExperimentConfig default_phase_config(Scale scale) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::phase_transition;
  cfg.scale = scale;
  cfg.noise_fraction = 0.01;
  cfg.max_iter_per_k = true;
  cfg.algorithms = default_algorithms();
  if (scale == Scale::paper) {
    cfg.n = 500;
    cfg.m_grid = phase_m_grid(cfg.n, 18);
    cfg.runs_per_cell = 1000;
  } else {
    cfg.n = 60;
    cfg.m_grid = phase_m_grid(cfg.n, 6);
    cfg.runs_per_cell = 20;
  }
  return cfg;
}

inline ExperimentConfig default_deconv_config(Scale scale) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::deconvolution;
  cfg.scale = scale;
  cfg.noise_fraction = 0.1;
  cfg.max_iter_per_k = false;
  cfg.max_iter_fixed = 1000;
  cfg.algorithms = default_algorithms();
  if (scale == Scale::paper) {
    cfg.n = 500;
    cfg.runs_per_cell = 200;
    for (int k = 1; k <= 50; ++k) cfg.k_grid.push_back(k);
  } else {
    cfg.n = 128;
    cfg.runs_per_cell = 20;
    cfg.k_grid = {1, 2, 4, 8, 12, 16};
  }
  return cfg;
}

struct RunRow {
  std::string kind;
  int m = 0, n = 0, k = 0, k_prime = 0;
  double noise_fraction = 0.0;
  std::string noise_mode;
  std::string algorithm;
  int run = 0;
  std::uint64_t seed = 0;
  int success = 0;
  double dist_supp = 0.0;
  double rel_l2 = 0.0;
  double wasserstein = 0.0;
  long supports_explored = 0;
  long supports_after_init = 0;
  int t_best = 0;
  double loss_best = 0.0;
  long runtime_ms = 0;
  double dist_supp_largest = 0.0;
};

struct ResultGrid {
  std::vector<RunRow> rows;
  ExperimentConfig config;
};

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline int resolve_threads(int configured, int override_flag = 0) {
  if (override_flag > 0) return override_flag;
  int threads = configured > 0
                    ? configured
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (const char* env = std::getenv("SEA_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) threads = std::min(threads, cap);
  }
  return threads;
}

namespace detail {

// Splits "iht@2" into the solver id and a step multiplier mu, step mu/L.
inline std::pair<std::string, std::optional<double>> parse_algorithm_label(
    const std::string& label) {
  const auto at = label.find('@');
  if (at == std::string::npos) return {label, std::nullopt};
  return {label.substr(0, at), std::stod(label.substr(at + 1))};
}

struct Task {
  int m, k, run;
  std::uint64_t seed;
  size_t row_base;
};

inline RunRow evaluate_run(const ExperimentConfig& cfg, const Problem& problem,
                           const std::string& label, int true_k, int k_prime,
                           int m, int run, std::uint64_t seed) {
  const auto [id, multiplier] = parse_algorithm_label(label);
  SolverConfig scfg;
  scfg.max_iter = cfg.max_iter_per_k ? 256 * problem.k : cfg.max_iter_fixed;
  scfg.seed = mix_seed(seed, fnv1a(id),
                       static_cast<std::uint64_t>(SeedTag::solver));
  if (multiplier) scfg.eta = *multiplier / spectral_norm_sq(problem.a);
  const auto started = std::chrono::steady_clock::now();
  const SolverResult result = run_solver(id, problem, scfg);
  const auto elapsed = std::chrono::steady_clock::now() - started;
  RunRow row;
  row.kind = to_string(cfg.kind);
  row.m = m;
  row.n = cfg.n;
  row.k = true_k;
  row.k_prime = k_prime;
  row.noise_fraction = cfg.noise_fraction;
  row.noise_mode = to_string(cfg.noise_mode);
  row.algorithm = label;
  row.run = run;
  row.seed = seed;
  row.t_best = result.t_best;
  row.loss_best = result.loss_best;
  row.supports_explored = result.supports_explored;
  row.supports_after_init = result.supports_after_init;
  if (cfg.timings)
    row.runtime_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed)
            .count();
  const SparseVector& x = result.x_best;
  const Support& s_star = problem.truth->x_star.support;
  row.success = exact_support_match(x, s_star) ? 1 : 0;
  row.dist_supp = k_prime == true_k
                      ? dist_supp(x, s_star, true_k)
                      : dist_supp_kprime(x, s_star, k_prime);
  row.rel_l2 = rel_l2_loss(problem.a, x, problem.y);
  try {
    row.wasserstein = wasserstein1_spikes(x, problem.truth->x_star);
  } catch (const ZeroMass&) {
    row.wasserstein = std::numeric_limits<double>::quiet_NaN();
  }
  row.dist_supp_largest =
      dist_supp_largest(x, problem.truth->x_star, true_k, k_prime);
  return row;
}

inline void run_tasks(const ExperimentConfig& cfg,
                      const std::vector<Task>& tasks,
                      const std::optional<Matrix>& shared_matrix,
                      std::vector<RunRow>& rows) {
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const size_t index = next.fetch_add(1);
      if (index >= tasks.size()) return;
      const Task& task = tasks[index];
      GeneratorSpec spec;
      spec.n = cfg.n;
      spec.m = task.m;
      spec.k = task.k;
      spec.noise_radius_fraction = cfg.noise_fraction;
      spec.noise_mode = cfg.noise_mode;
      spec.amplitude_lo = cfg.amplitude_lo;
      spec.amplitude_hi = cfg.amplitude_hi;
      spec.sigma = cfg.sigma;
      spec.seed = task.seed;
      spec.matrix_kind = cfg.kind == ExperimentKind::deconvolution
                             ? MatrixKind::convolution
                             : MatrixKind::gaussian;
      Problem problem =
          shared_matrix
              ? build_problem_with_matrix(*shared_matrix, spec)
              : build_problem(spec);
      int k_prime = task.k;
      if (cfg.k_prime_ratio) {
        k_prime = std::max(
            1, static_cast<int>(std::lround(*cfg.k_prime_ratio * task.k)));
        k_prime = std::min(k_prime, cfg.n);
      }
      problem.k = k_prime;  // solver budget; truth keeps the real sparsity
      for (size_t ai = 0; ai < cfg.algorithms.size(); ++ai)
        rows[task.row_base + ai] =
            evaluate_run(cfg, problem, cfg.algorithms[ai], task.k, k_prime,
                         task.m, task.run, task.seed);
    }
  };
  const int threads = resolve_threads(cfg.parallelism);
  if (threads <= 1 || tasks.size() <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

inline std::vector<std::string> expanded_algorithms(
    const ExperimentConfig& cfg) {
  if (cfg.eta_multipliers.empty()) return cfg.algorithms;
  std::vector<std::string> out;
  for (const auto& algo : cfg.algorithms) {
    const bool stepped = algo.rfind("iht", 0) == 0 || algo.rfind("htp", 0) == 0;
    if (!stepped) {
      out.push_back(algo);
      continue;
    }
    for (double mu : cfg.eta_multipliers) {
      std::ostringstream label;
      label << algo << "@" << mu;
      out.push_back(label.str());
    }
  }
  return out;
}

}  // namespace detail

inline ResultGrid run_experiment(ExperimentConfig cfg) {
  if (cfg.runs_per_cell < 1) throw ConfigError("runs_per_cell < 1");
  cfg.algorithms = detail::expanded_algorithms(cfg);
  if (cfg.algorithms.empty()) throw ConfigError("no algorithms configured");
  std::vector<detail::Task> tasks;
  std::optional<Matrix> shared_matrix;
  if (cfg.kind == ExperimentKind::phase_transition) {
    if (cfg.m_grid.empty())
      cfg.m_grid = phase_m_grid(cfg.n, cfg.scale == Scale::paper ? 18 : 6);
    for (int m : cfg.m_grid) {
      if (m < 1 || m > cfg.n) throw ConfigError("phase grid: bad m");
      const std::vector<int> ks =
          cfg.k_grid.empty() ? phase_k_grid(m, cfg.scale) : cfg.k_grid;
      for (int k : ks) {
        if (k > std::min(m, cfg.n)) continue;
        for (int run = 0; run < cfg.runs_per_cell; ++run)
          tasks.push_back({m, k, run, mix_seed(cfg.base_seed, m, k, run), 0});
      }
    }
  } else {
    if (cfg.k_grid.empty()) throw ConfigError("deconvolution: empty k grid");
    shared_matrix = gaussian_convolution_matrix(cfg.n, cfg.sigma);
    for (int k : cfg.k_grid) {
      if (k < 1 || k > cfg.n) throw ConfigError("deconvolution: bad k");
      for (int run = 0; run < cfg.runs_per_cell; ++run)
        tasks.push_back(
            {cfg.n, k, run, mix_seed(cfg.base_seed, cfg.n, k, run), 0});
    }
  }
  const long invocations =
      static_cast<long>(tasks.size()) * static_cast<long>(cfg.algorithms.size());
  if (cfg.scale == Scale::desk && invocations > kDeskInvocationCap)
    throw ConfigError("desk scale caps solver invocations at 100000");
  for (size_t i = 0; i < tasks.size(); ++i)
    tasks[i].row_base = i * cfg.algorithms.size();
  ResultGrid grid;
  grid.rows.resize(tasks.size() * cfg.algorithms.size());
  detail::run_tasks(cfg, tasks, shared_matrix, grid.rows);
  grid.config = cfg;
  return grid;
}

inline ResultGrid run_phase_transition(ExperimentConfig cfg) {
  cfg.kind = ExperimentKind::phase_transition;
  return run_experiment(std::move(cfg));
}

inline ResultGrid run_deconvolution(ExperimentConfig cfg) {
  cfg.kind = ExperimentKind::deconvolution;
  return run_experiment(std::move(cfg));
}

inline const char* kResultsCsvHeader =
    "kind,m,n,k,k_prime,noise_fraction,noise_mode,algorithm,run,seed,"
    "success,dist_supp,rel_l2_loss,wasserstein,supports_explored,"
    "supports_after_init,t_best,loss_best,runtime_ms";

inline void emit_csv(const ResultGrid& grid,
                     const std::filesystem::path& path) {
  std::ostringstream out;
  out << kResultsCsvHeader << "\n";
  for (const RunRow& r : grid.rows) {
    out << r.kind << "," << r.m << "," << r.n << "," << r.k << ","
        << r.k_prime << "," << format_double(r.noise_fraction) << ","
        << r.noise_mode << "," << r.algorithm << "," << r.run << "," << r.seed
        << "," << r.success << "," << format_double(r.dist_supp) << ","
        << format_double(r.rel_l2) << "," << format_double(r.wasserstein)
        << "," << r.supports_explored << "," << r.supports_after_init << ","
        << r.t_best << "," << format_double(r.loss_best) << ","
        << r.runtime_ms << "\n";
  }
  write_text_file(path, out.str());
}

// Companion file for the wrong-sparsity variant; the main schema has no
// column for the largest-entry distance.
inline void emit_largest_csv(const ResultGrid& grid,
                             const std::filesystem::path& path) {
  std::ostringstream out;
  out << "kind,m,n,k,k_prime,algorithm,run,dist_supp_largest\n";
  for (const RunRow& r : grid.rows)
    out << r.kind << "," << r.m << "," << r.n << "," << r.k << ","
        << r.k_prime << "," << r.algorithm << "," << r.run << ","
        << format_double(r.dist_supp_largest) << "\n";
  write_text_file(path, out.str());
}

struct CellStats {
  int count = 0;
  double success_rate = 0.0;
  double mean_dist_supp = 0.0;
  double mean_rel_l2 = 0.0;
  double mean_wasserstein = 0.0;
  double mean_supports = 0.0;
  double mean_supports_after_init = 0.0;
};

// (m, k, algorithm) -> averaged metrics.
inline std::map<std::tuple<int, int, std::string>, CellStats> aggregate(
    const ResultGrid& grid) {
  std::map<std::tuple<int, int, std::string>, CellStats> cells;
  for (const RunRow& r : grid.rows) {
    CellStats& c = cells[{r.m, r.k, r.algorithm}];
    ++c.count;
    c.success_rate += r.success;
    c.mean_dist_supp += r.dist_supp;
    c.mean_rel_l2 += r.rel_l2;
    c.mean_wasserstein += r.wasserstein;
    c.mean_supports += static_cast<double>(r.supports_explored);
    c.mean_supports_after_init +=
        static_cast<double>(r.supports_after_init);
  }
  for (auto& [key, c] : cells) {
    c.success_rate /= c.count;
    c.mean_dist_supp /= c.count;
    c.mean_rel_l2 /= c.count;
    c.mean_wasserstein /= c.count;
    c.mean_supports /= c.count;
    c.mean_supports_after_init /= c.count;
  }
  return cells;
}

inline void emit_summary_csv(const ResultGrid& grid,
                             const std::filesystem::path& path) {
  std::ostringstream out;
  out << "m,k,algorithm,runs,success_rate,mean_dist_supp,mean_rel_l2_loss,"
         "mean_wasserstein,mean_supports_explored,mean_supports_after_init\n";
  for (const auto& [key, c] : aggregate(grid)) {
    const auto& [m, k, algo] = key;
    out << m << "," << k << "," << algo << "," << c.count << ","
        << format_double(c.success_rate) << ","
        << format_double(c.mean_dist_supp) << ","
        << format_double(c.mean_rel_l2) << ","
        << format_double(c.mean_wasserstein) << ","
        << format_double(c.mean_supports) << ","
        << format_double(c.mean_supports_after_init) << "\n";
  }
  write_text_file(path, out.str());
}

// Largest k per (m, algorithm) whose success rate stays >= 0.95.
inline std::map<std::pair<int, std::string>, int> threshold_curve(
    const ResultGrid& grid) {
  std::map<std::pair<int, std::string>, int> curve;
  for (const auto& [key, c] : aggregate(grid)) {
    const auto& [m, k, algo] = key;
    auto& best = curve[{m, algo}];
    if (c.success_rate >= 0.95) best = std::max(best, k);
  }
  return curve;
}

inline void emit_threshold_csv(const ResultGrid& grid,
                               const std::filesystem::path& path) {
  std::ostringstream out;
  out << "m,algorithm,k_threshold\n";
  for (const auto& [key, k] : threshold_curve(grid))
    out << key.first << "," << key.second << "," << k << "\n";
  write_text_file(path, out.str());
}

enum class PlotKind { threshold, metric_vs_k };

inline void emit_svg(const ResultGrid& grid,
                     const std::filesystem::path& path, PlotKind kind) {
  std::vector<PlotSeries> series;
  if (kind == PlotKind::threshold) {
    const auto curve = threshold_curve(grid);
    for (const std::string& algo : grid.config.algorithms) {
      PlotSeries s;
      s.label = algo;
      for (const auto& [key, k] : curve) {
        if (key.second != algo) continue;
        s.x.push_back(static_cast<double>(key.first) / grid.config.n);
        s.y.push_back(static_cast<double>(k) / key.first);
      }
      series.push_back(std::move(s));
    }
    write_text_file(
        path, render_line_plot(series, "95% recovery threshold", "m / n",
                               "k / m"));
  } else {
    const auto cells = aggregate(grid);
    for (const std::string& algo : grid.config.algorithms) {
      PlotSeries s;
      s.label = algo;
      for (const auto& [key, c] : cells) {
        if (std::get<2>(key) != algo) continue;
        s.x.push_back(std::get<1>(key));
        s.y.push_back(c.mean_dist_supp);
      }
      series.push_back(std::move(s));
    }
    write_text_file(path,
                    render_line_plot(series, "mean support distance", "k",
                                     "dist_supp"));
  }
}

inline json experiment_config_to_json(const ExperimentConfig& cfg) {
  json out;
  out["kind"] = to_string(cfg.kind);
  out["n"] = cfg.n;
  out["m_grid"] = cfg.m_grid;
  out["k_grid"] = cfg.k_grid;
  out["runs_per_cell"] = cfg.runs_per_cell;
  out["noise_fraction"] = cfg.noise_fraction;
  out["noise_mode"] = to_string(cfg.noise_mode);
  out["amplitude_range"] = {cfg.amplitude_lo, cfg.amplitude_hi};
  out["sigma"] = cfg.sigma;
  out["algorithms"] = cfg.algorithms;
  out["max_iter"] = cfg.max_iter_per_k ? json("256k") : json(cfg.max_iter_fixed);
  if (cfg.k_prime_ratio) out["k_prime_ratio"] = *cfg.k_prime_ratio;
  out["eta_multipliers"] = cfg.eta_multipliers;
  out["base_seed"] = cfg.base_seed;
  out["parallelism"] = cfg.parallelism;
  out["scale"] = to_string(cfg.scale);
  out["timings"] = cfg.timings;
  return out;
}

// Mutates only the keys present in the JSON object; unknown keys are
// rejected.
inline void apply_config_json(ExperimentConfig& cfg, const json& j) {
  static const std::set<std::string> known = {
      "kind",        "n",          "m_grid",         "k_grid",
      "runs_per_cell", "noise_fraction", "noise_mode", "amplitude_range",
      "sigma",       "algorithms", "max_iter",       "k_prime_ratio",
      "eta_multipliers", "base_seed", "parallelism",  "scale",
      "timings"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError("unknown config key: " + key);
  if (j.contains("kind")) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "phase_transition")
      cfg.kind = ExperimentKind::phase_transition;
    else if (kind == "deconvolution")
      cfg.kind = ExperimentKind::deconvolution;
    else
      throw ConfigError("unknown experiment kind: " + kind);
  }
  if (j.contains("scale")) {
    const std::string scale = j.at("scale").get<std::string>();
    if (scale == "desk")
      cfg.scale = Scale::desk;
    else if (scale == "paper")
      cfg.scale = Scale::paper;
    else
      throw ConfigError("unknown scale: " + scale);
  }
  if (j.contains("n")) cfg.n = j.at("n").get<int>();
  if (j.contains("m_grid")) cfg.m_grid = j.at("m_grid").get<std::vector<int>>();
  if (j.contains("k_grid")) cfg.k_grid = j.at("k_grid").get<std::vector<int>>();
  if (j.contains("runs_per_cell"))
    cfg.runs_per_cell = j.at("runs_per_cell").get<int>();
  if (j.contains("noise_fraction"))
    cfg.noise_fraction = j.at("noise_fraction").get<double>();
  if (j.contains("noise_mode")) {
    const std::string mode = j.at("noise_mode").get<std::string>();
    if (mode == "after_A")
      cfg.noise_mode = NoiseMode::after_a;
    else if (mode == "before_A")
      cfg.noise_mode = NoiseMode::before_a;
    else
      throw ConfigError("unknown noise mode: " + mode);
  }
  if (j.contains("amplitude_range")) {
    const auto range = j.at("amplitude_range").get<std::vector<double>>();
    if (range.size() != 2) throw ConfigError("amplitude_range needs 2 values");
    cfg.amplitude_lo = range[0];
    cfg.amplitude_hi = range[1];
  }
  if (j.contains("sigma")) cfg.sigma = j.at("sigma").get<double>();
  if (j.contains("algorithms"))
    cfg.algorithms = j.at("algorithms").get<std::vector<std::string>>();
  if (j.contains("max_iter")) {
    if (j.at("max_iter").is_string()) {
      if (j.at("max_iter").get<std::string>() != "256k")
        throw ConfigError("max_iter must be \"256k\" or an integer");
      cfg.max_iter_per_k = true;
    } else {
      cfg.max_iter_per_k = false;
      cfg.max_iter_fixed = j.at("max_iter").get<int>();
    }
  }
  if (j.contains("k_prime_ratio"))
    cfg.k_prime_ratio = j.at("k_prime_ratio").get<double>();
  if (j.contains("eta_multipliers"))
    cfg.eta_multipliers = j.at("eta_multipliers").get<std::vector<double>>();
  if (j.contains("base_seed"))
    cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("parallelism"))
    cfg.parallelism = j.at("parallelism").get<int>();
  if (j.contains("timings")) cfg.timings = j.at("timings").get<bool>();
}

inline ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig probe;
  apply_config_json(probe, j);  // validates keys, resolves kind and scale
  ExperimentConfig cfg = probe.kind == ExperimentKind::phase_transition
                             ? default_phase_config(probe.scale)
                             : default_deconv_config(probe.scale);
  apply_config_json(cfg, j);
  return cfg;
}

}  // namespace sea
