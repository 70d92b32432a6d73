#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <string>

#include "sea/experiments.hpp"
#include "sea/io.hpp"
#include "sea/losses.hpp"
#include "sea/metrics.hpp"
#include "sea/solvers.hpp"
#include "sea/theory.hpp"

namespace fs = std::filesystem;
using sea::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct GenProblemArgs {
  int n = 128, m = 128, k = 8;
  std::string matrix = "convolution";
  double sigma = 3.0;
  double noise_fraction = 0.1;
  std::string noise_mode = "after_A";
  double amp_lo = 1.0, amp_hi = 2.0;
  std::uint64_t seed = 0;
  std::string out = "problem";
};

sea::NoiseMode parse_noise_mode(const std::string& mode) {
  if (mode == "after_A") return sea::NoiseMode::after_a;
  if (mode == "before_A") return sea::NoiseMode::before_a;
  throw sea::ConfigError("unknown noise mode: " + mode);
}

int run_gen_problem(const GenProblemArgs& args) {
  sea::GeneratorSpec spec;
  spec.n = args.n;
  spec.m = args.matrix == "convolution" ? args.n : args.m;
  spec.k = args.k;
  spec.sigma = args.sigma;
  spec.noise_radius_fraction = args.noise_fraction;
  spec.noise_mode = parse_noise_mode(args.noise_mode);
  spec.amplitude_lo = args.amp_lo;
  spec.amplitude_hi = args.amp_hi;
  spec.seed = args.seed;
  if (args.matrix == "gaussian")
    spec.matrix_kind = sea::MatrixKind::gaussian;
  else if (args.matrix == "convolution")
    spec.matrix_kind = sea::MatrixKind::convolution;
  else if (args.matrix == "orthonormal")
    spec.matrix_kind = sea::MatrixKind::orthonormal;
  else
    throw sea::ConfigError("unknown matrix kind: " + args.matrix);
  const sea::Problem problem = sea::build_problem(spec);
  json echo;
  echo["n"] = spec.n;
  echo["m"] = spec.m;
  echo["k"] = spec.k;
  echo["matrix"] = args.matrix;
  echo["sigma"] = spec.sigma;
  echo["noise_fraction"] = spec.noise_radius_fraction;
  echo["noise_mode"] = to_string(spec.noise_mode);
  echo["amplitude_range"] = {spec.amplitude_lo, spec.amplitude_hi};
  echo["seed"] = spec.seed;
  sea::write_problem_bundle(args.out, problem, echo);
  std::cout << "wrote problem bundle to " << args.out << "\n";
  return kExitOk;
}

struct SolveArgs {
  std::string problem;
  std::string algo = "sea";
  int k = 0;
  int max_iter = 0;
  double eta = std::numeric_limits<double>::quiet_NaN();
  std::string eta_mode = "spectral-sq";
  std::string loss = "ls";
  std::uint64_t seed = 0;
  std::string out = ".";
  bool no_trace = false;
};

int run_solve(const SolveArgs& args) {
  sea::Problem problem = sea::read_problem_bundle(args.problem);
  if (args.k > 0) problem.k = args.k;

  // Solvers expect unit columns; solutions are mapped back to the
  // caller's matrix afterwards.
  sea::Vector scales = sea::Vector::Ones(problem.cols());
  const double max_dev =
      (problem.a.colwise().norm().transpose().array() - 1.0).abs().maxCoeff();
  if (max_dev > 1e-9) {
    auto [normalized, scaling] = sea::normalize_columns(problem.a);
    problem.a = std::move(normalized);
    scales = scaling.scales;
  }

  sea::SolverConfig cfg;
  cfg.max_iter = args.max_iter;
  cfg.eta = args.eta;
  cfg.seed = args.seed;
  cfg.record_trace = !args.no_trace;
  cfg.record_support_sequence = !args.no_trace;
  if (args.eta_mode == "spectral")
    cfg.eta_mode = sea::EtaMode::spectral;
  else if (args.eta_mode != "spectral-sq")
    throw sea::ConfigError("unknown eta mode: " + args.eta_mode);

  sea::SolverResult result;
  if (args.loss == "logistic") {
    if (args.algo != "sea")
      throw sea::ConfigError("logistic loss is supported for --algo sea");
    sea::LossModel model{sea::LossKind::logistic, problem.a, problem.y};
    result = sea::sea_generalized(model, problem.k, cfg);
  } else if (args.loss == "ls") {
    result = sea::run_solver(args.algo, problem, cfg);
  } else {
    throw sea::ConfigError("unknown loss: " + args.loss);
  }

  for (int j = 0; j < result.x_best.support.size(); ++j)
    result.x_best.values[j] /= scales[result.x_best.support.idx[j]];

  fs::create_directories(args.out);
  json out = sea::solver_result_to_json(args.algo, result);
  out["loss"] = args.loss;
  sea::write_text_file(fs::path(args.out) / "result.json",
                       out.dump(2) + "\n");
  if (result.trace)
    sea::write_trace_csv(fs::path(args.out) / "trace.csv", *result.trace);
  json side;
  side["command"] = "solve";
  side["problem"] = args.problem;
  side["algorithm"] = args.algo;
  side["k"] = problem.k;
  side["max_iter"] = cfg.max_iter > 0 ? cfg.max_iter : 256 * problem.k;
  side["eta"] = result.eta_used;
  side["loss"] = args.loss;
  side["seed"] = args.seed;
  sea::write_text_file(fs::path(args.out) / "run_config.json",
                       side.dump(2) + "\n");
  std::cout << "loss_best=" << sea::format_double(result.loss_best)
            << " t_best=" << result.t_best
            << " supports_explored=" << result.supports_explored << "\n";
  return kExitOk;
}

struct VerifyArgs {
  std::string problem;
  std::string trace;
  double eta = std::numeric_limits<double>::quiet_NaN();
  std::string x0_file;
  double rip_cap = sea::kRipEnumerationCap;
  std::string out = "theory_report.json";
};

int run_verify(const VerifyArgs& args) {
  const sea::Problem problem = sea::read_problem_bundle(args.problem);
  if (!problem.truth)
    throw sea::MissingGroundTruth("verify-theory needs a bundle with truth");
  const sea::TraceFile trace = sea::read_trace_csv(args.trace);
  if (trace.supports.empty())
    throw sea::IoError("trace has no support rows");
  const double eta = std::isnan(args.eta)
                         ? sea::default_step_size(problem.a)
                         : args.eta;
  sea::Vector x0 = sea::Vector::Zero(problem.cols());
  if (!args.x0_file.empty()) x0 = sea::read_vector(args.x0_file);
  const sea::TheoryReport report =
      sea::certify(problem, trace.supports, eta, x0, args.rip_cap);
  const json out = sea::theory_report_to_json(report);
  sea::write_text_file(args.out, out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

struct ExperimentArgs {
  std::string config_file;
  std::string scale = "desk";
  int n = 0;
  std::vector<int> m_grid;
  std::vector<int> k_grid;
  int runs = 0;
  double noise_fraction = std::numeric_limits<double>::quiet_NaN();
  std::string noise_mode;
  std::vector<std::string> algos;
  double k_prime_ratio = 0.0;
  std::vector<double> eta_multipliers;
  double amp_lo = 0.0, amp_hi = 0.0;
  double sigma = 0.0;
  int max_iter = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  bool timings = false;
  std::string out = "experiment_out";
};

sea::ExperimentConfig build_experiment_config(const ExperimentArgs& args,
                                              sea::ExperimentKind kind) {
  sea::Scale scale;
  if (args.scale == "desk")
    scale = sea::Scale::desk;
  else if (args.scale == "paper")
    scale = sea::Scale::paper;
  else
    throw sea::ConfigError("unknown scale: " + args.scale);
  sea::ExperimentConfig cfg = kind == sea::ExperimentKind::phase_transition
                                  ? sea::default_phase_config(scale)
                                  : sea::default_deconv_config(scale);
  if (args.n > 0) cfg.n = args.n;
  if (!args.m_grid.empty()) cfg.m_grid = args.m_grid;
  if (!args.k_grid.empty()) cfg.k_grid = args.k_grid;
  if (args.runs > 0) cfg.runs_per_cell = args.runs;
  if (!std::isnan(args.noise_fraction))
    cfg.noise_fraction = args.noise_fraction;
  if (!args.noise_mode.empty())
    cfg.noise_mode = parse_noise_mode(args.noise_mode);
  if (!args.algos.empty()) cfg.algorithms = args.algos;
  if (args.k_prime_ratio > 0) cfg.k_prime_ratio = args.k_prime_ratio;
  if (!args.eta_multipliers.empty())
    cfg.eta_multipliers = args.eta_multipliers;
  if (args.amp_lo > 0) cfg.amplitude_lo = args.amp_lo;
  if (args.amp_hi > 0) cfg.amplitude_hi = args.amp_hi;
  if (args.sigma > 0) cfg.sigma = args.sigma;
  if (args.max_iter > 0) {
    cfg.max_iter_per_k = false;
    cfg.max_iter_fixed = args.max_iter;
  }
  if (args.seed_set) cfg.base_seed = args.seed;
  cfg.timings = args.timings;
  // A config file overrides flag values key by key.
  if (!args.config_file.empty()) {
    const json file = json::parse(sea::read_text_file(args.config_file));
    if (file.contains("kind")) {
      sea::ExperimentConfig probe = cfg;
      sea::apply_config_json(probe, file);
      if (probe.kind != kind)
        throw sea::ConfigError("config kind conflicts with the subcommand");
    }
    sea::apply_config_json(cfg, file);
  }
  cfg.kind = kind;
  if (args.threads > 0) cfg.parallelism = args.threads;
  return cfg;
}

int run_experiment_command(const ExperimentArgs& args,
                           sea::ExperimentKind kind) {
  const sea::ExperimentConfig cfg = build_experiment_config(args, kind);
  const sea::ResultGrid grid = sea::run_experiment(cfg);
  fs::create_directories(args.out);
  const fs::path dir(args.out);
  sea::emit_csv(grid, dir / "results.csv");
  sea::emit_summary_csv(grid, dir / "summary.csv");
  if (kind == sea::ExperimentKind::phase_transition) {
    sea::emit_threshold_csv(grid, dir / "threshold.csv");
    sea::emit_svg(grid, dir / "threshold.svg", sea::PlotKind::threshold);
  } else {
    sea::emit_svg(grid, dir / "curves.svg", sea::PlotKind::metric_vs_k);
    if (cfg.k_prime_ratio) sea::emit_largest_csv(grid, dir / "largest.csv");
  }
  sea::write_text_file(dir / "config.json",
                       sea::experiment_config_to_json(grid.config).dump(2) +
                           "\n");
  std::cout << "wrote " << grid.rows.size() << " rows to "
            << (dir / "results.csv").string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse support recovery solvers and benchmarks"};
  app.require_subcommand(1);

  GenProblemArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-problem", "Generate a problem bundle");
  gen_cmd->add_option("--n", gen.n, "signal dimension");
  gen_cmd->add_option("--m", gen.m, "observation dimension");
  gen_cmd->add_option("--k", gen.k, "sparsity budget");
  gen_cmd->add_option("--matrix", gen.matrix,
                      "gaussian | convolution | orthonormal");
  gen_cmd->add_option("--sigma", gen.sigma, "convolution kernel width");
  gen_cmd->add_option("--noise-fraction", gen.noise_fraction,
                      "noise radius as a fraction");
  gen_cmd->add_option("--noise-mode", gen.noise_mode, "after_A | before_A");
  gen_cmd->add_option("--amp-lo", gen.amp_lo, "amplitude lower bound");
  gen_cmd->add_option("--amp-hi", gen.amp_hi, "amplitude upper bound");
  gen_cmd->add_option("--seed", gen.seed, "base seed");
  gen_cmd->add_option("--out", gen.out, "output directory");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run one solver on a bundle");
  solve_cmd->add_option("--problem", solve.problem, "problem bundle directory")
      ->required();
  solve_cmd->add_option("--algo", solve.algo, "solver id");
  solve_cmd->add_option("--k", solve.k, "override sparsity budget");
  solve_cmd->add_option("--max-iter", solve.max_iter,
                        "iteration budget (default 256k)");
  solve_cmd->add_option("--eta", solve.eta, "step size (default 1.8/L)");
  solve_cmd->add_option("--eta-mode", solve.eta_mode,
                        "spectral-sq | spectral");
  solve_cmd->add_option("--loss", solve.loss, "ls | logistic");
  solve_cmd->add_option("--seed", solve.seed, "seed for random search");
  solve_cmd->add_option("--out", solve.out, "output directory");
  solve_cmd->add_flag("--no-trace", solve.no_trace, "skip trace.csv");

  VerifyArgs verify;
  auto* verify_cmd =
      app.add_subcommand("verify-theory", "Certify a recorded run");
  verify_cmd->add_option("--problem", verify.problem, "problem bundle")
      ->required();
  verify_cmd->add_option("--trace", verify.trace, "trace.csv from solve")
      ->required();
  verify_cmd->add_option("--eta", verify.eta, "step size used in the run");
  verify_cmd->add_option("--x0", verify.x0_file, "exploration start vector");
  verify_cmd->add_option("--rip-cap", verify.rip_cap,
                         "enumeration cap for the isometry constants");
  verify_cmd->add_option("--out", verify.out, "report path");

  ExperimentArgs phase;
  auto* phase_cmd =
      app.add_subcommand("phase-diagram", "Gaussian recovery sweep");
  ExperimentArgs deconv;
  auto* deconv_cmd =
      app.add_subcommand("deconv", "Spike deconvolution sweep");
  for (auto [cmd, args] : {std::pair{phase_cmd, &phase},
                           std::pair{deconv_cmd, &deconv}}) {
    cmd->add_option("--config", args->config_file,
                    "JSON config; overrides flags");
    cmd->add_option("--scale", args->scale, "desk | paper");
    cmd->add_option("--n", args->n, "signal dimension");
    cmd->add_option("--m-grid", args->m_grid, "observation counts");
    cmd->add_option("--k-grid", args->k_grid, "sparsity levels");
    cmd->add_option("--runs", args->runs, "problems per cell");
    cmd->add_option("--noise-fraction", args->noise_fraction,
                    "noise radius fraction");
    cmd->add_option("--noise-mode", args->noise_mode, "after_A | before_A");
    cmd->add_option("--algos", args->algos, "solver ids");
    cmd->add_option("--k-prime-ratio", args->k_prime_ratio,
                    "run solvers with budget ratio*k");
    cmd->add_option("--eta-multipliers", args->eta_multipliers,
                    "step sweep for iht/htp, step = mu/L");
    cmd->add_option("--amp-lo", args->amp_lo, "amplitude lower bound");
    cmd->add_option("--amp-hi", args->amp_hi, "amplitude upper bound");
    cmd->add_option("--max-iter", args->max_iter, "fixed iteration budget");
    cmd->add_option("--seed", args->seed, "base seed")
        ->trigger_on_parse()
        ->each([args](const std::string&) { args->seed_set = true; });
    cmd->add_option("--threads", args->threads,
                    "worker threads (overrides SEA_THREADS)");
    cmd->add_flag("--timings", args->timings, "record wall-clock runtimes");
    cmd->add_option("--out", args->out, "output directory");
  }
  deconv_cmd->add_option("--sigma", deconv.sigma, "convolution kernel width");

  try {
    app.parse(argc, argv);
    if (gen_cmd->parsed()) return run_gen_problem(gen);
    if (solve_cmd->parsed()) return run_solve(solve);
    if (verify_cmd->parsed()) return run_verify(verify);
    if (phase_cmd->parsed())
      return run_experiment_command(phase,
                                    sea::ExperimentKind::phase_transition);
    if (deconv_cmd->parsed())
      return run_experiment_command(deconv,
                                    sea::ExperimentKind::deconvolution);
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  } catch (const sea::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const sea::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const sea::Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
