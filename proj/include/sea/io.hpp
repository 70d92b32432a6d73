#pragma once

#include <cerrno>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sea/common.hpp"
#include "sea/problem.hpp"
#include "sea/solvers.hpp"
#include "sea/theory.hpp"

// File conventions: indices are 1-based in every file format; matrices
// are written as an `m,n` header followed by m comma-separated rows;
// vectors are one entry per line.

namespace sea {

using json = nlohmann::json;

inline std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_matrix(const std::filesystem::path& path, const Matrix& a) {
  std::ostringstream out;
  out << a.rows() << "," << a.cols() << "\n";
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      if (j) out << ",";
      out << format_double(a(i, j));
    }
    out << "\n";
  }
  write_text_file(path, out.str());
}

inline Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty matrix file");
  int m = 0, n = 0;
  if (std::sscanf(line.c_str(), "%d,%d", &m, &n) != 2 || m < 1 || n < 1)
    throw IoError("bad matrix header: " + line);
  Matrix a(m, n);
  for (int i = 0; i < m; ++i) {
    if (!std::getline(in, line)) throw IoError("matrix file truncated");
    std::stringstream row(line);
    std::string cell;
    for (int j = 0; j < n; ++j) {
      if (!std::getline(row, cell, ',')) throw IoError("short matrix row");
      a(i, j) = std::stod(cell);
    }
  }
  return a;
}

inline void write_vector(const std::filesystem::path& path, const Vector& v) {
  std::ostringstream out;
  for (int i = 0; i < v.size(); ++i) out << format_double(v[i]) << "\n";
  write_text_file(path, out.str());
}

inline Vector read_vector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    values.push_back(std::stod(line));
  }
  Vector v(values.size());
  for (size_t i = 0; i < values.size(); ++i) v[i] = values[i];
  return v;
}

// Header line `n,k`, then one `index,value` line per entry, 1-based.
inline void write_sparse_vector(const std::filesystem::path& path,
                                const SparseVector& x) {
  std::ostringstream out;
  out << x.n << "," << x.support.size() << "\n";
  for (int j = 0; j < x.support.size(); ++j)
    out << (x.support.idx[j] + 1) << "," << format_double(x.values[j])
        << "\n";
  write_text_file(path, out.str());
}

inline SparseVector read_sparse_vector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty sparse-vector file");
  int n = 0, k = 0;
  if (std::sscanf(line.c_str(), "%d,%d", &n, &k) != 2 || n < 1 || k < 0)
    throw IoError("bad sparse-vector header: " + line);
  std::vector<int> idx;
  std::vector<double> vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int i = 0;
    double v = 0;
    if (std::sscanf(line.c_str(), "%d,%lf", &i, &v) != 2)
      throw IoError("bad sparse-vector line: " + line);
    if (i < 1 || i > n) throw IoError("sparse-vector index out of range");
    idx.push_back(i - 1);
    vals.push_back(v);
  }
  if (static_cast<int>(idx.size()) != k)
    throw IoError("sparse-vector entry count does not match header");
  Support s;
  s.idx = idx;
  Vector values(vals.size());
  for (size_t j = 0; j < vals.size(); ++j) values[j] = vals[j];
  return SparseVector(n, std::move(s), std::move(values));
}

// Problem bundle directory: A.csv, y.csv, meta.json and, when ground
// truth is present, xstar.csv / e.csv referenced from the meta file.
inline void write_problem_bundle(const std::filesystem::path& dir,
                                 const Problem& p,
                                 const json& spec_echo = json::object()) {
  std::filesystem::create_directories(dir);
  write_matrix(dir / "A.csv", p.a);
  write_vector(dir / "y.csv", p.y);
  json meta;
  meta["m"] = p.rows();
  meta["n"] = p.cols();
  meta["k"] = p.k;
  meta["spec"] = spec_echo;
  meta["files"] = {{"A", "A.csv"}, {"y", "y.csv"}};
  if (p.truth) {
    write_sparse_vector(dir / "xstar.csv", p.truth->x_star);
    write_vector(dir / "e.csv", p.truth->e);
    meta["files"]["xstar"] = "xstar.csv";
    meta["files"]["e"] = "e.csv";
  }
  if (p.scaling) {
    write_vector(dir / "scales.csv", p.scaling->scales);
    meta["files"]["scales"] = "scales.csv";
  }
  write_text_file(dir / "meta.json", meta.dump(2) + "\n");
}

inline Problem read_problem_bundle(const std::filesystem::path& dir) {
  const json meta = json::parse(read_text_file(dir / "meta.json"));
  Problem p;
  p.a = read_matrix(dir / meta.at("files").at("A").get<std::string>());
  p.y = read_vector(dir / meta.at("files").at("y").get<std::string>());
  p.k = meta.at("k").get<int>();
  if (p.y.size() != p.a.rows())
    throw IoError("problem bundle: y length does not match A");
  if (p.k < 1 || p.k > p.a.cols())
    throw IoError("problem bundle: k out of range");
  if (meta.at("files").contains("xstar")) {
    GroundTruth truth;
    truth.x_star = read_sparse_vector(
        dir / meta.at("files").at("xstar").get<std::string>());
    truth.e =
        read_vector(dir / meta.at("files").at("e").get<std::string>());
    if (truth.x_star.n != p.a.cols() || truth.e.size() != p.a.rows())
      throw IoError("problem bundle: truth dimensions mismatch");
    p.truth = std::move(truth);
  }
  if (meta.at("files").contains("scales")) {
    ColumnScaling scaling;
    scaling.scales =
        read_vector(dir / meta.at("files").at("scales").get<std::string>());
    p.scaling = std::move(scaling);
  }
  return p;
}

// Trace rows: t,loss,new_support_flag,support with the support as
// `;`-joined 1-based indices.
inline void write_trace_csv(const std::filesystem::path& path,
                            const Trace& trace) {
  std::ostringstream out;
  out << "t,loss,new_support_flag,support\n";
  std::set<std::vector<int>> seen;
  for (size_t t = 0; t < trace.support_sequence.size(); ++t) {
    const Support& s = trace.support_sequence[t];
    const bool is_new = seen.insert(s.idx).second;
    out << t << ",";
    out << (t < trace.per_iteration_loss.size()
                ? format_double(trace.per_iteration_loss[t])
                : "nan");
    out << "," << (is_new ? 1 : 0) << ",";
    for (int j = 0; j < s.size(); ++j) {
      if (j) out << ";";
      out << (s.idx[j] + 1);
    }
    out << "\n";
  }
  write_text_file(path, out.str());
}

struct TraceFile {
  std::vector<double> losses;
  std::vector<Support> supports;
};

inline TraceFile read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty trace file");
  TraceFile out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');  // t
    if (!std::getline(row, cell, ',')) throw IoError("bad trace row");
    out.losses.push_back(std::stod(cell));
    std::getline(row, cell, ',');  // new-support flag
    if (!std::getline(row, cell, ',')) cell.clear();
    Support s;
    std::stringstream items(cell);
    std::string item;
    while (std::getline(items, item, ';'))
      if (!item.empty()) s.idx.push_back(std::stoi(item) - 1);
    out.supports.push_back(std::move(s));
  }
  return out;
}

inline json solver_result_to_json(const std::string& algorithm,
                                  const SolverResult& res) {
  json out;
  out["algorithm"] = algorithm;
  out["t_best"] = res.t_best;
  out["loss_best"] = res.loss_best;
  out["iterations_run"] = res.iterations_run;
  out["supports_explored"] = res.supports_explored;
  out["supports_after_init"] = res.supports_after_init;
  out["least_squares_solves"] = res.ls_solves;
  out["eta"] = res.eta_used;
  json entries = json::array();
  for (int j = 0; j < res.x_best.support.size(); ++j)
    entries.push_back({{"index", res.x_best.support.idx[j] + 1},
                       {"value", res.x_best.values[j]}});
  out["x_best"] = {{"n", res.x_best.n}, {"entries", entries}};
  return out;
}

inline json bound_to_json(double value) {
  if (std::isinf(value)) return "inf";
  return value;
}

inline json theory_report_to_json(const TheoryReport& report) {
  json out;
  json delta = json::object();
  for (const auto& [order, value] : report.delta)
    delta[std::to_string(order)] = value;
  for (int order : report.delta_skipped)
    delta[std::to_string(order)] = "not computed";
  out["delta"] = delta;
  out["alpha_k"] = std::isnan(report.alpha_k) ? json(nullptr)
                                              : json(report.alpha_k);
  out["gamma_k"] = std::isnan(report.gamma_k) ? json(nullptr)
                                              : json(report.gamma_k);
  out["tau"] = std::isnan(report.tau) ? json(nullptr) : json(report.tau);
  out["hrip_holds"] = report.hrip_holds;
  out["hsrip_holds"] = report.hsrip_holds;
  out["hr_holds"] = report.hr_holds;
  out["rc_prime_holds"] = report.rc_prime_holds;
  out["min_cond_holds"] = report.min_cond_holds;
  out["bounds"] = {{"T_oracle", bound_to_json(report.bounds.t_oracle)},
                   {"T_max", bound_to_json(report.bounds.t_max)},
                   {"T_RIP", bound_to_json(report.bounds.t_rip)},
                   {"T_SRIP", bound_to_json(report.bounds.t_srip)},
                   {"T_max_sharp", bound_to_json(report.t_max_sharp)}};
  out["eps_max"] = report.eps_max;
  out["annihilation_ok"] = report.annihilation_ok;
  out["lemma_bound_ok"] = report.lemma_bound_ok;
  out["closed_form_max_rel_error"] = report.closed_form_max_rel_error;
  out["counting_ok"] = report.counting_ok;
  out["supports_consistent"] = report.supports_consistent;
  out["t_s"] = report.t_s;
  return out;
}

}  // namespace sea
