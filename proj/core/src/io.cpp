#include "polycone/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace polycone {

namespace {

using json = nlohmann::json;
using Eigen::VectorXd;

json vector_json(const VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json matrix_json(const SymMatrix& s) {
  json a = json::array();
  for (int i = 0; i < s.order(); ++i) {
    for (int j = 0; j < s.order(); ++j) a.push_back(s(i, j));
  }
  return a;
}

// JSON has no infinity; non-finite values are written as strings.
json number_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

VectorXd parse_vector(const json& j, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw SchemaError(std::string(what) + ": expected an array of " + std::to_string(n) +
                      " numbers");
  }
  VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) {
      throw SchemaError(std::string(what) + ": non-numeric entry");
    }
    v(i) = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

SymMatrix parse_matrix(const json& j, int m, const char* what) {
  const VectorXd flat = parse_vector(j, m * m, what);
  Eigen::MatrixXd a(m, m);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) a(i, k) = flat(i * m + k);
  }
  try {
    return SymMatrix::from_matrix(a);
  } catch (const std::invalid_argument&) {
    throw SchemaError(std::string(what) + ": matrix is not symmetric");
  }
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string instance_to_json(const ProblemInstance& instance) {
  json j;
  j["objective"] = std::string(objective_name(instance.objective));
  j["n"] = instance.n();
  j["m"] = instance.m();
  j["seed"] = instance.seed;
  j["x_star"] = vector_json(instance.x_star);
  j["x_bar"] = vector_json(instance.x_bar);
  json q = json::array();
  for (const SymMatrix& qi : instance.map.matrices()) q.push_back(matrix_json(qi));
  j["Q"] = std::move(q);
  j["P1"] = matrix_json(instance.p1);
  j["P2"] = matrix_json(instance.p2);
  j["certificates"] = {
      {"max_eig_at_minimizer", instance.certificates.max_eig_at_minimizer},
      {"min_eig_at_anchor", instance.certificates.min_eig_at_anchor},
      {"min_eig_p1", instance.certificates.min_eig_p1},
      {"min_eig_p2", instance.certificates.min_eig_p2},
  };
  return j.dump(2) + "\n";
}

ProblemInstance instance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  try {
    const std::string name = field(j, "objective").get<std::string>();
    const auto id = parse_objective(name);
    if (!id) throw SchemaError("unknown objective '" + name + "'");
    const int n = field(j, "n").get<int>();
    const int m = field(j, "m").get<int>();
    if (n < 1 || m < 1) throw SchemaError("n and m must be positive");
    const json& qj = field(j, "Q");
    if (!qj.is_array() || static_cast<int>(qj.size()) != n + 1) {
      throw SchemaError("Q: expected n+1 matrices");
    }
    std::vector<SymMatrix> q;
    for (const json& qi : qj) q.push_back(parse_matrix(qi, m, "Q"));
    ProblemInstance inst{*id,
                         LinearMatrixMap(std::move(q)),
                         parse_vector(field(j, "x_star"), n, "x_star"),
                         parse_vector(field(j, "x_bar"), n, "x_bar"),
                         field(j, "seed").get<std::uint64_t>(),
                         j.contains("P1") ? parse_matrix(j["P1"], m, "P1") : SymMatrix(m),
                         j.contains("P2") ? parse_matrix(j["P2"], m, "P2") : SymMatrix(m),
                         {}};
    const json& c = field(j, "certificates");
    inst.certificates.max_eig_at_minimizer = field(c, "max_eig_at_minimizer").get<double>();
    inst.certificates.min_eig_at_anchor = field(c, "min_eig_at_anchor").get<double>();
    inst.certificates.min_eig_p1 = c.value("min_eig_p1", 0.0);
    inst.certificates.min_eig_p2 = c.value("min_eig_p2", 0.0);
    return inst;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("instance schema: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("instance schema: ") + e.what());
  }
}

void write_instance(const std::filesystem::path& path, const ProblemInstance& instance) {
  write_text(path, instance_to_json(instance));
}

ProblemInstance read_instance(const std::filesystem::path& path) {
  return instance_from_json(read_text(path));
}

void write_iteration_csv(std::ostream& out, const RunReport& report) {
  out << kIterationCsvHeader << '\n';
  for (const IterationRecord& r : report.records) {
    out << r.k << ',' << csv_number(r.grad_norm) << ',' << csv_number(r.v_max) << ','
        << csv_number(r.rho) << ',' << r.active_count << ',' << r.shell << ','
        << csv_number(r.eps_k) << ',' << csv_number(r.scale) << ',' << r.inner_iterations << ','
        << (r.inner_failed ? 1 : 0) << ',' << csv_number(r.stationarity) << ','
        << csv_number(r.complementarity) << ',' << csv_number(r.mu_norm) << ','
        << csv_number(r.mu_hat_norm) << ',' << csv_number(r.identity_residual) << '\n';
  }
}

void write_timing_csv(std::ostream& out, const RunReport& report) {
  out << "k,wall_time\n";
  for (const IterationRecord& r : report.records) {
    out << r.k << ',' << csv_number(r.wall_time) << '\n';
  }
}

std::string report_to_json(const RunReport& report, const ProblemInstance& instance,
                           const ALMConfig& config, const std::string& label) {
  json j;
  j["problem"] = std::string(objective_name(instance.objective)) + "_m" +
                 std::to_string(instance.m()) + "_n" + std::to_string(instance.n()) + "_s" +
                 std::to_string(instance.seed);
  j["solver"] = label;
  j["objective"] = std::string(objective_name(instance.objective));
  j["n"] = instance.n();
  j["m"] = instance.m();
  j["instance_seed"] = instance.seed;
  j["config"] = {
      {"mode", std::string(to_string(config.mode))},
      {"rho0", config.rho0},
      {"sigma", config.sigma},
      {"tau", config.tau},
      {"safeguard_radius", config.safeguard_radius},
      {"eps0", config.eps0},
      {"eps_l", config.eps_l},
      {"eps_v", config.eps_v},
      {"eps_min", config.eps_min},
      {"zeta", config.zeta},
      {"r_max", config.r_max},
      {"max_outer", config.max_outer},
      {"fail_fraction", config.fail_fraction},
      {"fail_min_iters", config.fail_min_iters},
      {"inner_max_iter", config.inner_max_iter},
      {"seed", config.seed},
      {"mu0_policy", std::string(to_string(config.mu0_policy))},
      {"norms", {{"gradient", "inf"}, {"v", "max"}, {"safeguard", "frobenius"}}},
  };
  j["termination"] = std::string(to_string(report.termination));
  j["success"] = report.success();
  j["iterations"] = report.iterations;
  j["fails"] = report.fails;
  j["projection_failures"] = report.projection_failures;
  j["grid_size"] = report.grid_size;
  j["x_final"] = vector_json(report.x_final);
  j["mu_final"] = matrix_json(report.mu_final);
  j["objective_value"] = number_json(report.objective_value);
  j["distance_to_spn"] = number_json(report.distance_to_spn);
  j["distance_converged"] = report.distance_converged;
  if (!report.records.empty()) {
    const IterationRecord& last = report.records.back();
    j["final"] = {
        {"grad_norm", number_json(last.grad_norm)},
        {"v_max", number_json(last.v_max)},
        {"rho", number_json(last.rho)},
        {"active_count", last.active_count},
        {"shell", last.shell},
        {"stationarity", number_json(last.stationarity)},
        {"complementarity", number_json(last.complementarity)},
        {"mu_norm", number_json(last.mu_norm)},
    };
  }
  j["wall_time"] = report.total_wall_time;
  json times = json::array();
  for (const IterationRecord& r : report.records) times.push_back(r.wall_time);
  j["iteration_wall_times"] = std::move(times);
  return j.dump(2) + "\n";
}

ReportSummary summary_from_report_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    ReportSummary s;
    s.problem = field(j, "problem").get<std::string>();
    s.solver = field(j, "solver").get<std::string>();
    s.success = field(j, "success").get<bool>();
    s.wall_time = field(j, "wall_time").get<double>();
    s.iterations = field(j, "iterations").get<int>();
    return s;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("report schema: ") + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace polycone
