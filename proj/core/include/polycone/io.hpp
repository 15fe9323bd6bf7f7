#pragma once

#include "polycone/alm.hpp"
#include "polycone/problem.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace polycone {

/// Malformed or inconsistent input file.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {objective, n, m, seed, x_star, x_bar, Q, P1, P2, certificates}. Each
/// matrix is a full row-major array of m*m numbers. Doubles are written in
/// shortest round-trip form, so parsing reproduces them bit-exactly.
std::string instance_to_json(const ProblemInstance& instance);
/// Throws SchemaError on missing fields, wrong shapes or unknown objectives.
ProblemInstance instance_from_json(const std::string& text);

void write_instance(const std::filesystem::path& path, const ProblemInstance& instance);
ProblemInstance read_instance(const std::filesystem::path& path);

/// Column order of the iteration CSV.
inline constexpr const char* kIterationCsvHeader =
    "k,grad_norm,v_max,rho,active_count,shell,eps_k,scale,inner_iterations,inner_failed,"
    "stationarity,complementarity,mu_norm,mu_hat_norm,identity_residual";

/// One row per outer iteration. Wall times are excluded so that identical
/// runs give identical files; see write_timing_csv.
void write_iteration_csv(std::ostream& out, const RunReport& report);
/// k,wall_time
void write_timing_csv(std::ostream& out, const RunReport& report);

/// Run summary: problem identity, configuration, termination, final
/// iterate, residuals and timings.
std::string report_to_json(const RunReport& report, const ProblemInstance& instance,
                           const ALMConfig& config, const std::string& label);

/// Fields of a report file needed to rebuild performance profiles.
struct ReportSummary {
  std::string problem;
  std::string solver;
  bool success = false;
  double wall_time = 0.0;
  int iterations = 0;
};
ReportSummary summary_from_report_json(const std::string& text);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace polycone
