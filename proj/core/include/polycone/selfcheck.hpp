#pragma once

#include "polycone/alm.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polycone {

enum class CheckLevel {
  /// Invariant suites plus one m=3 end-to-end run.
  quick,
  /// Adds an m=5 end-to-end run.
  full,
};

std::optional<CheckLevel> parse_check_level(std::string_view text);

struct CheckOptions {
  CheckLevel level = CheckLevel::quick;
  std::uint64_t seed = 1;
  /// Test hook: perturbs the measured grid count so the grid suite fails.
  bool inject_grid_fault = false;
};

struct CheckResult {
  std::string suite;
  /// Name of the invariant that was tested.
  std::string invariant;
  bool passed = false;
  std::string detail;
};

/// Runs the invariant suites: grid counts, projection (Moreau) properties,
/// NNQP against an enumeration oracle, gradient checks and monotonicity of
/// projections under refinement.
std::vector<CheckResult> run_self_check(const CheckOptions& options);

/// Minimizes lambda^T R lambda + 2 s^T lambda over lambda >= 0 by trying
/// every support pattern. Exponential; meant for dim <= 12.
double nnqp_enumeration_minimum(const Eigen::MatrixXd& R, const Eigen::VectorXd& s);

/// Central-difference check of the scaled augmented Lagrangian gradient in
/// the current state: max_i |g_i - fd_i| / max(1, |g_i|, |fd_i|), with step
/// h * max(1, |x_i|).
double lagrangian_finite_difference_check(const ProblemInstance& instance, ALMState& state,
                                          const Eigen::VectorXd& x, double h);

}  // namespace polycone
