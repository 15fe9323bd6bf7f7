#pragma once

#include "polycone/bfgs.hpp"
#include "polycone/cone_approx.hpp"
#include "polycone/problem.hpp"
#include "polycone/sym_matrix.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polycone {

enum class Mode {
  /// Active directions start at shell 0 and grow by zeta per iteration.
  proposed,
  /// The full grid is active from the first iteration.
  standard,
};

enum class Mu0Policy {
  /// mu_hat^0 = R * I, as used in the reference experiments. R * I is
  /// copositive, so it is not in the polar of K^0.
  paper_literal_RI,
  /// R * I projected onto B ∩ (K^0)°, which is the zero matrix.
  polar_projected,
};

enum class Termination { success, fail_policy, max_outer };

std::string_view to_string(Mode mode);
std::string_view to_string(Mu0Policy policy);
std::string_view to_string(Termination termination);
std::optional<Mode> parse_mode(std::string_view text);
std::optional<Mu0Policy> parse_mu0_policy(std::string_view text);

struct ALMConfig {
  double rho0 = 0.1;
  double sigma = 0.9;
  double tau = 2.0;
  /// Radius of the multiplier safeguard ball (Frobenius norm).
  double safeguard_radius = 1e12;
  double eps0 = 1.0;
  double eps_l = 1e-5;
  double eps_v = 1e-5;
  /// Lower bound on the inner tolerance; eps_k = max(eps_min, min(eps0, ||v^{k-1}||_max)).
  double eps_min = 1e-7;
  int zeta = 45;
  int r_max = 15;
  Mode mode = Mode::proposed;
  int max_outer = 200;
  double fail_fraction = 0.20;
  int fail_min_iters = 14;
  int inner_max_iter = 2000;
  /// Seeds the starting point x^{-1}, uniform on [-100, 100]^n.
  std::uint64_t seed = 0;
  Mu0Policy mu0_policy = Mu0Policy::paper_literal_RI;
  /// Iterations whose gradient samples are averaged into the scaling divisor.
  int scaling_iterations = 5;
  NNQPOptions projection;

  /// Reference parameters for matrix order m: (rho0, eps0, zeta, r_max) =
  /// (0.1, 1.0, 45, 15) for m = 3 and (1.0, 0.1, 70, 7) for m = 5; other
  /// orders use the nearer of the two parameter sets with the largest r_max
  /// whose grid stays below 2000 points.
  static ALMConfig defaults_for(int m);
  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
};

/// Mutable state of one run of the outer loop.
struct ALMState {
  int k = 0;
  Eigen::VectorXd x;
  SymMatrix mu{1};
  SymMatrix mu_hat{1};
  SymMatrix v{1};
  double rho = 1.0;
  double eps_k = 1.0;
  /// Divisor applied to the augmented Lagrangian (1 until fixed).
  double scale = 1.0;
  int fail_count = 0;
  std::vector<double> scale_samples;
  std::shared_ptr<PolyhedralConeApprox> cone;
  /// Last QP weights, zero-padded into the next projection.
  Eigen::VectorXd warm_lambda;
  int projection_failures = 0;
  NNQPOptions projection;

  int active_count() const { return cone->active_count(); }
};

/// Builds the grid and cone for `config`, sets x = x^{-1}, rho = rho0 and
/// mu_hat = mu_hat^0 per the configured policy.
ALMState make_initial_state(const ProblemInstance& instance, const ALMConfig& config);

/// Evaluates the scaled augmented Lagrangian
///   (f(x) + rho/2 ||P(g(x) + mu_hat/rho)||^2 - ||mu_hat||^2 / (2 rho)) / scale
/// with P the projection onto the polar of the current approximation.
/// `value_shifted` omits the constant -||mu_hat||^2/(2 rho) term, which is
/// what the inner solver sees. Projection failures yield +inf.
class AugmentedLagrangian {
 public:
  AugmentedLagrangian(const ProblemInstance& instance, ALMState& state);

  double value(const Eigen::VectorXd& x);
  double value_shifted(const Eigen::VectorXd& x);
  Eigen::VectorXd gradient(const Eigen::VectorXd& x);
  /// Shifted value and gradient from a single projection.
  double evaluate(const Eigen::VectorXd& x, Eigen::VectorXd& grad);
  /// Unscaled gradient of the unshifted function, i.e. grad f + Dg^*[mu(x)].
  Eigen::VectorXd unscaled_gradient(const Eigen::VectorXd& x);

 private:
  PolarProjection project(const Eigen::VectorXd& x, SymMatrix& shifted);

  const ProblemInstance& instance_;
  ALMState& state_;
};

double aug_lagrangian_value(const Eigen::VectorXd& x, ALMState& state,
                            const ProblemInstance& instance);
Eigen::VectorXd aug_lagrangian_grad(const Eigen::VectorXd& x, ALMState& state,
                                    const ProblemInstance& instance);

struct MultiplierUpdate {
  /// mu^k = rho P(g(x^k) + mu_hat^k / rho)
  SymMatrix mu{1};
  /// mu^k scaled back into the safeguard ball.
  SymMatrix mu_hat_next{1};
  bool projection_converged = true;
};

/// Uses state.x, state.mu_hat, state.rho and state.cone.
MultiplierUpdate multiplier_update(ALMState& state, const ProblemInstance& instance,
                                   double safeguard_radius);

/// v^k = mu_hat^k / rho - P(g(x^k) + mu_hat^k / rho).
SymMatrix feasibility_measure(ALMState& state, const ProblemInstance& instance);

/// Keeps rho when ||v^k||_max <= sigma ||v^{k-1}||_max, otherwise tau * rho.
double penalty_update(double rho, double v_norm, double v_prev_norm, double sigma, double tau);

struct RagpResiduals {
  /// ||grad f(x) + Dg^*[mu]||_inf
  double stationarity = 0.0;
  /// <mu, P_K(g(x))>
  double complementarity = 0.0;
};

RagpResiduals ragp_residuals(const Eigen::VectorXd& x, const SymMatrix& mu,
                             const PolyhedralConeApprox& cone, const ProblemInstance& instance);

struct IterationRecord {
  int k = 0;
  /// ||grad L||_inf of the scaled augmented Lagrangian at x^k.
  double grad_norm = 0.0;
  double v_max = 0.0;
  double rho = 0.0;
  int active_count = 0;
  /// Smallest shell r with delta^m_r covering the active directions.
  int shell = 0;
  double eps_k = 0.0;
  double scale = 1.0;
  int inner_iterations = 0;
  bool inner_failed = false;
  double stationarity = 0.0;
  double complementarity = 0.0;
  double mu_norm = 0.0;
  double mu_hat_norm = 0.0;
  /// ||mu - (mu_hat - rho v)||_F / (1 + ||mu_hat||_F + ||mu||_F)
  double identity_residual = 0.0;
  /// Seconds spent in this outer iteration.
  double wall_time = 0.0;
};

struct RunReport {
  std::vector<IterationRecord> records;
  Termination termination = Termination::max_outer;
  Eigen::VectorXd x_final;
  SymMatrix mu_final{1};
  double distance_to_spn = 0.0;
  bool distance_converged = false;
  int iterations = 0;
  int fails = 0;
  int projection_failures = 0;
  int grid_size = 0;
  double total_wall_time = 0.0;
  double objective_value = 0.0;

  bool success() const { return termination == Termination::success; }
};

/// Runs the safeguarded augmented Lagrangian loop with mid-run refinement of
/// the polyhedral approximation. Never throws for numerical trouble; the
/// outcome is encoded in the report's termination status.
RunReport run_alm(const ProblemInstance& instance, const ALMConfig& config);

struct PenaltyDiagnosticOptions {
  /// Directions added per penalty value; 0 keeps the full grid throughout.
  int zeta = 0;
  int r_max = 15;
  double gtol = 1e-8;
  int inner_max_iter = 5000;
};

struct PenaltyRecord {
  double rho = 0.0;
  Eigen::VectorXd x;
  /// ||grad f + Dg^*[mu] + (x - x_anchor)||_inf with mu = rho P(g(x)), i.e.
  /// the gradient of the regularized penalty function.
  double stationarity = 0.0;
  /// ||grad f(x)||_inf + ||Dg^*[mu]||_inf + ||x - x_anchor||_inf, the scale
  /// the stationarity residual is compared against.
  double stationarity_scale = 0.0;
  /// ||P(g(x))||_F, distance of g(x) to the approximation.
  double infeasibility = 0.0;
  int active_count = 0;
  bool inner_success = false;
};

/// Minimizes f(x) + rho/2 ||P(g(x))||^2 + 1/2 ||x - x_anchor||^2 over the
/// ball ||x - x_anchor|| <= delta for each rho in the schedule, warm
/// starting each solve from the previous minimizer.
std::vector<PenaltyRecord> penalty_method_diagnostic(const ProblemInstance& instance,
                                                     const Eigen::VectorXd& x_anchor, double delta,
                                                     const std::vector<double>& rho_schedule,
                                                     const PenaltyDiagnosticOptions& options = {});

}  // namespace polycone
