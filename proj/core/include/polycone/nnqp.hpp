#pragma once

#include <Eigen/Dense>

namespace polycone {

/// Solution of  min lambda^T R lambda + 2 s^T lambda  s.t. lambda >= 0.
struct NNQPResult {
  Eigen::VectorXd lambda;
  /// max_i |min(lambda_i, g_i)| / (1 + ||s||_inf) with g = 2 (R lambda + s).
  /// Zero iff lambda is a KKT point.
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

enum class NNQPMethod {
  /// Lawson-Hanson active set working on the Gram matrix R directly. Exact
  /// up to rounding and insensitive to rank deficiency of R.
  active_set,
  /// Projected gradient with Barzilai-Borwein steps, a non-monotone Armijo
  /// safeguard and a 1/L fallback step.
  projected_gradient,
};

struct NNQPOptions {
  double tol = 1e-9;
  /// <= 0 selects the method default: 3*dim + 10 for the active set,
  /// 50*dim for projected gradient.
  int max_iter = 0;
  NNQPMethod method = NNQPMethod::active_set;
};

/// lambda^T R lambda + 2 s^T lambda
double nnqp_objective(const Eigen::Ref<const Eigen::MatrixXd>& R,
                      const Eigen::Ref<const Eigen::VectorXd>& s,
                      const Eigen::Ref<const Eigen::VectorXd>& lambda);

/// The scaled complementarity residual documented on NNQPResult.
double nnqp_kkt_residual(const Eigen::Ref<const Eigen::MatrixXd>& R,
                         const Eigen::Ref<const Eigen::VectorXd>& s,
                         const Eigen::Ref<const Eigen::VectorXd>& lambda);

/// R must be symmetric PSD. `lambda0` may be empty (cold start); otherwise it
/// must be nonnegative with the dimension of s. The result is never worse in
/// objective than lambda0 unless lambda0 fails the KKT test. Throws std::invalid_argument on dimension or sign
/// errors; non-convergence is reported through `converged`.
NNQPResult solve_nnqp(const Eigen::Ref<const Eigen::MatrixXd>& R,
                      const Eigen::Ref<const Eigen::VectorXd>& s,
                      const Eigen::Ref<const Eigen::VectorXd>& lambda0,
                      const NNQPOptions& options = {});

}  // namespace polycone
