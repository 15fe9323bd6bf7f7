#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace polycone {

/// Returns f(x) and writes the gradient into `grad`. Non-finite values are
/// allowed and are treated as rejected trial points.
using ValueAndGradient = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct InnerOptions {
  /// Success when ||grad||_inf <= gtol (projected gradient when a projector
  /// is set).
  double gtol = 1e-5;
  int max_iter = 2000;
  double c1 = 1e-4;
  double c2 = 0.9;
  /// Optional Euclidean projection onto a closed convex set; trial points
  /// are projected and the line search falls back to projected Armijo
  /// backtracking.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> projector;
};

struct InnerResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd grad;
  /// ||grad||_inf, or the projected-gradient norm with a projector.
  double grad_norm = 0.0;
  bool success = false;
  int iterations = 0;
  int evaluations = 0;
  std::string message;
};

/// BFGS on the inverse Hessian, identity start, strong-Wolfe line search.
/// Failure (iteration cap or line-search breakdown) returns the best point
/// found with success = false. Throws std::invalid_argument if gtol <= 0.
InnerResult inner_solve(const ValueAndGradient& fn, const Eigen::VectorXd& x_start,
                        const InnerOptions& options);

/// Convenience overload for separate value and gradient callables.
InnerResult inner_solve(const std::function<double(const Eigen::VectorXd&)>& value_fn,
                        const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad_fn,
                        const Eigen::VectorXd& x_start, double gtol, int max_iter = 2000);

}  // namespace polycone
