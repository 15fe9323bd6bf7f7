#include "polycone/nnqp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

namespace polycone {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using MatRef = Eigen::Ref<const MatrixXd>;
using VecRef = Eigen::Ref<const VectorXd>;

void validate(const MatRef& R, const VecRef& s, const VecRef& lambda0, double tol) {
  if (R.rows() != R.cols()) throw std::invalid_argument("solve_nnqp: R must be square");
  if (R.rows() != s.size()) throw std::invalid_argument("solve_nnqp: dim(R) != dim(s)");
  if (lambda0.size() != 0 && lambda0.size() != s.size()) {
    throw std::invalid_argument("solve_nnqp: dim(lambda0) != dim(s)");
  }
  if (lambda0.size() != 0 && (lambda0.array() < 0.0).any()) {
    throw std::invalid_argument("solve_nnqp: lambda0 must be nonnegative");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("solve_nnqp: tol must be positive");
}

// R * lambda touching only the columns in the support.
VectorXd sparse_product(const MatRef& R, const VectorXd& lambda, const std::vector<Index>& support) {
  VectorXd out = VectorXd::Zero(R.rows());
  for (Index j : support) out.noalias() += lambda(j) * R.col(j);
  return out;
}

NNQPResult solve_active_set(const MatRef& R, const VecRef& s, const VecRef& lambda0,
                            const NNQPOptions& opt) {
  const Index n = s.size();
  const int max_iter = opt.max_iter > 0 ? opt.max_iter : static_cast<int>(3 * n + 10);
  const double scale = 1.0 + (n > 0 ? s.cwiseAbs().maxCoeff() : 0.0);
  const double add_threshold = opt.tol * scale * 1e-3;

  VectorXd lambda = VectorXd::Zero(n);
  std::vector<char> in_support(static_cast<std::size_t>(n), 0);
  std::vector<char> blocked(static_cast<std::size_t>(n), 0);
  std::vector<Index> support;
  if (lambda0.size() == n) {
    for (Index i = 0; i < n; ++i) {
      if (lambda0(i) > 0.0) {
        lambda(i) = lambda0(i);
        support.push_back(i);
        in_support[static_cast<std::size_t>(i)] = 1;
      }
    }
  }

  NNQPResult result;
  bool need_subproblem = !support.empty();
  Index last_added = -1;

  while (true) {
    if (!need_subproblem) {
      const VectorXd w = -(sparse_product(R, lambda, support) + s);
      Index best = -1;
      double best_w = add_threshold;
      for (Index i = 0; i < n; ++i) {
        if (in_support[static_cast<std::size_t>(i)] || blocked[static_cast<std::size_t>(i)]) continue;
        if (w(i) > best_w) {
          best_w = w(i);
          best = i;
        }
      }
      if (best < 0) break;
      support.push_back(best);
      in_support[static_cast<std::size_t>(best)] = 1;
      last_added = best;
    }
    need_subproblem = false;

    // Minimize over the current support, stepping back toward feasibility
    // whenever the unconstrained subproblem solution leaves the orthant.
    bool progressed = false;
    while (!support.empty()) {
      if (++result.iterations > max_iter) break;
      const Index k = static_cast<Index>(support.size());
      MatrixXd Rpp(k, k);
      VectorXd rhs(k);
      for (Index a = 0; a < k; ++a) {
        rhs(a) = -s(support[static_cast<std::size_t>(a)]);
        for (Index b = 0; b < k; ++b) {
          Rpp(a, b) = R(support[static_cast<std::size_t>(a)], support[static_cast<std::size_t>(b)]);
        }
      }
      const Eigen::LDLT<MatrixXd> ldlt(Rpp);
      VectorXd z = ldlt.solve(rhs);
      for (int refine = 0; refine < 2 && z.allFinite(); ++refine) z += ldlt.solve(rhs - Rpp * z);
      const double solve_err = (Rpp * z - rhs).norm();
      const bool solve_ok = ldlt.info() == Eigen::Success && z.allFinite() &&
                            solve_err <= 1e-8 * (1.0 + rhs.norm() + Rpp.norm() * z.norm());
      if (!solve_ok) {
        // Numerically dependent column: undo the last addition and exclude it.
        if (last_added >= 0 && in_support[static_cast<std::size_t>(last_added)]) {
          support.erase(std::find(support.begin(), support.end(), last_added));
          in_support[static_cast<std::size_t>(last_added)] = 0;
          lambda(last_added) = 0.0;
          blocked[static_cast<std::size_t>(last_added)] = 1;
          last_added = -1;
          continue;
        }
        // Dependent warm-start support: restart cold.
        for (Index i : support) {
          lambda(i) = 0.0;
          in_support[static_cast<std::size_t>(i)] = 0;
        }
        support.clear();
        break;
      }

      if ((z.array() > 0.0).all()) {
        for (Index a = 0; a < k; ++a) lambda(support[static_cast<std::size_t>(a)]) = z(a);
        progressed = true;
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      Index limiting = -1;
      for (Index a = 0; a < k; ++a) {
        if (z(a) > 0.0) continue;
        const double li = lambda(support[static_cast<std::size_t>(a)]);
        const double ratio = li / (li - z(a));
        if (ratio < alpha) {
          alpha = ratio;
          limiting = support[static_cast<std::size_t>(a)];
        }
      }
      if (alpha > 0.0) progressed = true;
      for (Index a = 0; a < k; ++a) {
        const Index i = support[static_cast<std::size_t>(a)];
        lambda(i) += alpha * (z(a) - lambda(i));
      }
      lambda(limiting) = 0.0;
      std::vector<Index> kept;
      for (Index i : support) {
        if (lambda(i) > 0.0) {
          kept.push_back(i);
        } else {
          lambda(i) = 0.0;
          in_support[static_cast<std::size_t>(i)] = 0;
        }
      }
      support = std::move(kept);
    }
    if (result.iterations > max_iter) break;
    if (last_added >= 0 && !in_support[static_cast<std::size_t>(last_added)] && !progressed) {
      // Rounding made the freshly added index useless; do not pick it again
      // until the iterate moves.
      blocked[static_cast<std::size_t>(last_added)] = 1;
    } else if (progressed) {
      std::fill(blocked.begin(), blocked.end(), 0);
    }
    last_added = -1;
  }

  result.lambda = std::move(lambda);
  result.kkt_residual = nnqp_kkt_residual(R, s, result.lambda);
  result.converged = result.kkt_residual <= opt.tol && result.iterations <= max_iter;
  return result;
}

double power_iteration_max_eigen(const MatRef& R) {
  const Index n = R.rows();
  if (n == 0) return 0.0;
  VectorXd v = VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  double est = 0.0;
  for (int it = 0; it < 100; ++it) {
    VectorXd w = R * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    const double next = v.dot(w);
    v = w / nw;
    if (std::abs(next - est) <= 1e-6 * std::abs(next)) {
      est = next;
      break;
    }
    est = next;
  }
  // Power iteration underestimates; pad so 1/L stays a descent step.
  return 1.05 * std::max(est, R.diagonal().maxCoeff());
}

NNQPResult solve_projected_gradient(const MatRef& R, const VecRef& s, const VecRef& lambda0,
                                    const NNQPOptions& opt) {
  const Index n = s.size();
  const int max_iter = opt.max_iter > 0 ? opt.max_iter : static_cast<int>(50 * n);
  const double lipschitz = 2.0 * power_iteration_max_eigen(R);
  const double fixed_step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

  VectorXd lambda = lambda0.size() == n ? VectorXd(lambda0) : VectorXd::Zero(n);
  VectorXd Rl = R * lambda;
  VectorXd grad = 2.0 * (Rl + s);
  double f = lambda.dot(Rl) + 2.0 * s.dot(lambda);
  std::deque<double> history{f};
  constexpr std::size_t kMemory = 10;
  double step = fixed_step;

  NNQPResult result;
  for (result.iterations = 0; result.iterations < max_iter; ++result.iterations) {
    if (nnqp_kkt_residual(R, s, lambda) <= opt.tol) break;
    const double reference = *std::max_element(history.begin(), history.end());
    VectorXd trial;
    VectorXd Rt;
    double ft = 0.0;
    double t = step;
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt) {
      trial = (lambda - t * grad).cwiseMax(0.0);
      Rt = R * trial;
      ft = trial.dot(Rt) + 2.0 * s.dot(trial);
      if (ft <= reference + 1e-4 * grad.dot(trial - lambda)) {
        accepted = true;
        break;
      }
      t *= 0.5;
      if (t < fixed_step) break;
    }
    if (!accepted) {
      trial = (lambda - fixed_step * grad).cwiseMax(0.0);
      Rt = R * trial;
      ft = trial.dot(Rt) + 2.0 * s.dot(trial);
    }
    const VectorXd sk = trial - lambda;
    const VectorXd grad_next = 2.0 * (Rt + s);
    const VectorXd yk = grad_next - grad;
    const double sy = sk.dot(yk);
    step = sy > 0.0 ? std::clamp(sk.squaredNorm() / sy, 1e-3 * fixed_step, 1e6 * fixed_step)
                    : fixed_step;
    lambda = std::move(trial);
    grad = grad_next;
    f = ft;
    history.push_back(f);
    if (history.size() > kMemory) history.pop_front();
  }
  result.lambda = std::move(lambda);
  result.kkt_residual = nnqp_kkt_residual(R, s, result.lambda);
  result.converged = result.kkt_residual <= opt.tol;
  return result;
}

}  // namespace

double nnqp_objective(const MatRef& R, const VecRef& s, const VecRef& lambda) {
  return lambda.dot(R * lambda) + 2.0 * s.dot(lambda);
}

double nnqp_kkt_residual(const MatRef& R, const VecRef& s, const VecRef& lambda) {
  if (s.size() == 0) return 0.0;
  std::vector<Index> support;
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) != 0.0) support.push_back(i);
  }
  const VectorXd g = 2.0 * (sparse_product(R, lambda, support) + s);
  double worst = 0.0;
  for (Index i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(std::min(lambda(i), g(i))));
  return worst / (1.0 + s.cwiseAbs().maxCoeff());
}

NNQPResult solve_nnqp(const MatRef& R, const VecRef& s, const VecRef& lambda0,
                      const NNQPOptions& options) {
  validate(R, s, lambda0, options.tol);
  NNQPResult result = options.method == NNQPMethod::active_set
                          ? solve_active_set(R, s, lambda0, options)
                          : solve_projected_gradient(R, s, lambda0, options);
  if (!result.converged && options.method == NNQPMethod::active_set) {
    // A warm support can be badly conditioned; retry cold, then polish with
    // projected gradient from the best point found.
    if (lambda0.size() == s.size()) {
      NNQPResult cold = solve_active_set(R, s, VectorXd(), options);
      cold.iterations += result.iterations;
      if (cold.converged || cold.kkt_residual < result.kkt_residual) result = std::move(cold);
    }
    if (!result.converged) {
      NNQPOptions pg = options;
      pg.method = NNQPMethod::projected_gradient;
      pg.max_iter = 0;
      NNQPResult polished = solve_projected_gradient(R, s, result.lambda, pg);
      polished.iterations += result.iterations;
      if (polished.converged || polished.kkt_residual < result.kkt_residual) {
        result = std::move(polished);
      }
    }
  }
  if (lambda0.size() == s.size() && s.size() > 0 &&
      nnqp_objective(R, s, result.lambda) > nnqp_objective(R, s, lambda0)) {
    const double warm_kkt = nnqp_kkt_residual(R, s, lambda0);
    if (!result.converged || warm_kkt <= options.tol) {
      result.lambda = lambda0;
      result.kkt_residual = warm_kkt;
      result.converged = warm_kkt <= options.tol;
    }
  }
  return result;
}

}  // namespace polycone
