#include "polycone/bfgs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace polycone {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Trial {
  double alpha = 0.0;
  double f = std::numeric_limits<double>::infinity();
  double slope = 0.0;
  VectorXd x;
  VectorXd g;
};

class LineSearch {
 public:
  LineSearch(const ValueAndGradient& fn, const InnerOptions& opt, int& evaluations)
      : fn_(fn), opt_(opt), evaluations_(evaluations) {}

  // Strong Wolfe search along p from (x, f0, g0). Returns false when no
  // step with sufficient decrease was found.
  bool wolfe(const VectorXd& x, double f0, const VectorXd& g0, const VectorXd& p, double alpha0,
             Trial& out) {
    const double d0 = g0.dot(p);
    Trial prev{0.0, f0, d0, x, g0};
    double alpha = alpha0;
    for (int i = 0; i < 40; ++i) {
      Trial cur = eval(x, p, alpha);
      if (!std::isfinite(cur.f) || cur.f > f0 + opt_.c1 * alpha * d0 || (i > 0 && cur.f >= prev.f)) {
        return zoom(x, f0, d0, p, prev, cur, out);
      }
      if (std::abs(cur.slope) <= -opt_.c2 * d0) {
        out = std::move(cur);
        return true;
      }
      if (cur.slope >= 0.0) return zoom(x, f0, d0, p, cur, prev, out);
      prev = std::move(cur);
      alpha *= 2.0;
    }
    return false;
  }

  // Projected Armijo backtracking along x -> P(x + alpha p).
  bool projected_armijo(const VectorXd& x, double f0, const VectorXd& g0, const VectorXd& p,
                        double alpha, Trial& out) {
    for (int i = 0; i < 60; ++i) {
      Trial cur;
      cur.alpha = alpha;
      cur.x = opt_.projector(x + alpha * p);
      cur.g.resize(x.size());
      cur.f = fn_(cur.x, cur.g);
      ++evaluations_;
      if (std::isfinite(cur.f) && cur.f <= f0 + opt_.c1 * g0.dot(cur.x - x) && cur.f < f0) {
        out = std::move(cur);
        return true;
      }
      alpha *= 0.5;
    }
    return false;
  }

 private:
  Trial eval(const VectorXd& x, const VectorXd& p, double alpha) {
    Trial t;
    t.alpha = alpha;
    t.x = x + alpha * p;
    t.g.resize(x.size());
    t.f = fn_(t.x, t.g);
    ++evaluations_;
    if (std::isnan(t.f)) t.f = std::numeric_limits<double>::infinity();
    t.slope = std::isfinite(t.f) ? t.g.dot(p) : 0.0;
    return t;
  }

  bool zoom(const VectorXd& x, double f0, double d0, const VectorXd& p, Trial lo, Trial hi,
            Trial& out) {
    for (int i = 0; i < 40; ++i) {
      const double a = lo.alpha;
      const double b = hi.alpha;
      const double width = std::abs(b - a);
      if (width <= 1e-16 * std::max(1.0, std::abs(a))) break;
      double alpha = 0.5 * (a + b);
      if (std::isfinite(hi.f)) {
        // Cubic interpolation through both endpoints.
        const double d1 = lo.slope + hi.slope - 3.0 * (lo.f - hi.f) / (a - b);
        const double disc = d1 * d1 - lo.slope * hi.slope;
        if (disc >= 0.0) {
          const double d2 = std::copysign(std::sqrt(disc), b - a);
          const double denom = hi.slope - lo.slope + 2.0 * d2;
          if (denom != 0.0) {
            const double cand = b - (b - a) * (hi.slope + d2 - d1) / denom;
            const double lo_bound = std::min(a, b) + 0.1 * width;
            const double hi_bound = std::max(a, b) - 0.1 * width;
            if (std::isfinite(cand)) alpha = std::clamp(cand, lo_bound, hi_bound);
          }
        }
      }
      Trial cur = eval(x, p, alpha);
      if (!std::isfinite(cur.f) || cur.f > f0 + opt_.c1 * alpha * d0 || cur.f >= lo.f) {
        hi = std::move(cur);
      } else {
        if (std::abs(cur.slope) <= -opt_.c2 * d0) {
          out = std::move(cur);
          return true;
        }
        if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = std::move(cur);
      }
    }
    // Interval collapsed: settle for sufficient decrease if we have it.
    if (lo.alpha > 0.0 && lo.f < f0) {
      out = std::move(lo);
      return true;
    }
    return false;
  }

  const ValueAndGradient& fn_;
  const InnerOptions& opt_;
  int& evaluations_;
};

double stationarity(const InnerOptions& opt, const VectorXd& x, const VectorXd& g) {
  if (!opt.projector) return g.cwiseAbs().maxCoeff();
  return (x - opt.projector(x - g)).cwiseAbs().maxCoeff();
}

}  // namespace

InnerResult inner_solve(const ValueAndGradient& fn, const VectorXd& x_start,
                        const InnerOptions& options) {
  if (!(options.gtol > 0.0)) throw std::invalid_argument("inner_solve: gtol must be positive");
  const Eigen::Index n = x_start.size();
  InnerResult r;
  r.x = options.projector ? options.projector(x_start) : x_start;
  r.grad.resize(n);
  r.value = fn(r.x, r.grad);
  r.evaluations = 1;
  if (!std::isfinite(r.value) || !r.grad.allFinite()) {
    r.grad_norm = std::numeric_limits<double>::infinity();
    r.message = "non-finite value at the starting point";
    return r;
  }
  r.grad_norm = stationarity(options, r.x, r.grad);
  if (r.grad_norm <= options.gtol) {
    r.success = true;
    r.message = "gradient tolerance met at start";
    return r;
  }

  LineSearch search(fn, options, r.evaluations);
  MatrixXd h = MatrixXd::Identity(n, n);
  bool h_is_identity = true;
  bool first_step = true;
  // Previous function value estimate used to size the first step.
  double f_prev_estimate = r.value + 0.5 * r.grad.norm();

  while (r.iterations < options.max_iter) {
    VectorXd p = -h * r.grad;
    double slope = r.grad.dot(p);
    if (!(slope < 0.0)) {
      h.setIdentity();
      h_is_identity = true;
      p = -r.grad;
      slope = r.grad.dot(p);
    }
    double alpha0 = 1.0;
    if (first_step || h_is_identity) {
      alpha0 = std::min(1.0, 1.01 * 2.0 * (r.value - f_prev_estimate) / slope);
      if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) alpha0 = 1.0 / std::max(1.0, r.grad.norm());
    }

    Trial step;
    const bool found = options.projector
                           ? search.projected_armijo(r.x, r.value, r.grad, p, alpha0, step)
                           : search.wolfe(r.x, r.value, r.grad, p, alpha0, step);
    if (!found) {
      if (!h_is_identity) {
        h.setIdentity();
        h_is_identity = true;
        f_prev_estimate = r.value + 0.5 * r.grad.norm();
        continue;
      }
      r.message = "line search failed";
      return r;
    }
    ++r.iterations;
    const VectorXd s = step.x - r.x;
    const VectorXd y = step.g - r.grad;
    f_prev_estimate = r.value;
    r.x = std::move(step.x);
    r.value = step.f;
    r.grad = std::move(step.g);
    r.grad_norm = stationarity(options, r.x, r.grad);
    if (r.grad_norm <= options.gtol) {
      r.success = true;
      r.message = "gradient tolerance met";
      return r;
    }

    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
      if (first_step || h_is_identity) h *= sy / y.squaredNorm();
      const double rho = 1.0 / sy;
      const VectorXd hy = h * y;
      // H+ = (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      h += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
           rho * (hy * s.transpose() + s * hy.transpose());
      h_is_identity = false;
    }
    first_step = false;
  }
  r.message = "iteration limit reached";
  return r;
}

InnerResult inner_solve(const std::function<double(const VectorXd&)>& value_fn,
                        const std::function<VectorXd(const VectorXd&)>& grad_fn,
                        const VectorXd& x_start, double gtol, int max_iter) {
  InnerOptions opt;
  opt.gtol = gtol;
  opt.max_iter = max_iter;
  const ValueAndGradient fn = [&](const VectorXd& x, VectorXd& g) {
    const double f = value_fn(x);
    g = grad_fn(x);
    return f;
  };
  return inner_solve(fn, x_start, opt);
}

}  // namespace polycone
