#include "polycone/alm.hpp"

#include "polycone/objectives.hpp"
#include "polycone/simplex_grid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace polycone {

namespace {

using Clock = std::chrono::steady_clock;
using Eigen::VectorXd;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

SymMatrix scale_into_ball(const SymMatrix& mu, double radius) {
  const double norm = mu.norm();
  if (norm == 0.0) return SymMatrix(mu.order());
  return (std::min(norm, radius) / norm) * mu;
}

// Largest r <= 40 whose shells (counted before de-duplication) total at
// most `budget` points.
int r_max_for_budget(int m, std::int64_t budget) {
  std::int64_t total = 0;
  int r = 0;
  for (int k = 0; k <= 40; ++k) {
    total += shell_size(m, k);
    if (total > budget) break;
    r = k;
  }
  return r;
}

}  // namespace

std::string_view to_string(Mode mode) {
  return mode == Mode::proposed ? "proposed" : "standard";
}

std::string_view to_string(Mu0Policy policy) {
  return policy == Mu0Policy::paper_literal_RI ? "paper_literal_RI" : "polar_projected";
}

std::string_view to_string(Termination termination) {
  switch (termination) {
    case Termination::success:
      return "success";
    case Termination::fail_policy:
      return "fail_policy";
    case Termination::max_outer:
      return "max_outer";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "proposed") return Mode::proposed;
  if (text == "standard") return Mode::standard;
  return std::nullopt;
}

std::optional<Mu0Policy> parse_mu0_policy(std::string_view text) {
  if (text == "paper_literal_RI") return Mu0Policy::paper_literal_RI;
  if (text == "polar_projected") return Mu0Policy::polar_projected;
  return std::nullopt;
}

ALMConfig ALMConfig::defaults_for(int m) {
  ALMConfig c;
  if (m >= 4) {
    c.rho0 = 1.0;
    c.eps0 = 0.1;
    c.zeta = 70;
  }
  if (m == 3) {
    c.r_max = 15;
  } else if (m == 5) {
    c.r_max = 7;
  } else {
    c.r_max = r_max_for_budget(m, 2000);
  }
  return c;
}

void ALMConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("ALMConfig: ") + what);
  };
  require(rho0 > 0.0, "rho0 must be positive");
  require(sigma > 0.0 && sigma < 1.0, "sigma must lie in (0, 1)");
  require(tau > 1.0, "tau must exceed 1");
  require(safeguard_radius > 0.0, "safeguard radius must be positive");
  require(eps0 > 0.0 && eps_l > 0.0 && eps_v > 0.0 && eps_min > 0.0,
          "tolerances must be positive");
  require(zeta >= 1, "zeta must be >= 1");
  require(r_max >= 0, "r_max must be >= 0");
  require(max_outer >= 1, "max_outer must be >= 1");
  require(fail_fraction >= 0.0 && fail_fraction <= 1.0, "fail_fraction must lie in [0, 1]");
  require(fail_min_iters >= 1, "fail_min_iters must be >= 1");
  require(inner_max_iter >= 1, "inner_max_iter must be >= 1");
  require(scaling_iterations >= 0, "scaling_iterations must be >= 0");
}

ALMState make_initial_state(const ProblemInstance& instance, const ALMConfig& config) {
  config.validate();
  const int m = instance.m();
  auto grid = std::make_shared<const SimplexGrid>(m, config.r_max);
  const int active = config.mode == Mode::proposed ? grid->prefix_size(0) : grid->size();

  ALMState st;
  st.cone = std::make_shared<PolyhedralConeApprox>(grid, active);
  st.projection = config.projection;
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> box(-100.0, 100.0);
  st.x.resize(instance.n());
  for (int i = 0; i < instance.n(); ++i) st.x(i) = box(rng);
  st.rho = config.rho0;
  st.eps_k = config.eps0;
  st.mu = SymMatrix(m);
  st.v = SymMatrix(m);
  const SymMatrix big = config.safeguard_radius * SymMatrix::identity(m);
  if (config.mu0_policy == Mu0Policy::paper_literal_RI) {
    st.mu_hat = big;
  } else {
    st.mu_hat = scale_into_ball(project_polar(big, *st.cone, {}, st.projection).polar,
                                config.safeguard_radius);
  }
  return st;
}

AugmentedLagrangian::AugmentedLagrangian(const ProblemInstance& instance, ALMState& state)
    : instance_(instance), state_(state) {}

PolarProjection AugmentedLagrangian::project(const VectorXd& x, SymMatrix& shifted) {
  shifted = g_eval(instance_.map, x);
  shifted.add_scaled(1.0 / state_.rho, state_.mu_hat);
  PolarProjection p = project_polar(shifted, *state_.cone, state_.warm_lambda, state_.projection);
  if (p.converged) {
    state_.warm_lambda = p.lambda;
  } else {
    ++state_.projection_failures;
  }
  return p;
}

double AugmentedLagrangian::evaluate(const VectorXd& x, VectorXd& grad) {
  grad.setZero(x.size());
  const double f = polycone::evaluate(instance_.objective, x);
  if (!std::isfinite(f)) return std::numeric_limits<double>::infinity();
  SymMatrix shifted(instance_.m());
  const PolarProjection p = project(x, shifted);
  if (!p.converged) return std::numeric_limits<double>::infinity();
  const double penalty = 0.5 * state_.rho * p.polar.matrix().squaredNorm();
  grad = (polycone::gradient(instance_.objective, x) +
          state_.rho * adjoint_apply(instance_.map, p.polar)) /
         state_.scale;
  return (f + penalty) / state_.scale;
}

double AugmentedLagrangian::value_shifted(const VectorXd& x) {
  VectorXd g;
  return evaluate(x, g);
}

double AugmentedLagrangian::value(const VectorXd& x) {
  const double constant = state_.mu_hat.matrix().squaredNorm() / (2.0 * state_.rho);
  return value_shifted(x) - constant / state_.scale;
}

VectorXd AugmentedLagrangian::gradient(const VectorXd& x) {
  VectorXd g;
  evaluate(x, g);
  return g;
}

VectorXd AugmentedLagrangian::unscaled_gradient(const VectorXd& x) {
  SymMatrix shifted(instance_.m());
  const PolarProjection p = project(x, shifted);
  return polycone::gradient(instance_.objective, x) +
         state_.rho * adjoint_apply(instance_.map, p.polar);
}

double aug_lagrangian_value(const VectorXd& x, ALMState& state, const ProblemInstance& instance) {
  return AugmentedLagrangian(instance, state).value(x);
}

VectorXd aug_lagrangian_grad(const VectorXd& x, ALMState& state, const ProblemInstance& instance) {
  return AugmentedLagrangian(instance, state).gradient(x);
}

MultiplierUpdate multiplier_update(ALMState& state, const ProblemInstance& instance,
                                   double safeguard_radius) {
  SymMatrix shifted = g_eval(instance.map, state.x);
  shifted.add_scaled(1.0 / state.rho, state.mu_hat);
  const PolarProjection p = project_polar(shifted, *state.cone, state.warm_lambda, state.projection);
  MultiplierUpdate out;
  out.mu = state.rho * p.polar;
  out.mu_hat_next = scale_into_ball(out.mu, safeguard_radius);
  out.projection_converged = p.converged;
  return out;
}

SymMatrix feasibility_measure(ALMState& state, const ProblemInstance& instance) {
  SymMatrix shifted = g_eval(instance.map, state.x);
  shifted.add_scaled(1.0 / state.rho, state.mu_hat);
  const PolarProjection p = project_polar(shifted, *state.cone, state.warm_lambda, state.projection);
  return (1.0 / state.rho) * state.mu_hat - p.polar;
}

double penalty_update(double rho, double v_norm, double v_prev_norm, double sigma, double tau) {
  return v_norm <= sigma * v_prev_norm ? rho : tau * rho;
}

RagpResiduals ragp_residuals(const VectorXd& x, const SymMatrix& mu,
                             const PolyhedralConeApprox& cone, const ProblemInstance& instance) {
  RagpResiduals r;
  r.stationarity = (gradient(instance.objective, x) + adjoint_apply(instance.map, mu))
                       .cwiseAbs()
                       .maxCoeff();
  r.complementarity = frobenius_inner(mu, project_cone(g_eval(instance.map, x), cone));
  return r;
}

RunReport run_alm(const ProblemInstance& instance, const ALMConfig& config) {
  const auto run_start = Clock::now();
  ALMState st = make_initial_state(instance, config);
  AugmentedLagrangian lagrangian(instance, st);
  const SimplexGrid& grid = st.cone->grid();

  // v^{-1} from x^{-1}, mu_hat^0 and rho_0.
  double v_prev_max = feasibility_measure(st, instance).max_abs();

  RunReport report;
  report.grid_size = grid.size();
  SymMatrix mu(instance.m());
  for (int k = 0; k < config.max_outer; ++k) {
    const auto iter_start = Clock::now();
    st.k = k;
    st.eps_k = std::max(config.eps_min, std::min(config.eps0, v_prev_max));
    if (k < config.scaling_iterations) {
      const double lg = lagrangian.unscaled_gradient(st.x).cwiseAbs().maxCoeff();
      const double fg = gradient(instance.objective, st.x).cwiseAbs().maxCoeff();
      double sample = std::max(1.0, fg);
      if (std::isfinite(lg)) sample = std::max(sample, lg);
      st.scale_samples.push_back(sample);
    }
    if (k == config.scaling_iterations && !st.scale_samples.empty()) {
      st.scale = std::accumulate(st.scale_samples.begin(), st.scale_samples.end(), 0.0) /
                 static_cast<double>(st.scale_samples.size());
    }

    InnerOptions inner;
    inner.gtol = st.eps_k;
    inner.max_iter = config.inner_max_iter;
    const InnerResult res = inner_solve(
        [&](const VectorXd& x, VectorXd& g) { return lagrangian.evaluate(x, g); }, st.x, inner);
    const bool inner_failed = !res.success;
    if (inner_failed) ++st.fail_count;
    if (res.x.allFinite()) st.x = res.x;

    const PolarProjection p = project_polar(
        [&] {
          SymMatrix s = g_eval(instance.map, st.x);
          s.add_scaled(1.0 / st.rho, st.mu_hat);
          return s;
        }(),
        *st.cone, st.warm_lambda, st.projection);
    mu = st.rho * p.polar;
    st.mu = mu;
    st.v = (1.0 / st.rho) * st.mu_hat - p.polar;

    IterationRecord rec;
    rec.k = k;
    VectorXd grad_now;
    const double val_now = lagrangian.evaluate(st.x, grad_now);
    rec.grad_norm = std::isfinite(val_now) ? grad_now.cwiseAbs().maxCoeff()
                                           : std::numeric_limits<double>::infinity();
    rec.v_max = st.v.max_abs();
    rec.rho = st.rho;
    rec.active_count = st.cone->active_count();
    rec.shell = grid.shell_of_prefix(rec.active_count);
    rec.eps_k = st.eps_k;
    rec.scale = st.scale;
    rec.inner_iterations = res.iterations;
    rec.inner_failed = inner_failed;
    const RagpResiduals ragp = ragp_residuals(st.x, mu, *st.cone, instance);
    rec.stationarity = ragp.stationarity;
    rec.complementarity = ragp.complementarity;
    rec.mu_norm = mu.norm();
    rec.mu_hat_norm = st.mu_hat.norm();
    const SymMatrix identity_gap = mu - (st.mu_hat - st.rho * st.v);
    rec.identity_residual = identity_gap.norm() / (1.0 + rec.mu_hat_norm + rec.mu_norm);
    rec.wall_time = seconds_since(iter_start);
    report.records.push_back(rec);

    const bool solved = rec.grad_norm <= config.eps_l && rec.v_max <= config.eps_v &&
                        st.cone->is_full();
    if (solved) {
      report.termination = Termination::success;
      break;
    }
    const int done = k + 1;
    if (done >= config.fail_min_iters &&
        static_cast<double>(st.fail_count) > config.fail_fraction * done) {
      report.termination = Termination::fail_policy;
      break;
    }

    st.mu_hat = scale_into_ball(mu, config.safeguard_radius);
    st.rho = penalty_update(st.rho, rec.v_max, v_prev_max, config.sigma, config.tau);
    v_prev_max = rec.v_max;
    if (config.mode == Mode::proposed) {
      st.cone->grow_to(next_active_set(grid, st.cone->active_count(), config.zeta));
    }
  }

  report.iterations = static_cast<int>(report.records.size());
  report.fails = st.fail_count;
  report.projection_failures = st.projection_failures;
  report.x_final = st.x;
  report.mu_final = mu;
  report.objective_value = evaluate(instance.objective, st.x);
  const SpnDistance d = distance_to_spn(g_eval(instance.map, st.x), 1e-10, 10000);
  report.distance_to_spn = d.distance;
  report.distance_converged = d.converged;
  report.total_wall_time = seconds_since(run_start);
  return report;
}

std::vector<PenaltyRecord> penalty_method_diagnostic(const ProblemInstance& instance,
                                                     const VectorXd& x_anchor, double delta,
                                                     const std::vector<double>& rho_schedule,
                                                     const PenaltyDiagnosticOptions& options) {
  if (!(delta > 0.0)) throw std::invalid_argument("penalty_method_diagnostic: delta must be positive");
  if (x_anchor.size() != instance.n()) {
    throw std::invalid_argument("penalty_method_diagnostic: anchor dimension mismatch");
  }
  for (std::size_t i = 1; i < rho_schedule.size(); ++i) {
    if (!(rho_schedule[i] > rho_schedule[i - 1])) {
      throw std::invalid_argument("penalty_method_diagnostic: schedule must be increasing");
    }
  }
  auto grid = std::make_shared<const SimplexGrid>(instance.m(), options.r_max);
  PolyhedralConeApprox cone(grid, options.zeta > 0 ? grid->prefix_size(0) : grid->size());

  const auto to_ball = [&](const VectorXd& x) -> VectorXd {
    const VectorXd d = x - x_anchor;
    const double norm = d.norm();
    return norm <= delta ? x : VectorXd(x_anchor + (delta / norm) * d);
  };

  std::vector<PenaltyRecord> out;
  VectorXd x = x_anchor;
  VectorXd warm;
  for (std::size_t j = 0; j < rho_schedule.size(); ++j) {
    const double rho = rho_schedule[j];
    if (j > 0 && options.zeta > 0) cone.grow_to(next_active_set(*grid, cone.active_count(), options.zeta));

    const ValueAndGradient fn = [&](const VectorXd& z, VectorXd& grad) {
      grad.setZero(z.size());
      const double f = evaluate(instance.objective, z);
      if (!std::isfinite(f)) return std::numeric_limits<double>::infinity();
      const PolarProjection p = project_polar(g_eval(instance.map, z), cone, warm);
      if (!p.converged) return std::numeric_limits<double>::infinity();
      warm = p.lambda;
      grad = gradient(instance.objective, z) + rho * adjoint_apply(instance.map, p.polar) +
             (z - x_anchor);
      return f + 0.5 * rho * p.polar.matrix().squaredNorm() + 0.5 * (z - x_anchor).squaredNorm();
    };
    InnerOptions inner;
    inner.gtol = options.gtol;
    inner.max_iter = options.inner_max_iter;
    inner.projector = to_ball;
    const InnerResult res = inner_solve(fn, x, inner);
    if (res.x.allFinite()) x = res.x;

    PenaltyRecord rec;
    rec.rho = rho;
    rec.x = x;
    const PolarProjection p = project_polar(g_eval(instance.map, x), cone, warm);
    const VectorXd gf = gradient(instance.objective, x);
    const VectorXd gmu = rho * adjoint_apply(instance.map, p.polar);
    rec.stationarity = (gf + gmu + (x - x_anchor)).cwiseAbs().maxCoeff();
    rec.stationarity_scale = gf.cwiseAbs().maxCoeff() + gmu.cwiseAbs().maxCoeff() +
                             (x - x_anchor).cwiseAbs().maxCoeff();
    rec.infeasibility = p.polar.norm();
    rec.active_count = cone.active_count();
    rec.inner_success = res.success;
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace polycone
