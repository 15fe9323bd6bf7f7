#include "polycone/selfcheck.hpp"

#include "polycone/cone_approx.hpp"
#include "polycone/nnqp.hpp"
#include "polycone/objectives.hpp"
#include "polycone/problem.hpp"
#include "polycone/simplex_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace polycone {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

class Recorder {
 public:
  explicit Recorder(std::vector<CheckResult>& out) : out_(out) {}

  void check(const std::string& suite, const std::string& invariant, bool ok,
             const std::string& detail = {}) {
    out_.push_back({suite, invariant, ok, detail});
  }

 private:
  std::vector<CheckResult>& out_;
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << v;
  return ss.str();
}

SymMatrix random_symmetric(int m, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  MatrixXd a(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) a(i, j) = normal(rng);
  }
  return SymMatrix::symmetrized(a);
}

// PSD plus entrywise nonnegative, hence copositive.
SymMatrix random_spn(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MatrixXd b(m, m);
  MatrixXd c(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      b(i, j) = normal(rng);
      c(i, j) = unit(rng);
    }
  }
  return SymMatrix::symmetrized(b * b.transpose() + c + c.transpose());
}

void grid_suite(const CheckOptions& opt, Recorder& rec) {
  struct Expected {
    int m, r, count;
  };
  for (const Expected e : {Expected{3, 15, 901}, Expected{5, 7, 1816}}) {
    const SimplexGrid grid(e.m, e.r);
    const int measured = grid.size() + (opt.inject_grid_fault ? 1 : 0);
    std::ostringstream name;
    name << "grid_count(m=" << e.m << ",r=" << e.r << ")==" << e.count;
    rec.check("grid", name.str(), measured == e.count, "measured " + std::to_string(measured));
    rec.check("grid", "prefix_size(0)==m(m+1)/2 for m=" + std::to_string(e.m),
              grid.prefix_size(0) == e.m * (e.m + 1) / 2);
    rec.check("grid", "count_bound for m=" + std::to_string(e.m), check_count_bound(grid));
  }
}

void projection_suite(const CheckOptions& opt, Recorder& rec) {
  std::mt19937_64 rng(opt.seed);
  double worst_orth = 0, worst_feas = 0, worst_idem = 0, worst_pyth = 0, worst_fixed = 0;
  int trials = 0;
  for (const int m : {3, 5}) {
    auto grid = std::make_shared<const SimplexGrid>(m, m == 3 ? 15 : 7);
    for (const int count : {6, 51, 200}) {
      const PolyhedralConeApprox cone(grid, std::min(count, grid->size()));
      for (int t = 0; t < 10; ++t, ++trials) {
        const SymMatrix y = random_symmetric(m, rng, 1.0 + t);
        const double ny = y.norm();
        const PolarProjection p = project_polar(y, cone);
        const SymMatrix c = y - p.polar;
        worst_orth = std::max(worst_orth, frobenius_inner(p.polar, c) / (1 + ny * ny));
        worst_feas = std::max(worst_feas, -min_quadratic_form(c, cone) / (1 + ny));
        worst_idem = std::max(worst_idem, (project_polar(p.polar, cone).polar - p.polar).norm() /
                                              (1 + p.polar.norm()));
        worst_pyth = std::max(worst_pyth,
                              std::abs(ny * ny - p.polar.norm() * p.polar.norm() - c.norm() * c.norm()) /
                                  (1 + ny * ny));
        const SymMatrix z = random_spn(m, rng);
        worst_fixed = std::max(worst_fixed, (project_cone(z, cone) - z).norm() / (1 + z.norm()));
      }
    }
  }
  rec.check("projection", "moreau_orthogonality<=1e-7", worst_orth <= 1e-7, fmt(worst_orth));
  rec.check("projection", "complement_feasible>=-1e-7", worst_feas <= 1e-7, fmt(worst_feas));
  rec.check("projection", "idempotence<=1e-6", worst_idem <= 1e-6, fmt(worst_idem));
  rec.check("projection", "pythagoras<=1e-6", worst_pyth <= 1e-6, fmt(worst_pyth));
  rec.check("projection", "spn_fixed_points<=1e-7", worst_fixed <= 1e-7, fmt(worst_fixed));
  (void)trials;
}

void nnqp_suite(const CheckOptions& opt, Recorder& rec) {
  std::mt19937_64 rng(opt.seed + 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int dim = 1; dim <= 6; ++dim) {
    for (int t = 0; t < 20; ++t) {
      const int rank = 1 + t % dim;
      MatrixXd b(dim, rank);
      for (int j = 0; j < rank; ++j) {
        for (int i = 0; i < dim; ++i) b(i, j) = normal(rng);
      }
      const MatrixXd r = b * b.transpose();
      VectorXd s(dim);
      for (int i = 0; i < dim; ++i) s(i) = normal(rng);
      // Unbounded below when R is singular and s has a descent ray; keep s
      // in the range of B so the minimum is finite.
      if (rank < dim) {
        VectorXd w(rank);
        for (int i = 0; i < rank; ++i) w(i) = normal(rng);
        s = b * w + s.cwiseAbs();
      }
      const double oracle = nnqp_enumeration_minimum(r, s);
      for (const NNQPMethod method : {NNQPMethod::active_set, NNQPMethod::projected_gradient}) {
        NNQPOptions o;
        o.method = method;
        o.tol = 1e-12;
        o.max_iter = method == NNQPMethod::projected_gradient ? 20000 : 0;
        const NNQPResult res = solve_nnqp(r, s, VectorXd(), o);
        const double got = nnqp_objective(r, s, res.lambda);
        worst = std::max(worst, std::abs(got - oracle) / (1.0 + std::abs(oracle)));
      }
    }
  }
  rec.check("nnqp", "matches_enumeration_oracle<=1e-8", worst <= 1e-8, fmt(worst));
}

void gradient_suite(const CheckOptions& opt, Recorder& rec) {
  std::mt19937_64 rng(opt.seed + 2);
  for (const ObjectiveSpec& spec : all_objectives()) {
    const int n = resolve_dimension(spec.id, 0);
    const VectorXd center = known_minimizers(spec.id, n).front().point;
    std::uniform_real_distribution<double> offset(-1.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      VectorXd x(n);
      for (int i = 0; i < n; ++i) {
        x(i) = center(i) + offset(rng);
        // Keep away from the fc kink at 0.
        if (spec.id == ObjectiveId::fc && std::abs(x(i)) < 1e-3) x(i) += 0.01;
      }
      if (!std::isfinite(evaluate(spec.id, x))) continue;
      worst = std::max(worst, finite_difference_check(spec.id, x, 1e-6));
    }
    rec.check("gradient", "objective_fd<=1e-5 " + spec.name, worst <= 1e-5, fmt(worst));
    double stationarity_worst = 0.0;
    bool ok = true;
    for (const KnownMinimizer& km : known_minimizers(spec.id, n)) {
      const double g = gradient(spec.id, km.point).cwiseAbs().maxCoeff();
      stationarity_worst = std::max(stationarity_worst, g);
      if (!km.advisory && !(g <= km.stationarity_tol)) ok = false;
    }
    rec.check("gradient", "minimizer_stationarity " + spec.name, ok, fmt(stationarity_worst));
  }

  const ProblemInstance inst = generate_instance(ObjectiveId::cq, 3, 0, opt.seed);
  ALMConfig cfg = ALMConfig::defaults_for(3);
  cfg.mu0_policy = Mu0Policy::polar_projected;
  ALMState st = make_initial_state(inst, cfg);
  st.cone->grow_to(51);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    st.rho = std::pow(10.0, t % 4 - 1);
    st.mu_hat = st.rho * random_symmetric(3, rng, 0.1);
    VectorXd x = inst.x_star;
    for (int i = 0; i < x.size(); ++i) x(i) += normal(rng);
    worst = std::max(worst, lagrangian_finite_difference_check(inst, st, x, 1e-6));
  }
  rec.check("gradient", "augmented_lagrangian_fd<=1e-5", worst <= 1e-5, fmt(worst));
}

void refinement_suite(const CheckOptions& opt, Recorder& rec) {
  std::mt19937_64 rng(opt.seed + 3);
  auto grid = std::make_shared<const SimplexGrid>(3, 15);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const SymMatrix y = random_symmetric(3, rng, 1.0);
    PolyhedralConeApprox cone(grid, grid->prefix_size(0));
    double prev = project_polar(y, cone).polar.norm();
    while (!cone.is_full()) {
      cone.grow_to(next_active_set(*grid, cone.active_count(), 45));
      const double cur = project_polar(y, cone).polar.norm();
      worst = std::max(worst, prev - cur);
      prev = cur;
    }
  }
  rec.check("refinement", "polar_distance_nondecreasing(1e-8)", worst <= 1e-8, fmt(worst));
}

void end_to_end_suite(int m, std::uint64_t seed, Recorder& rec) {
  const ProblemInstance inst = generate_instance(ObjectiveId::cq, m, 0, seed);
  ALMConfig cfg = ALMConfig::defaults_for(m);
  cfg.seed = seed;
  const RunReport report = run_alm(inst, cfg);
  const std::string tag = "cq m=" + std::to_string(m);
  rec.check("end_to_end", "success " + tag, report.success(),
            std::string(to_string(report.termination)) + " after " +
                std::to_string(report.iterations));
  double worst_identity = 0.0;
  int prev_count = 0;
  bool monotone = true;
  for (const IterationRecord& r : report.records) {
    worst_identity = std::max(worst_identity, r.identity_residual);
    monotone = monotone && r.active_count >= prev_count;
    prev_count = r.active_count;
  }
  rec.check("end_to_end", "multiplier_identity<=1e-9 " + tag, worst_identity <= 1e-9,
            fmt(worst_identity));
  rec.check("end_to_end", "active_set_monotone " + tag, monotone);
}

}  // namespace

std::optional<CheckLevel> parse_check_level(std::string_view text) {
  if (text == "quick") return CheckLevel::quick;
  if (text == "full") return CheckLevel::full;
  return std::nullopt;
}

double nnqp_enumeration_minimum(const MatrixXd& R, const VectorXd& s) {
  const int n = static_cast<int>(s.size());
  if (n > 12) throw std::invalid_argument("nnqp_enumeration_minimum: dimension too large");
  double best = 0.0;  // lambda = 0
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    const int k = static_cast<int>(idx.size());
    MatrixXd rs(k, k);
    VectorXd ss(k);
    for (int a = 0; a < k; ++a) {
      ss(a) = s(idx[a]);
      for (int b = 0; b < k; ++b) rs(a, b) = R(idx[a], idx[b]);
    }
    const VectorXd sol = rs.completeOrthogonalDecomposition().solve(-ss);
    if ((rs * sol + ss).norm() > 1e-9 * (1.0 + ss.norm())) continue;
    if (sol.minCoeff() < 0.0) continue;
    VectorXd lambda = VectorXd::Zero(n);
    for (int a = 0; a < k; ++a) lambda(idx[a]) = sol(a);
    best = std::min(best, nnqp_objective(R, s, lambda));
  }
  return best;
}

double lagrangian_finite_difference_check(const ProblemInstance& instance, ALMState& state,
                                          const VectorXd& x, double h) {
  AugmentedLagrangian lagrangian(instance, state);
  VectorXd g;
  if (!std::isfinite(lagrangian.evaluate(x, g))) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(x(i)));
    VectorXd xp = x;
    VectorXd xm = x;
    xp(i) += step;
    xm(i) -= step;
    VectorXd unused;
    const double fd =
        (lagrangian.evaluate(xp, unused) - lagrangian.evaluate(xm, unused)) / (xp(i) - xm(i));
    const double denom = std::max({1.0, std::abs(g(i)), std::abs(fd)});
    worst = std::max(worst, std::abs(g(i) - fd) / denom);
  }
  return worst;
}

std::vector<CheckResult> run_self_check(const CheckOptions& options) {
  std::vector<CheckResult> out;
  Recorder rec(out);
  grid_suite(options, rec);
  projection_suite(options, rec);
  nnqp_suite(options, rec);
  gradient_suite(options, rec);
  refinement_suite(options, rec);
  end_to_end_suite(3, options.seed, rec);
  if (options.level == CheckLevel::full) end_to_end_suite(5, options.seed, rec);
  return out;
}

}  // namespace polycone
