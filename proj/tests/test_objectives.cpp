#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polycone/objectives.hpp"
#include "test_support.hpp"

#include <cmath>
#include <set>

using namespace polycone;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd x(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

// Central differences with a Richardson step, independent of the library.
VectorXd reference_gradient(ObjectiveId id, const VectorXd& x) {
  VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-4 * std::max(1.0, std::abs(x(i)));
    auto f = [&](double step) {
      VectorXd y = x;
      y(i) += step;
      return evaluate(id, y);
    };
    const double d1 = (f(h) - f(-h)) / (2 * h);
    const double d2 = (f(h / 2) - f(-h / 2)) / h;
    g(i) = (4 * d2 - d1) / 3;
  }
  return g;
}

}  // namespace

TEST_CASE("catalog") {
  const auto all = all_objectives();
  CHECK(all.size() == 14);
  std::set<std::string> names;
  for (const ObjectiveSpec& s : all) {
    names.insert(s.name);
    CHECK(parse_objective(s.name) == s.id);
    CHECK(objective_name(s.id) == s.name);
    CHECK_FALSE(s.reference.empty());
  }
  CHECK(names.size() == 14);
  CHECK_FALSE(parse_objective("nope").has_value());
  CHECK(resolve_dimension(ObjectiveId::eR, 0) == 5);
  CHECK(resolve_dimension(ObjectiveId::qp, 0) == 5);
  CHECK(resolve_dimension(ObjectiveId::eR, 7) == 7);
  CHECK(resolve_dimension(ObjectiveId::W, 0) == 4);
  CHECK(resolve_dimension(ObjectiveId::Ps, 0) == 4);
  CHECK(resolve_dimension(ObjectiveId::cq, 0) == 2);
  CHECK_THROWS_AS(resolve_dimension(ObjectiveId::cq, 3), std::invalid_argument);
  CHECK_THROWS_AS(evaluate(ObjectiveId::cq, vec({1, 2, 3})), std::invalid_argument);
}

TEST_CASE("evaluate examples") {
  CHECK(evaluate(ObjectiveId::eR, VectorXd::Ones(5)) == 0.0);
  CHECK(evaluate(ObjectiveId::FR, vec({5, 4})) == 0.0);
  CHECK(evaluate(ObjectiveId::cq, vec({0, 0})) == 0.0);
  CHECK(evaluate(ObjectiveId::cq, vec({3, 4})) == 25.0);
  CHECK(evaluate(ObjectiveId::fc, vec({1, -1})) == doctest::Approx(1.0));
  CHECK(evaluate(ObjectiveId::B, vec({3, 0.5})) == doctest::Approx(0.0));
  CHECK(evaluate(ObjectiveId::W, VectorXd::Ones(4)) == doctest::Approx(0.0));
  CHECK(evaluate(ObjectiveId::Ps, VectorXd::Zero(4)) == 0.0);
  // sqrt(5) weight on (x3 - x4)^2.
  CHECK(evaluate(ObjectiveId::Ps, vec({0, 0, 1, 0})) == doctest::Approx(std::sqrt(5.0) + 16.0));
}

TEST_CASE("gradient examples") {
  CHECK(gradient(ObjectiveId::cq, vec({3, 4})) == vec({6, 8}));
  CHECK(gradient(ObjectiveId::B, vec({3, 0.5})).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(gradient(ObjectiveId::qp, VectorXd::Ones(5)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("analytic gradients match finite differences") {
  std::mt19937_64 rng(31);
  for (const ObjectiveSpec& s : all_objectives()) {
    const int n = resolve_dimension(s.id, 0);
    const VectorXd c = known_minimizers(s.id, n).front().point;
    int checked = 0;
    for (int t = 0; t < 20; ++t) {
      VectorXd x = c + testing_support::random_vector(n, rng, -1.0, 1.0);
      if (s.id == ObjectiveId::fc) {
        for (int i = 0; i < n; ++i) {
          if (std::abs(x(i)) < 1e-4) x(i) = 1e-3;
        }
      }
      if (!std::isfinite(evaluate(s.id, x))) continue;
      ++checked;
      CHECK_MESSAGE(finite_difference_check(s.id, x, 1e-6) <= 1e-5, s.name);
      const VectorXd ref = reference_gradient(s.id, x);
      const VectorXd g = gradient(s.id, x);
      for (int i = 0; i < n; ++i) {
        CHECK_MESSAGE(std::abs(g(i) - ref(i)) <= 1e-5 * std::max({1.0, std::abs(g(i)), std::abs(ref(i))}), s.name);
      }
    }
    CHECK(checked >= 15);
  }
}

TEST_CASE("quadratic central differences are exact up to rounding with dyadic steps") {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 20; ++t) {
    const VectorXd x = testing_support::random_vector(2, rng, -10.0, 10.0);
    CHECK(finite_difference_check(ObjectiveId::cq, x, 1.0 / 1024) <= 1e-10);
  }
  CHECK_THROWS_AS(finite_difference_check(ObjectiveId::cq, vec({0, 0}), 0.0), std::invalid_argument);
}

TEST_CASE("known minimizers are stationary") {
  for (const ObjectiveSpec& s : all_objectives()) {
    const int n = resolve_dimension(s.id, 0);
    const auto mins = known_minimizers(s.id, n);
    CHECK_FALSE(mins.empty());
    for (const KnownMinimizer& km : mins) {
      CHECK(km.point.size() == n);
      const double g = gradient(s.id, km.point).cwiseAbs().maxCoeff();
      if (km.advisory) {
        MESSAGE(s.name << " advisory stationarity " << g);
      } else {
        CHECK_MESSAGE(g <= km.stationarity_tol, s.name << " gradient " << g);
      }
    }
  }
  CHECK(known_minimizers(ObjectiveId::FR, 2).size() == 2);
  CHECK(known_minimizers(ObjectiveId::ex4_1_5, 2).size() == 3);
  CHECK(known_minimizers(ObjectiveId::ex8_1_5, 2).size() == 2);
  CHECK(known_minimizers(ObjectiveId::ex8_1_6, 2).front().advisory);
  CHECK(known_minimizers(ObjectiveId::eR, 7).front().point == VectorXd::Ones(7));
}

TEST_CASE("fc is C1 at the origin") {
  const double h = 1e-8;
  for (int i = 0; i < 2; ++i) {
    VectorXd p = VectorXd::Zero(2);
    VectorXd m = VectorXd::Zero(2);
    p(i) = h;
    m(i) = -h;
    const double right = (evaluate(ObjectiveId::fc, p) - evaluate(ObjectiveId::fc, VectorXd::Zero(2))) / h;
    const double left = (evaluate(ObjectiveId::fc, VectorXd::Zero(2)) - evaluate(ObjectiveId::fc, m)) / h;
    CHECK(std::abs(right - left) <= 1e-7);
    CHECK(gradient(ObjectiveId::fc, VectorXd::Zero(2))(i) == 0.0);
  }
}

TEST_CASE("overflow is reported as +inf, never NaN") {
  const VectorXd big = VectorXd::Constant(2, 1e200);
  for (const ObjectiveSpec& s : all_objectives()) {
    const int n = resolve_dimension(s.id, 0);
    const double f = evaluate(s.id, VectorXd::Constant(n, 1e200));
    CHECK_FALSE(std::isnan(f));
  }
  CHECK(std::isinf(evaluate(ObjectiveId::Pbs, big)));
}
