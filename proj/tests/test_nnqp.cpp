#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polycone/cone_approx.hpp"
#include "polycone/nnqp.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace polycone;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Exhaustive search over supports: for each pattern solve R_SS x = -s_S by
// least squares, keep nonnegative solutions that solve the system exactly.
double enumeration_minimum(const MatrixXd& R, const VectorXd& s) {
  const int n = static_cast<int>(s.size());
  double best = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    const int k = static_cast<int>(idx.size());
    MatrixXd a(k, k);
    VectorXd b(k);
    for (int i = 0; i < k; ++i) {
      b(i) = -s(idx[i]);
      for (int j = 0; j < k; ++j) a(i, j) = R(idx[i], idx[j]);
    }
    const VectorXd x = a.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
    if ((a * x - b).norm() > 1e-9 * (1.0 + b.norm()) || x.minCoeff() < 0.0) continue;
    VectorXd full = VectorXd::Zero(n);
    for (int i = 0; i < k; ++i) full(idx[i]) = x(i);
    best = std::min(best, full.dot(R * full) + 2.0 * s.dot(full));
  }
  return best;
}

struct Case {
  MatrixXd R;
  VectorXd s;
};

Case random_case(int dim, int rank, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd b(dim, rank);
  for (int j = 0; j < rank; ++j) {
    for (int i = 0; i < dim; ++i) b(i, j) = normal(rng);
  }
  VectorXd s(dim);
  if (rank < dim) {
    // s = B w + nonnegative keeps the minimum finite.
    VectorXd w(rank);
    for (int i = 0; i < rank; ++i) w(i) = normal(rng);
    for (int i = 0; i < dim; ++i) s(i) = std::abs(normal(rng));
    s += b * w;
  } else {
    for (int i = 0; i < dim; ++i) s(i) = normal(rng);
  }
  return {b * b.transpose(), s};
}

}  // namespace

TEST_CASE("spec examples") {
  for (const NNQPMethod method : {NNQPMethod::active_set, NNQPMethod::projected_gradient}) {
    NNQPOptions o;
    o.method = method;
    MatrixXd r1(1, 1);
    r1 << 1;
    VectorXd s1(1);
    s1 << -2;
    NNQPResult res = solve_nnqp(r1, s1, VectorXd(), o);
    CHECK(res.converged);
    CHECK(res.lambda(0) == doctest::Approx(2.0));
    s1 << 3;
    res = solve_nnqp(r1, s1, VectorXd(), o);
    CHECK(res.lambda(0) == 0.0);
    VectorXd s2(2);
    s2 << 1, -1;
    res = solve_nnqp(MatrixXd::Identity(2, 2), s2, VectorXd(), o);
    CHECK(res.lambda(0) == doctest::Approx(0.0));
    CHECK(res.lambda(1) == doctest::Approx(1.0));
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(solve_nnqp(MatrixXd::Identity(2, 2), VectorXd::Zero(3), VectorXd()),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_nnqp(MatrixXd::Identity(2, 2), VectorXd::Zero(2), VectorXd::Zero(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_nnqp(MatrixXd::Identity(2, 2), VectorXd::Zero(2), -VectorXd::Ones(2)),
                  std::invalid_argument);
}

TEST_CASE("both methods match the enumeration oracle for dim <= 6") {
  std::mt19937_64 rng(21);
  for (int dim = 1; dim <= 6; ++dim) {
    for (int t = 0; t < 40; ++t) {
      const Case c = random_case(dim, 1 + t % dim, rng);
      const double oracle = enumeration_minimum(c.R, c.s);
      for (const NNQPMethod method : {NNQPMethod::active_set, NNQPMethod::projected_gradient}) {
        NNQPOptions o;
        o.method = method;
        o.tol = 1e-12;
        o.max_iter = method == NNQPMethod::projected_gradient ? 50000 : 0;
        const NNQPResult res = solve_nnqp(c.R, c.s, VectorXd(), o);
        CHECK(res.lambda.minCoeff() >= 0.0);
        const double got = nnqp_objective(c.R, c.s, res.lambda);
        CHECK(std::abs(got - oracle) <= 1e-8 * (1.0 + std::abs(oracle)));
      }
    }
  }
}

TEST_CASE("KKT certificate at converged results") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 50; ++t) {
    const Case c = random_case(3 + t % 20, 1 + t % 6, rng);
    NNQPOptions o;
    const NNQPResult res = solve_nnqp(c.R, c.s, VectorXd(), o);
    REQUIRE(res.converged);
    CHECK(res.kkt_residual <= o.tol);
    const VectorXd g = 2.0 * (c.R * res.lambda + c.s);
    const double scale = 1.0 + c.s.cwiseAbs().maxCoeff();
    CHECK(g.minCoeff() >= -o.tol * scale);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      CHECK(std::abs(std::min(res.lambda(i), g(i))) <= o.tol * scale);
    }
    CHECK(res.kkt_residual == doctest::Approx(nnqp_kkt_residual(c.R, c.s, res.lambda)));
  }
}

TEST_CASE("warm starts dominate cold starts along refinement sequences") {
  std::mt19937_64 rng(23);
  auto grid = std::make_shared<const SimplexGrid>(3, 15);
  for (int t = 0; t < 10; ++t) {
    const SymMatrix y = testing_support::random_symmetric(3, rng, 2.0);
    PolyhedralConeApprox cone(grid, 6);
    VectorXd warm;
    while (true) {
      const VectorXd s = linear_forms(y, cone);
      const auto R = cone.gram_hadamard();
      VectorXd padded = VectorXd::Zero(s.size());
      padded.head(warm.size()) = warm;
      const NNQPResult w = solve_nnqp(R, s, padded);
      const NNQPResult c = solve_nnqp(R, s, VectorXd());
      CHECK(w.converged);
      CHECK(nnqp_objective(R, s, w.lambda) <= nnqp_objective(R, s, c.lambda) + 1e-12 * (1.0 + std::abs(nnqp_objective(R, s, c.lambda))));
      CHECK(nnqp_objective(R, s, w.lambda) <= nnqp_objective(R, s, padded) + 1e-12);
      warm = w.lambda;
      if (cone.is_full()) break;
      cone.grow_to(next_active_set(*grid, cone.active_count(), 45));
    }
  }
}

TEST_CASE("rank-deficient Gram-Hadamard systems of the full grid") {
  std::mt19937_64 rng(24);
  auto grid = std::make_shared<const SimplexGrid>(5, 7);
  const PolyhedralConeApprox cone(grid, grid->size());
  for (int t = 0; t < 5; ++t) {
    const SymMatrix y = testing_support::random_symmetric(5, rng, 1.0);
    const VectorXd s = linear_forms(y, cone);
    const NNQPResult as = solve_nnqp(cone.gram_hadamard(), s, VectorXd());
    CHECK(as.converged);
    NNQPOptions pg;
    pg.method = NNQPMethod::projected_gradient;
    pg.tol = 1e-7;
    pg.max_iter = 200000;
    const NNQPResult p = solve_nnqp(cone.gram_hadamard(), s, VectorXd(), pg);
    const double fa = nnqp_objective(cone.gram_hadamard(), s, as.lambda);
    const double fp = nnqp_objective(cone.gram_hadamard(), s, p.lambda);
    CHECK(fa <= fp + 1e-9 * (1.0 + std::abs(fp)));
    CHECK(std::abs(fa - fp) <= 1e-5 * (1.0 + std::abs(fa)));
  }
}

TEST_CASE("deterministic") {
  std::mt19937_64 rng(25);
  const Case c = random_case(30, 6, rng);
  const NNQPResult a = solve_nnqp(c.R, c.s, VectorXd());
  const NNQPResult b = solve_nnqp(c.R, c.s, VectorXd());
  CHECK(a.lambda == b.lambda);
}
