#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polycone/sym_matrix.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace polycone;
using testing_support::random_nonnegative;
using testing_support::random_psd;
using testing_support::random_symmetric;

namespace {

SymMatrix diag(std::initializer_list<double> d) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d.size()));
  int i = 0;
  for (double x : d) v(i++) = x;
  return SymMatrix::diagonal(v);
}

// min over P PSD, N >= 0 of ||A - P - N||_F by exact block coordinate
// descent on the primal decomposition.
double spn_distance_by_coordinate_descent(const SymMatrix& a) {
  SymMatrix n(a.order());
  SymMatrix p(a.order());
  for (int it = 0; it < 200000; ++it) {
    p = project_psd(a - n);
    const SymMatrix next = clip_nonnegative(a - p);
    const double change = (next - n).norm();
    n = next;
    if (change < 1e-15) break;
  }
  return (a - p - n).norm();
}

}  // namespace

TEST_CASE("construction enforces symmetry") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 3, 4;
  CHECK_THROWS_AS(SymMatrix::from_matrix(a), std::invalid_argument);
  CHECK_THROWS_AS(SymMatrix(0), std::invalid_argument);
  a << 1, 2, 2, 4;
  const SymMatrix s = SymMatrix::from_matrix(a);
  CHECK(s(0, 1) == s(1, 0));
  CHECK(s.order() == 2);
}

TEST_CASE("frobenius_inner") {
  CHECK(frobenius_inner(SymMatrix::identity(3), SymMatrix::identity(3)) == doctest::Approx(3.0));
  std::mt19937_64 rng(5);
  CHECK(frobenius_inner(random_symmetric(4, rng), SymMatrix(4)) == 0.0);
  CHECK(frobenius_inner(diag({1, 2}), diag({3, 4})) == doctest::Approx(11.0));
  CHECK_THROWS_AS(frobenius_inner(SymMatrix(2), SymMatrix(3)), std::invalid_argument);
  const SymMatrix a = random_symmetric(3, rng);
  const SymMatrix b = random_symmetric(3, rng);
  CHECK(frobenius_inner(a, b) == doctest::Approx(frobenius_inner(b, a)));
}

TEST_CASE("symmetric_eigen examples") {
  Eigen::MatrixXd x(2, 2);
  x << 0, 1, 1, 0;
  const EigenDecomposition e = symmetric_eigen(SymMatrix::from_matrix(x));
  CHECK(e.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(e.eigenvalues(1) == doctest::Approx(-1.0));
  const EigenDecomposition d = symmetric_eigen(diag({5, 2, 2}));
  CHECK(d.eigenvalues(0) == 5.0);
  CHECK(d.eigenvalues(1) == 2.0);
  CHECK(d.eigenvalues(2) == 2.0);
}

TEST_CASE("symmetric_eigen reconstruction and orthonormality") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const int m = 1 + t % 8;
    const SymMatrix a = random_symmetric(m, rng, 1.0 + t);
    const EigenDecomposition e = symmetric_eigen(a);
    CHECK((e.reconstruct() - a).norm() <= 1e-10 * (1.0 + a.norm()));
    const Eigen::MatrixXd vtv = e.eigenvectors.transpose() * e.eigenvectors;
    CHECK((vtv - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() <= 1e-10);
    for (int i = 1; i < m; ++i) CHECK(e.eigenvalues(i - 1) >= e.eigenvalues(i));
    // Same spectrum as Eigen's solver.
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a.matrix());
    for (int i = 0; i < m; ++i) {
      CHECK(std::abs(e.eigenvalues(i) - ref.eigenvalues()(m - 1 - i)) <= 1e-10 * (1.0 + a.norm()));
    }
  }
}

TEST_CASE("symmetric_eigen failure is explicit") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
  a(0, 1) = a(1, 0) = std::nan("");
  CHECK_THROWS(symmetric_eigen(SymMatrix::symmetrized(a)));
  std::mt19937_64 rng(3);
  CHECK_THROWS_AS(symmetric_eigen(random_symmetric(6, rng), 1), ConvergenceError);
}

TEST_CASE("project_psd examples") {
  CHECK(project_psd(diag({2, -1})) == diag({2, 0}));
  CHECK(project_psd(-SymMatrix::identity(2)).norm() == 0.0);
  std::mt19937_64 rng(4);
  const SymMatrix p = random_psd(4, rng);
  CHECK((project_psd(p) - p).norm() <= 1e-10 * (1.0 + p.norm()));
  CHECK(project_nsd(diag({2, -1})) == diag({0, -1}));
}

TEST_CASE("psd projection properties") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    const int m = 2 + t % 5;
    const SymMatrix a = random_symmetric(m, rng, 3.0);
    const SymMatrix b = random_symmetric(m, rng, 3.0);
    const SymMatrix pa = project_psd(a);
    const SymMatrix na = project_psd(-a);
    CHECK(min_eigenvalue(pa) >= -1e-10);
    CHECK((pa - na - a).norm() <= 1e-10 * (1.0 + a.norm()));
    CHECK(std::abs(frobenius_inner(pa, na)) <= 1e-9 * (1.0 + a.norm() * a.norm()));
    CHECK(std::abs(frobenius_inner(a - pa, pa)) <= 1e-9 * (1.0 + a.norm() * a.norm()));
    CHECK((project_psd(pa) - pa).norm() <= 1e-10 * (1.0 + a.norm()));
    CHECK((pa - project_psd(b)).norm() <= (a - b).norm() + 1e-10);
  }
}

TEST_CASE("distance_to_spn examples") {
  std::mt19937_64 rng(8);
  const SpnDistance nonneg = distance_to_spn(random_nonnegative(3, rng));
  CHECK(nonneg.converged);
  CHECK(nonneg.distance <= 1e-8);
  const SpnDistance neg = distance_to_spn(-SymMatrix::identity(2));
  CHECK(neg.distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK_THROWS_AS(distance_to_spn(SymMatrix(2), 0.0), std::invalid_argument);
}

TEST_CASE("distance_to_spn vanishes on PSD + nonnegative sums") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 30; ++t) {
    const int m = 2 + t % 4;
    const SymMatrix a = random_psd(m, rng) + random_nonnegative(m, rng);
    const SpnDistance d = distance_to_spn(a, 1e-10);
    CHECK(d.distance <= 1e-8 * (1.0 + a.norm()));
  }
}

TEST_CASE("distance_to_spn matches a coordinate descent oracle on 2x2") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 40; ++t) {
    const SymMatrix a = random_symmetric(2, rng, 2.0);
    const SpnDistance d = distance_to_spn(a, 1e-12, 100000);
    CHECK(d.converged);
    CHECK(std::abs(d.distance - spn_distance_by_coordinate_descent(a)) <= 1e-5);
  }
}

TEST_CASE("distance_to_spn witness") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const int m = 3 + t % 3;
    const SymMatrix a = random_symmetric(m, rng, 2.0);
    const SpnDistance d = distance_to_spn(a, 1e-10);
    REQUIRE(d.converged);
    CHECK(max_eigenvalue(d.polar_point) <= 1e-8);
    CHECK(d.polar_point.matrix().maxCoeff() <= 1e-8);
    CHECK(d.distance == doctest::Approx(d.polar_point.norm()));
    CHECK(min_eigenvalue(d.psd_part) >= -1e-8);
    CHECK(d.nonnegative_part.matrix().minCoeff() >= 0.0);
    CHECK((a - d.polar_point - d.psd_part - d.nonnegative_part).norm() <= 1e-6 * (1.0 + a.norm()));
  }
}
