#pragma once

#include "polycone/sym_matrix.hpp"

#include <Eigen/Dense>

#include <random>

namespace testing_support {

inline polycone::SymMatrix random_symmetric(int m, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd a(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) a(i, j) = normal(rng);
  }
  return polycone::SymMatrix::symmetrized(a);
}

inline polycone::SymMatrix random_psd(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd b(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) b(i, j) = normal(rng);
  }
  return polycone::SymMatrix::symmetrized(b * b.transpose());
}

inline polycone::SymMatrix random_nonnegative(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd c(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) c(i, j) = unit(rng);
  }
  return polycone::SymMatrix::symmetrized(c + c.transpose());
}

inline Eigen::VectorXd random_vector(int n, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

}  // namespace testing_support
