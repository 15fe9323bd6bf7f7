#include "polycone/simplex_grid.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

namespace polycone {

GridPoint make_grid_point(std::vector<int> numerators, int denominator) {
  if (denominator < 1) throw std::invalid_argument("grid point: denominator must be positive");
  long sum = 0;
  int g = denominator;
  for (int a : numerators) {
    if (a < 0) throw std::invalid_argument("grid point: negative numerator");
    sum += a;
    g = std::gcd(g, a);
  }
  if (sum != denominator) throw std::invalid_argument("grid point: numerators must sum to denominator");
  GridPoint p;
  p.denominator = denominator / g;
  p.numerators = std::move(numerators);
  for (int& a : p.numerators) a /= g;
  p.float_view.resize(static_cast<Eigen::Index>(p.numerators.size()));
  for (std::size_t i = 0; i < p.numerators.size(); ++i) {
    p.float_view(static_cast<Eigen::Index>(i)) =
        static_cast<double>(p.numerators[i]) / static_cast<double>(p.denominator);
  }
  return p;
}

std::int64_t shell_size(int m, int k) {
  // C(k+m+1, m-1) computed incrementally; each partial product is itself a
  // binomial coefficient so the division is exact.
  const std::int64_t n = static_cast<std::int64_t>(k) + m + 1;
  const std::int64_t r = m - 1;
  std::int64_t c = 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    const std::int64_t num = n - r + i;
    if (c > std::numeric_limits<std::int64_t>::max() / num) {
      return std::numeric_limits<std::int64_t>::max();
    }
    c = c * num / i;
  }
  return c;
}

std::vector<GridPoint> enumerate_shell(int m, int k) {
  if (m < 1) throw std::invalid_argument("enumerate_shell: m must be >= 1");
  if (k < 0) throw std::invalid_argument("enumerate_shell: k must be >= 0");
  const std::int64_t count = shell_size(m, k);
  if (count > kMaxShellSize) {
    throw std::invalid_argument("enumerate_shell: shell of " + std::to_string(count) +
                                " points exceeds the size guard");
  }
  const int total = k + 2;
  std::vector<GridPoint> out;
  out.reserve(static_cast<std::size_t>(count));

  // Ascending lexicographic walk over weak compositions of `total`.
  std::vector<int> c(static_cast<std::size_t>(m), 0);
  c.back() = total;
  while (true) {
    out.push_back(make_grid_point(c, total));
    // Successor: find the rightmost position i < m-1 that can grow, i.e.
    // some mass remains to its right.
    int i = m - 2;
    while (i >= 0) {
      int right = 0;
      for (int j = i + 1; j < m; ++j) right += c[static_cast<std::size_t>(j)];
      if (right > 0) break;
      --i;
    }
    if (i < 0) break;
    int right = 0;
    for (int j = i + 1; j < m; ++j) right += c[static_cast<std::size_t>(j)];
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j) c[static_cast<std::size_t>(j)] = 0;
    c.back() = right - 1;
  }
  return out;
}

SimplexGrid::SimplexGrid(int m, int r_max) : m_(m), r_max_(r_max) {
  if (m < 1) throw std::invalid_argument("build_grid: m must be >= 1");
  if (r_max < 0) throw std::invalid_argument("build_grid: r_max must be >= 0");
  std::set<std::pair<int, std::vector<int>>> seen;
  for (int k = 0; k <= r_max; ++k) {
    for (GridPoint& p : enumerate_shell(m, k)) {
      if (seen.emplace(p.denominator, p.numerators).second) points_.push_back(std::move(p));
    }
    shell_ends_.push_back(static_cast<int>(points_.size()));
  }
  directions_.resize(static_cast<Eigen::Index>(points_.size()), m);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    directions_.row(static_cast<Eigen::Index>(i)) = points_[i].float_view.transpose();
  }
}

int SimplexGrid::prefix_size(int r) const {
  if (r < 0 || r > r_max_) throw std::out_of_range("prefix_size: shell out of range");
  return shell_ends_[static_cast<std::size_t>(r)];
}

int SimplexGrid::shell_begin(int r) const { return r == 0 ? 0 : prefix_size(r - 1); }

int SimplexGrid::shell_of_prefix(int count) const {
  for (int r = 0; r <= r_max_; ++r) {
    if (count <= shell_ends_[static_cast<std::size_t>(r)]) return r;
  }
  return r_max_;
}

SimplexGrid build_grid(int m, int r_max) { return SimplexGrid(m, r_max); }

bool check_count_bound(const SimplexGrid& grid) {
  const int m = grid.m();
  if (m < 2) throw std::invalid_argument("check_count_bound: bound is defined for m >= 2");
  for (int r = 0; r <= grid.r_max(); ++r) {
    const long double bound = static_cast<long double>(m) * m *
                              (std::pow(static_cast<long double>(m), r + 1) - 1.0L) / (m - 1);
    if (static_cast<long double>(grid.prefix_size(r)) > bound) return false;
  }
  return true;
}

int next_active_set(const SimplexGrid& grid, int previous_size, int zeta) {
  const int base = grid.m() * (grid.m() + 1) / 2;
  if (previous_size < base) {
    throw std::invalid_argument("next_active_set: active set must contain shell 0");
  }
  if (zeta < 1) throw std::invalid_argument("next_active_set: zeta must be >= 1");
  const long next = static_cast<long>(previous_size) + zeta;
  return static_cast<int>(std::min<long>(next, grid.size()));
}

std::string grid_to_json(const SimplexGrid& grid) {
  nlohmann::json j;
  j["m"] = grid.m();
  j["r_max"] = grid.r_max();
  auto& pts = j["points"] = nlohmann::json::array();
  for (const GridPoint& p : grid.points()) pts.push_back({p.numerators, p.denominator});
  return j.dump();
}

}  // namespace polycone
