#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace polycone {

/// Rational point on the unit simplex, kept in lowest terms so that equal
/// geometric points have equal representations.
struct GridPoint {
  std::vector<int> numerators;
  int denominator = 1;
  /// numerators / denominator
  Eigen::VectorXd float_view;

  friend bool operator==(const GridPoint& a, const GridPoint& b) {
    return a.denominator == b.denominator && a.numerators == b.numerators;
  }
};

/// Builds a GridPoint from numerators summing to `denominator`, reducing to
/// lowest terms.
GridPoint make_grid_point(std::vector<int> numerators, int denominator);

/// Largest shell a grid point may be enumerated from: C(k+m+1, m-1).
inline constexpr std::int64_t kMaxShellSize = 10'000'000;

/// All points z of the unit simplex with (k+2) z integral, in lexicographic
/// (ascending) order of the unreduced numerator vectors. Each point is
/// returned in lowest terms. Throws std::invalid_argument for m < 1, k < 0
/// or a shell larger than kMaxShellSize.
std::vector<GridPoint> enumerate_shell(int m, int k);

/// Number of weak compositions of k+2 into m parts, C(k+m+1, m-1), saturated
/// at INT64_MAX.
std::int64_t shell_size(int m, int k);

/// Union of shells 0..r_max, each point kept at the first shell it appears
/// in; shells are concatenated in order and lexicographic within a shell.
class SimplexGrid {
 public:
  SimplexGrid(int m, int r_max);

  int m() const { return m_; }
  int r_max() const { return r_max_; }
  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<GridPoint>& points() const { return points_; }
  const GridPoint& point(int i) const { return points_[static_cast<std::size_t>(i)]; }

  /// Number of points in delta^m_r, i.e. the prefix length through shell r.
  int prefix_size(int r) const;
  /// Index of the first point that enters at shell r (shell_offsets[r]).
  int shell_begin(int r) const;
  /// Smallest shell r whose prefix contains `count` points.
  int shell_of_prefix(int count) const;

  /// Row i is the float view of point i.
  const Eigen::MatrixXd& directions() const { return directions_; }

 private:
  int m_;
  int r_max_;
  std::vector<GridPoint> points_;
  /// shell_ends_[r] = prefix_size(r)
  std::vector<int> shell_ends_;
  Eigen::MatrixXd directions_;
};

SimplexGrid build_grid(int m, int r_max);

/// |delta^m_r| <= m^2 (m^{r+1} - 1) / (m - 1) for every r <= r_max.
/// Defined for m >= 2 only; throws std::invalid_argument for m < 2.
bool check_count_bound(const SimplexGrid& grid);

/// min(previous_size + zeta, grid size). Active sets are always prefixes.
int next_active_set(const SimplexGrid& grid, int previous_size, int zeta);

/// {"m", "r_max", "points": [[[numerators...], denominator], ...]}
std::string grid_to_json(const SimplexGrid& grid);

}  // namespace polycone
