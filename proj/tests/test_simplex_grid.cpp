#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polycone/simplex_grid.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

using namespace polycone;

namespace {

// All vectors of m nonnegative integers summing to total, by recursion.
void compositions(int m, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == m - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    cur.push_back(v);
    compositions(m, total - v, cur, out);
    cur.pop_back();
  }
}

// Grid size by deduplicating rounded float coordinates.
std::size_t float_dedup_count(int m, int r) {
  std::set<std::vector<long long>> seen;
  for (int k = 0; k <= r; ++k) {
    std::vector<std::vector<int>> all;
    std::vector<int> cur;
    compositions(m, k + 2, cur, all);
    for (const auto& c : all) {
      std::vector<long long> key;
      for (int v : c) key.push_back(std::llround(1e9 * v / static_cast<double>(k + 2)));
      seen.insert(key);
    }
  }
  return seen.size();
}

long long binomial(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("enumerate_shell examples") {
  CHECK(enumerate_shell(3, 0).size() == 6);
  CHECK(enumerate_shell(3, 1).size() == 10);
  const auto two = enumerate_shell(2, 0);
  REQUIRE(two.size() == 3);
  std::set<std::pair<std::vector<int>, int>> got;
  for (const GridPoint& p : two) got.insert({p.numerators, p.denominator});
  CHECK(got.count({{1, 0}, 1}) == 1);
  CHECK(got.count({{0, 1}, 1}) == 1);
  CHECK(got.count({{1, 1}, 2}) == 1);
  CHECK_THROWS_AS(enumerate_shell(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_shell(3, -1), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_shell(12, 40), std::invalid_argument);
}

TEST_CASE("enumerate_shell counts and canonical form") {
  for (int m = 1; m <= 5; ++m) {
    for (int k = 0; k <= 6; ++k) {
      const auto shell = enumerate_shell(m, k);
      CHECK(static_cast<long long>(shell.size()) == binomial(k + m + 1, m - 1));
      CHECK(shell_size(m, k) == binomial(k + m + 1, m - 1));
      for (const GridPoint& p : shell) {
        const int sum = std::accumulate(p.numerators.begin(), p.numerators.end(), 0);
        CHECK(sum == p.denominator);
        int g = p.denominator;
        for (int v : p.numerators) g = std::gcd(g, v);
        CHECK(g == 1);
        CHECK(std::abs(p.float_view.sum() - 1.0) <= 1e-15);
        CHECK(p.float_view.minCoeff() >= 0.0);
      }
    }
  }
}

TEST_CASE("build_grid exact counts") {
  CHECK(build_grid(3, 15).size() == 901);
  CHECK(build_grid(5, 7).size() == 1816);
  CHECK(build_grid(3, 0).size() == 6);
  CHECK(build_grid(5, 0).size() == 15);
}

TEST_CASE("grid prefixes are nested shells") {
  const SimplexGrid g(3, 15);
  const int expected[] = {6, 13, 22, 40, 55, 88};
  for (int r = 0; r <= 5; ++r) CHECK(g.prefix_size(r) == expected[r]);
  for (int r = 0; r <= 15; ++r) {
    CHECK(g.prefix_size(r) == SimplexGrid(3, r).size());
    const SimplexGrid small(3, r);
    for (int i = 0; i < small.size(); ++i) CHECK(small.point(i) == g.point(i));
    CHECK(g.shell_begin(r) == (r == 0 ? 0 : g.prefix_size(r - 1)));
    CHECK(g.shell_of_prefix(g.prefix_size(r)) == r);
  }
  CHECK(g.shell_of_prefix(7) == 1);
}

TEST_CASE("grid points are distinct and agree with float dedup") {
  for (int r = 0; r <= 4; ++r) CHECK(SimplexGrid(3, r).size() == static_cast<int>(float_dedup_count(3, r)));
  const SimplexGrid g(3, 15);
  std::set<std::pair<std::vector<int>, int>> seen;
  for (const GridPoint& p : g.points()) seen.insert({p.numerators, p.denominator});
  CHECK(seen.size() == 901);
  CHECK(g.directions().rows() == 901);
  CHECK(g.directions().cols() == 3);
}

TEST_CASE("within a shell points follow lexicographic order of unreduced numerators") {
  const SimplexGrid g(3, 4);
  for (int r = 0; r <= 4; ++r) {
    std::vector<std::vector<int>> unreduced;
    const int end = g.prefix_size(r);
    for (int i = g.shell_begin(r); i < end; ++i) {
      const GridPoint& p = g.point(i);
      const int scale = (r + 2) / p.denominator;
      std::vector<int> u;
      for (int v : p.numerators) u.push_back(v * scale);
      unreduced.push_back(u);
    }
    CHECK(std::is_sorted(unreduced.begin(), unreduced.end()));
  }
}

TEST_CASE("build_grid is deterministic") {
  CHECK(grid_to_json(build_grid(3, 15)) == grid_to_json(build_grid(3, 15)));
  const auto j = nlohmann::json::parse(grid_to_json(build_grid(2, 1)));
  CHECK(j["m"] == 2);
  CHECK(j["r_max"] == 1);
  CHECK(j["points"].size() == 5);
}

TEST_CASE("check_count_bound") {
  CHECK(check_count_bound(build_grid(3, 15)));
  CHECK(check_count_bound(build_grid(5, 7)));
  CHECK(check_count_bound(build_grid(2, 0)));
  CHECK_THROWS_AS(check_count_bound(build_grid(1, 3)), std::invalid_argument);
  // Independent evaluation of the bound for every prefix.
  const SimplexGrid g(3, 15);
  for (int r = 0; r <= 15; ++r) {
    const long double bound = 9.0L * (std::pow(3.0L, r + 1) - 1.0L) / 2.0L;
    CHECK(g.prefix_size(r) <= bound);
  }
}

TEST_CASE("next_active_set") {
  const SimplexGrid g3(3, 15);
  const SimplexGrid g5(5, 7);
  CHECK(next_active_set(g3, 6, 45) == 51);
  CHECK(next_active_set(g3, 891, 45) == 901);
  CHECK(next_active_set(g5, 15, 70) == 85);
  CHECK_THROWS_AS(next_active_set(g3, 5, 45), std::invalid_argument);
  CHECK_THROWS_AS(next_active_set(g3, 6, 0), std::invalid_argument);
}
