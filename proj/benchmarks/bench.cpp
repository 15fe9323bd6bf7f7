#include "polycone/alm.hpp"
#include "polycone/simplex_grid.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace polycone;

namespace {

SymMatrix random_symmetric(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) a(i, j) = a(j, i) = normal(rng);
  return SymMatrix::from_matrix(a);
}

void BM_BuildGrid(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int r = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(build_grid(m, r).size());
}
BENCHMARK(BM_BuildGrid)->Args({3, 15})->Args({5, 7})->Unit(benchmark::kMillisecond);

void BM_ProjectPolar(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto grid = std::make_shared<const SimplexGrid>(m, m == 3 ? 15 : 7);
  const PolyhedralConeApprox cone(grid, static_cast<int>(state.range(1)));
  std::mt19937_64 rng(1);
  std::vector<SymMatrix> ys;
  for (int i = 0; i < 32; ++i) ys.push_back(random_symmetric(m, rng));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(project_polar(ys[i++ % ys.size()], cone).polar.norm());
}
BENCHMARK(BM_ProjectPolar)->Args({3, 51})->Args({3, 901})->Args({5, 1816})->Unit(benchmark::kMicrosecond);

void BM_SolveNNQP(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd b(6, n);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = normal(rng);
  const Eigen::MatrixXd r = b.transpose() * b;
  Eigen::VectorXd w(6), s(n);
  for (int i = 0; i < 6; ++i) w(i) = normal(rng);
  for (int j = 0; j < n; ++j) s(j) = std::abs(normal(rng));
  s += b.transpose() * w;
  for (auto _ : state) benchmark::DoNotOptimize(solve_nnqp(r, s, Eigen::VectorXd()).kkt_residual);
}
BENCHMARK(BM_SolveNNQP)->Arg(50)->Arg(500)->Unit(benchmark::kMicrosecond);

void BM_RunALM(benchmark::State& state) {
  const ProblemInstance inst = generate_instance(ObjectiveId::cq, 3, 0, 1);
  ALMConfig cfg = ALMConfig::defaults_for(3);
  cfg.seed = 1;
  cfg.mode = state.range(0) == 0 ? Mode::proposed : Mode::standard;
  for (auto _ : state) benchmark::DoNotOptimize(run_alm(inst, cfg).iterations);
}
BENCHMARK(BM_RunALM)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
