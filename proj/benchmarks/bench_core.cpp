#include <benchmark/benchmark.h>

#include <random>

#include "hdm/embedding.hpp"
#include "hdm/experiments.hpp"
#include "hdm/gramian.hpp"
#include "hdm/solver.hpp"

namespace {

using namespace hdm;

Mat random_symmetric(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Mat m(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) m(i, j) = m(j, i) = gauss(rng);
  }
  return m;
}

void BM_psd_project(benchmark::State& state) {
  const Mat m = random_symmetric(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(psd_project(m));
  }
}
BENCHMARK(BM_psd_project)->Arg(16)->Arg(32)->Arg(64);

void BM_h_gramian(benchmark::State& state) {
  const auto pts = random_loid_points(static_cast<int>(state.range(0)), 2, 2, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(h_gramian(pts));
  }
}
BENCHMARK(BM_h_gramian)->Arg(16)->Arg(64);

void BM_project_to_loid(benchmark::State& state) {
  Vec z(3);
  z << -1.3, 0.8, 2.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_to_loid(z));
  }
}
BENCHMARK(BM_project_to_loid);

void BM_embed_points(benchmark::State& state) {
  const auto pts = random_loid_points(static_cast<int>(state.range(0)), 2, 3, 1.0);
  const Mat g = h_gramian(pts);
  for (auto _ : state) {
    benchmark::DoNotOptimize(embed_points(g, 2));
  }
}
BENCHMARK(BM_embed_points)->Arg(16)->Arg(32);

void BM_solve_complete(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto pts = random_loid_points(n, 2, 4, 1.0);
  const Mat d = distance_matrix(pts);
  SplitSdpProblem p = SplitSdpProblem::trace_objective(n);
  p.mask = ObservationMask::complete(n);
  p.target_cosh = d.array().cosh().matrix();
  p.epsilon1 = 1e-6;
  SolverConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_split_sdp(p, cfg));
  }
}
BENCHMARK(BM_solve_complete)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_tree_distance_matrix(benchmark::State& state) {
  const WeightedTree t = random_weighted_tree(25, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tree_distance_matrix(t));
  }
}
BENCHMARK(BM_tree_distance_matrix);

}  // namespace

BENCHMARK_MAIN();
