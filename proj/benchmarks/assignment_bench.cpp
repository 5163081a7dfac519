#include "mdbglmb/assignment.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace mdbglmb;

static void BM_RankedAssociations(benchmark::State& state)
{
  auto const tracks = static_cast<int>(state.range(0));
  auto const measurements = static_cast<int>(state.range(1));
  auto const m = static_cast<std::size_t>(state.range(2));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> cost(0.0, 10.0);
  Eigen::MatrixXd detect(tracks, measurements);
  Eigen::VectorXd miss(tracks);
  for (int r = 0; r < tracks; ++r)
  {
    miss(r) = cost(rng);
    for (int c = 0; c < measurements; ++c)
    {
      detect(r, c) = cost(rng);
    }
  }
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(ranked_associations(detect, miss, m));
  }
}
BENCHMARK(BM_RankedAssociations)->Args({ 5, 6, 50 })->Args({ 10, 30, 100 })->Args({ 10, 30, 1000 });

static void BM_KBestSubsets(benchmark::State& state)
{
  auto const n = static_cast<std::size_t>(state.range(0));
  auto const k = static_cast<std::size_t>(state.range(1));
  std::mt19937_64 rng(2);
  std::lognormal_distribution<double> ratio(0.0, 2.0);
  std::vector<double> ratios(n);
  for (auto& r : ratios)
  {
    r = ratio(rng);
  }
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(k_best_subsets(ratios, 1.0, k));
  }
}
BENCHMARK(BM_KBestSubsets)->Args({ 10, 20 })->Args({ 30, 40 })->Args({ 30, 1000 });
