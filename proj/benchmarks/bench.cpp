#include <random>

#include <benchmark/benchmark.h>

#include "embedlab/embed.hpp"
#include "embedlab/numkit.hpp"

using namespace embedlab;

namespace {

// Rates rescaled so that trace(R) = -depth, i.e. det(exp R) = e^-depth at every n.
RealMatrix random_generator(int n, unsigned seed, double depth = 2.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rate(0.05, 1.0);
  RealMatrix r = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) r(i, j) = rate(rng);
    }
    r(i, i) = -r.row(i).sum();
  }
  return r * (depth / -r.trace());
}

void BM_expm(benchmark::State& state) {
  const RealMatrix r = random_generator(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(expm(r));
}

void BM_eig(benchmark::State& state) {
  const RealMatrix p = expm(random_generator(static_cast<int>(state.range(0)), 2));
  for (auto _ : state) benchmark::DoNotOptimize(eig(p));
}

void BM_check_embeddable(benchmark::State& state) {
  const RealMatrix p = expm(random_generator(static_cast<int>(state.range(0)), 3));
  for (auto _ : state) benchmark::DoNotOptimize(check_embeddable(p));
}

// det = e^-15 widens the branch window, so this one walks many candidates.
void BM_check_embeddable_wide(benchmark::State& state) {
  const RealMatrix p = expm(random_generator(static_cast<int>(state.range(0)), 4, 15.0));
  for (auto _ : state) benchmark::DoNotOptimize(check_embeddable(p));
}

}  // namespace

BENCHMARK(BM_expm)->DenseRange(2, 10, 2)->Arg(32);
BENCHMARK(BM_eig)->DenseRange(2, 10, 2)->Arg(32);
BENCHMARK(BM_check_embeddable)->DenseRange(2, 8, 2);
BENCHMARK(BM_check_embeddable_wide)->DenseRange(2, 6, 2);

BENCHMARK_MAIN();
