// Lanczos LMO throughput over PSD trace balls of growing side length.

#include <benchmark/benchmark.h>

#include "pffw/lmo.hpp"
#include "pffw/rng.hpp"

using namespace pffw;

namespace {

VectorXd random_sym_flat(Index n, std::uint64_t seed) {
  Rng rng(seed);
  MatrixXd w(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i <= j; ++i) w(i, j) = w(j, i) = rng.uniform(-1.0, 1.0);
  return Eigen::Map<const VectorXd>(w.data(), n * n);
}

void bm_lmo_psd(benchmark::State& state) {
  const Index n = state.range(0);
  AtomSet ball = AtomSet::psd_trace_ball(n, 2.0);
  VectorXd w = random_sym_flat(n, 0xb1);
  LmoOptions opts;
  std::uint64_t k = 0;
  for (auto _ : state) {
    opts.seed = 0x7c0ffee5ull + k++;  // fresh Lanczos start each round
    benchmark::DoNotOptimize(lmo(ball, w, opts));
  }
  state.SetComplexityN(n);
}

void bm_lmo_tolerance(benchmark::State& state) {
  const Index n = 64;
  AtomSet ball = AtomSet::psd_trace_ball(n, 2.0);
  VectorXd w = random_sym_flat(n, 0xb2);
  LmoOptions opts;
  opts.tol = std::pow(10.0, -double(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lmo(ball, w, opts));
}

}  // namespace

BENCHMARK(bm_lmo_psd)->Arg(16)->Arg(32)->Arg(64)->Arg(128)->Complexity();
BENCHMARK(bm_lmo_tolerance)->DenseRange(5, 11, 2);

BENCHMARK_MAIN();
