// Projection and smoothed-penalty gradient costs on the channel shapes the
// SDP problems actually use.

#include <benchmark/benchmark.h>

#include "pffw/channel.hpp"
#include "pffw/rng.hpp"
#include "pffw/sets.hpp"
#include "pffw/smoothing.hpp"

using namespace pffw;

namespace {

VectorXd random_vec(Index m, std::uint64_t seed) {
  Rng rng(seed);
  VectorXd v(m);
  for (Index i = 0; i < m; ++i) v[i] = rng.uniform(-2.0, 2.0);
  return v;
}

void bm_l1_project(benchmark::State& state) {
  const Index m = state.range(0);
  EasySet ball = EasySet::l1_ball(m, 1.0);
  VectorXd y = random_vec(m, 0xa1);
  for (auto _ : state) benchmark::DoNotOptimize(ball.project(y));
  state.SetComplexityN(m);
}

// k-means-style channel on an n x n iterate: row sums pinned to one,
// stacked with entrywise nonnegativity.
ConstraintChannel kmeans_channel(Index n) {
  std::vector<ConstraintChannel> parts;
  parts.push_back(
      ConstraintChannel::row_sum(n, EasySet::fixed_point(VectorXd::Ones(n))));
  parts.push_back(
      ConstraintChannel::identity(n * n, EasySet::nonneg_orthant(n * n)));
  return ConstraintChannel::stack(std::move(parts));
}

void bm_penalty_grad(benchmark::State& state) {
  const Index n = state.range(0);
  ConstraintChannel chan = kmeans_channel(n);
  SmoothedPenalty pen{&chan, 0.1};
  VectorXd x = random_vec(n * n, 0xa2);
  for (auto _ : state) benchmark::DoNotOptimize(penalty_grad(pen, x));
  state.SetComplexityN(n);
}

void bm_channel_sample(benchmark::State& state) {
  const Index n = state.range(0);
  ConstraintChannel chan = kmeans_channel(n);
  std::uint64_t k = 0;
  for (auto _ : state) {
    Rng rng(0xa3 + k++);
    benchmark::DoNotOptimize(chan.sample_rows(0.1, rng));
  }
}

}  // namespace

BENCHMARK(bm_l1_project)->Arg(100)->Arg(1000)->Arg(10000)->Complexity();
BENCHMARK(bm_penalty_grad)->Arg(20)->Arg(60)->Arg(100)->Complexity();
BENCHMARK(bm_channel_sample)->Arg(20)->Arg(60)->Arg(100);

BENCHMARK_MAIN();
