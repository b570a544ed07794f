// Whole-iteration cost of the solver steps on a desk-scale covariance
// instance, split by algorithm so LMO trimming and the penalty term show up
// in the deltas.

#include <benchmark/benchmark.h>

#include "pffw/problems.hpp"
#include "pffw/solvers.hpp"

using namespace pffw;

namespace {

struct Fixture {
  Problem prob;
  SampleOracle oracle;
  SampleStream stream{0x57e9};
  StepContext ctx;

  explicit Fixture(Algo algo, Index d = 40)
      : prob(make_sparse_cov(d, 5, 11, true)) {
    oracle = prob.oracle;
    oracle.counters = std::make_shared<OracleCounters>();
    ctx.prob = &prob;
    ctx.oracle = &oracle;
    ctx.sched.variant = algo_variant(algo);
    ctx.sched.consts = prob.consts;
    ctx.batch = 5;
    ctx.seed = 1;
    ctx.stream = &stream;
  }
};

void bm_most_fw_step(benchmark::State& state) {
  Fixture f(Algo::MostFw, state.range(0));
  SolverState st = init_state(f.prob);
  for (auto _ : state) {
    st = most_fw_step(std::move(st), f.ctx, false);
    benchmark::DoNotOptimize(st.x.data());
  }
}

void bm_most_fw_plus_step(benchmark::State& state) {
  Fixture f(Algo::MostFwPlus, state.range(0));
  f.ctx.constraint_frac = 0.25;
  SolverState st = init_state(f.prob);
  for (auto _ : state) {
    st = most_fw_plus_step(std::move(st), f.ctx, false);
    benchmark::DoNotOptimize(st.x.data());
  }
}

void bm_trimmed_step(benchmark::State& state) {
  Fixture f(Algo::TMostFw, state.range(0));
  f.ctx.sched.tau0 = 3.5;
  SolverState st = init_state(f.prob);
  for (auto _ : state) {
    st = most_fw_step(std::move(st), f.ctx, true);
    benchmark::DoNotOptimize(st.x.data());
  }
  state.counters["skip_frac"] =
      double(st.counters.lmo_skipped) /
      double(std::max<long long>(1, st.k));
}

void bm_shcgm_step(benchmark::State& state) {
  Fixture f(Algo::Shcgm, state.range(0));
  SolverState st = init_state(f.prob);
  for (auto _ : state) {
    st = shcgm_step(std::move(st), f.ctx);
    benchmark::DoNotOptimize(st.x.data());
  }
}

}  // namespace

BENCHMARK(bm_most_fw_step)->Arg(20)->Arg(40)->Arg(80);
BENCHMARK(bm_most_fw_plus_step)->Arg(20)->Arg(40)->Arg(80);
BENCHMARK(bm_trimmed_step)->Arg(40);
BENCHMARK(bm_shcgm_step)->Arg(20)->Arg(40)->Arg(80);

BENCHMARK_MAIN();
