#pragma once

#include <cstdint>
#include <string>

#include "pffw/gradients.hpp"
#include "pffw/lmo.hpp"
#include "pffw/problems.hpp"
#include "pffw/record.hpp"
#include "pffw/schedule.hpp"

namespace pffw {

enum class Algo { MostFw, MostFwPlus, TMostFw, TMostFwPlus, Shcgm, Hfw };

Algo parse_algo(const std::string& name);
std::string algo_name(Algo a);
bool is_trimmed(Algo a);
Variant algo_variant(Algo a);  // schedule family the algo runs on

struct StepCounters {
  long long lmo_calls = 0;
  long long lmo_skipped = 0;
  long long sfo_calls = 0;
  long long szo_calls = 0;
};

// Everything a step carries from iteration to iteration. k counts completed
// iterations; the first call of a step sees k == 0 and runs iteration 1.
struct SolverState {
  VectorXd x;            // x_{k+1} after k steps
  TrackerState tracker;  // y_k, formed at tracker.prev_x == x_k
  TrimState trim;
  long long k = 0;
  double prev_mu = 0.0;  // mu_k of the last completed step
  StepCounters counters;
};

struct RunOptions {
  Algo algo = Algo::MostFw;
  OracleMode oracle = OracleMode::Sfo;
  ScheduleParams sched;  // .variant is overwritten from the algo
  long long iters = 1000;
  int batch = 1;
  double constraint_frac = 1.0;  // plus variants: fraction of channel rows per draw
  std::uint64_t seed = 0;
  long long log_every = 10;
  bool track_error = false;  // log ||y_k - expected surrogate||^2 per row
};

// x_0 = x_1 = a single deterministic atom, y_0 = 0 (erased by gamma_1 = 1).
SolverState init_state(const Problem& prob);

// One iteration each. `ctx` bundles the run-level knobs the steps need.
struct StepContext {
  const Problem* prob = nullptr;
  const SampleOracle* oracle = nullptr;  // run-local copy with the mode applied
  ScheduleParams sched;
  OracleMode mode = OracleMode::Sfo;
  int batch = 1;
  double constraint_frac = 1.0;
  std::uint64_t seed = 0;
  SampleStream* stream = nullptr;
};

SolverState most_fw_step(SolverState st, const StepContext& ctx, bool trimmed);
SolverState most_fw_plus_step(SolverState st, const StepContext& ctx, bool trimmed);
SolverState shcgm_step(SolverState st, const StepContext& ctx);
SolverState hfw_step(SolverState st, const StepContext& ctx);

// Full run loop: dispatches on algo, logs at k = 1, every log_every-th
// iteration, and the final one. Deterministic given the seed; on an oracle
// failure the partial record is returned with the error field set.
RunRecord run(const Problem& prob, const RunOptions& opt);

}  // namespace pffw
