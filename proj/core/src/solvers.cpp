#include "pffw/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "pffw/errors.hpp"
#include "pffw/linalg.hpp"
#include "pffw/smoothing.hpp"

namespace pffw {

namespace {

std::vector<Sample> draw_batch(SampleStream& stream, int batch) {
  std::vector<Sample> out(static_cast<std::size_t>(batch));
  for (auto& s : out) s = stream.next();
  return out;
}

// mu_k >= mu_{k-1} (1 - eta_k), the homotopy compatibility condition; a
// violation means the schedule is broken, not the data
void check_mu_condition(double prev_mu, const ScheduleValues& sv, long long k) {
  if (k < 2) return;
  if (sv.mu < prev_mu * (1.0 - sv.eta) - 1e-12 * prev_mu)
    throw std::logic_error("schedule violates mu_k >= mu_{k-1}(1 - eta_k)");
}

void check_trim_invariant(const TrimState& ts, const VectorXd& s, double tau) {
  // either this step refreshed (v == s, gap reset) or the drift is < tau
  if (ts.last_gap == 0.0 && ts.v.size() == s.size() &&
      (ts.v.array() == s.array()).all())
    return;
  if (ts.last_gap < tau) return;
  throw std::logic_error("trim invariant broken: ||s - v|| >= tau without a call");
}

// cheap every step; `deep` adds the smallest-eigenvalue check (logged rows)
void assert_in_atoms(const AtomSet& atoms, const VectorXd& x, bool deep) {
  if (atoms.side() > 0) {
    const Index n = atoms.side();
    double tr = 0.0;
    for (Index i = 0; i < n; ++i) tr += x[flat_index(i, i, n)];
    const double bound = atoms.trace_bound();
    if (tr > bound + 1e-8 * std::max(1.0, bound))
      throw std::logic_error("iterate left the trace ball");
    if (deep) {
      SymMat a = SymMat::from_flat(x);
      EigPair p = extreme_eigpair(a, Extreme::Smallest);
      // the Ritz value itself carries O(residual) error, so the floor has
      // to scale with ||x||_F
      const double floor = 1e-7 + 1e-8 * x.norm();
      if (p.value < -floor)
        throw std::logic_error("iterate left the PSD cone");
    }
  } else {
    const double tol = 1e-12 * (1.0 + (atoms.hi() - atoms.lo()).cwiseAbs().maxCoeff());
    if ((x.array() < atoms.lo().array() - tol).any() ||
        (x.array() > atoms.hi().array() + tol).any())
      throw std::logic_error("iterate left the hypercube");
  }
}

void bump_oracle_counters(StepCounters& c, const StepContext& ctx) {
  // nominal per-iteration estimator size: one query per minibatch sample
  // (Sfo), 2m coordinate probes per sample (Szo)
  if (ctx.mode == OracleMode::Szo)
    c.szo_calls += 2ll * static_cast<long long>(ctx.prob->dim) * ctx.batch;
  else
    c.sfo_calls += ctx.batch;
}

LmoOptions lmo_opts_for(const StepContext& ctx, long long k) {
  LmoOptions o;
  o.seed = mix_seed(ctx.seed ^ 0xa70b57a1ull, static_cast<std::uint64_t>(k));
  return o;
}

VectorXd fw_update(const VectorXd& x, const VectorXd& z, double eta) {
  return x + eta * (z - x);
}

// constraint channel a plus step works against this iteration: the full one,
// or a uniformly sampled row subset
const ConstraintChannel* active_channel(const StepContext& ctx, long long k,
                                        std::optional<ConstraintChannel>& slot) {
  const Problem& prob = *ctx.prob;
  if (!prob.channel) return nullptr;
  if (ctx.constraint_frac >= 1.0) return &*prob.channel;
  if (!prob.channel->samplable())
    throw ConfigError("channel rows are not separable; constraint-frac must be 1");
  Rng cr(mix_seed(ctx.seed ^ 0xc047f2acull, static_cast<std::uint64_t>(k)));
  slot = prob.channel->sample_rows(ctx.constraint_frac, cr);
  return &*slot;
}

}  // namespace

Algo parse_algo(const std::string& name) {
  if (name == "most-fw") return Algo::MostFw;
  if (name == "most-fw-plus") return Algo::MostFwPlus;
  if (name == "t-most-fw") return Algo::TMostFw;
  if (name == "t-most-fw-plus") return Algo::TMostFwPlus;
  if (name == "shcgm") return Algo::Shcgm;
  if (name == "hfw") return Algo::Hfw;
  throw ConfigError("unknown algorithm '" + name + "'");
}

std::string algo_name(Algo a) {
  switch (a) {
    case Algo::MostFw: return "most-fw";
    case Algo::MostFwPlus: return "most-fw-plus";
    case Algo::TMostFw: return "t-most-fw";
    case Algo::TMostFwPlus: return "t-most-fw-plus";
    case Algo::Shcgm: return "shcgm";
    case Algo::Hfw: return "hfw";
  }
  throw ConfigError("bad algo enum");
}

bool is_trimmed(Algo a) { return a == Algo::TMostFw || a == Algo::TMostFwPlus; }

Variant algo_variant(Algo a) {
  return (a == Algo::MostFwPlus || a == Algo::TMostFwPlus) ? Variant::MostFwPlus
                                                           : Variant::MostFw;
}

SolverState init_state(const Problem& prob) {
  SolverState st;
  st.x = prob.atoms.initial_atom();
  st.tracker.prev_x = st.x;  // x_0 = x_1
  return st;
}

SolverState most_fw_step(SolverState st, const StepContext& ctx, bool trimmed) {
  const Problem& prob = *ctx.prob;
  const long long k = st.k + 1;
  const ScheduleValues sv =
      schedule(ctx.sched, static_cast<long>(k), prob.dim, ctx.mode);
  check_mu_condition(st.prev_mu, sv, k);

  const VectorXd xk = st.x;
  const auto batch = draw_batch(*ctx.stream, ctx.batch);
  PairedGrad pg =
      paired_stoch_grad(*ctx.oracle, xk, st.tracker.prev_x, sv.rho, batch);
  st.tracker = momentum_track(std::move(st.tracker), sv.gamma, pg.at_x, pg.at_prev);
  st.tracker.prev_x = xk;

  VectorXd w = st.tracker.y;
  if (prob.channel) {
    SmoothedPenalty pen{&*prob.channel, sv.mu};
    w += penalty_grad(pen, xk);
  }

  VectorXd z;
  const LmoOptions lopt = lmo_opts_for(ctx, k);
  if (trimmed) {
    st.trim = trimmed_lmo(std::move(st.trim), prob.atoms, w, sv.tau, k == 1, lopt);
    check_trim_invariant(st.trim, w, sv.tau);
    z = st.trim.z;
    st.counters.lmo_calls = st.trim.calls;
    st.counters.lmo_skipped = st.trim.skipped;
  } else {
    z = lmo(prob.atoms, w, lopt);
    st.counters.lmo_calls += 1;
  }
  bump_oracle_counters(st.counters, ctx);

  st.x = fw_update(xk, z, sv.eta);
  assert_in_atoms(prob.atoms, st.x, false);
  st.prev_mu = sv.mu;
  st.k = k;
  return st;
}

SolverState most_fw_plus_step(SolverState st, const StepContext& ctx,
                              bool trimmed) {
  const Problem& prob = *ctx.prob;
  const long long k = st.k + 1;
  const ScheduleValues sv =
      schedule(ctx.sched, static_cast<long>(k), prob.dim, ctx.mode);
  check_mu_condition(st.prev_mu, sv, k);

  const VectorXd xk = st.x;
  std::optional<ConstraintChannel> slot;
  const ConstraintChannel* chan = active_channel(ctx, k, slot);

  const auto batch = draw_batch(*ctx.stream, ctx.batch);
  PairedGrad pg =
      paired_stoch_grad(*ctx.oracle, xk, st.tracker.prev_x, sv.rho, batch);
  VectorXd g_now = std::move(pg.at_x);
  VectorXd g_prev = std::move(pg.at_prev);
  if (chan) {
    // the correction term keeps the previous smoothing level but sees this
    // iteration's sampled channel
    SmoothedPenalty pen_now{chan, sv.mu};
    g_now += penalty_grad(pen_now, xk);
    SmoothedPenalty pen_prev{chan, k >= 2 ? st.prev_mu : sv.mu};
    g_prev += penalty_grad(pen_prev, st.tracker.prev_x);
  }
  st.tracker = momentum_track(std::move(st.tracker), sv.gamma, g_now, g_prev);
  st.tracker.prev_x = xk;

  const VectorXd& s = st.tracker.y;  // LMO runs on the tracked surrogate itself
  VectorXd z;
  const LmoOptions lopt = lmo_opts_for(ctx, k);
  if (trimmed) {
    st.trim = trimmed_lmo(std::move(st.trim), prob.atoms, s, sv.tau, k == 1, lopt);
    check_trim_invariant(st.trim, s, sv.tau);
    z = st.trim.z;
    st.counters.lmo_calls = st.trim.calls;
    st.counters.lmo_skipped = st.trim.skipped;
  } else {
    z = lmo(prob.atoms, s, lopt);
    st.counters.lmo_calls += 1;
  }
  bump_oracle_counters(st.counters, ctx);

  st.x = fw_update(xk, z, sv.eta);
  assert_in_atoms(prob.atoms, st.x, false);
  st.prev_mu = sv.mu;
  st.k = k;
  return st;
}

SolverState shcgm_step(SolverState st, const StepContext& ctx) {
  const Problem& prob = *ctx.prob;
  const long long k = st.k + 1;
  const ScheduleValues sv =
      schedule(ctx.sched, static_cast<long>(k), prob.dim, ctx.mode);
  check_mu_condition(st.prev_mu, sv, k);
  // documented baseline default: slower tracker weight, same eta/mu
  const double gamma = std::pow(static_cast<double>(k), -2.0 / 3.0);

  const VectorXd xk = st.x;
  const auto batch = draw_batch(*ctx.stream, ctx.batch);
  VectorXd g = stoch_grad(*ctx.oracle, xk, sv.rho, batch);
  st.tracker = classic_track(std::move(st.tracker), gamma, g);
  st.tracker.prev_x = xk;

  VectorXd w = st.tracker.y;
  if (prob.channel) {
    SmoothedPenalty pen{&*prob.channel, sv.mu};
    w += penalty_grad(pen, xk);
  }
  VectorXd z = lmo(prob.atoms, w, lmo_opts_for(ctx, k));
  st.counters.lmo_calls += 1;
  bump_oracle_counters(st.counters, ctx);

  st.x = fw_update(xk, z, sv.eta);
  assert_in_atoms(prob.atoms, st.x, false);
  st.prev_mu = sv.mu;
  st.k = k;
  return st;
}

SolverState hfw_step(SolverState st, const StepContext& ctx) {
  const Problem& prob = *ctx.prob;
  if (!prob.expected_grad)
    throw ConfigError("hfw needs an exact expected gradient");
  const long long k = st.k + 1;
  const ScheduleValues sv =
      schedule(ctx.sched, static_cast<long>(k), prob.dim, ctx.mode);
  check_mu_condition(st.prev_mu, sv, k);

  const VectorXd xk = st.x;
  VectorXd w = prob.expected_grad(xk);
  if (prob.channel) {
    SmoothedPenalty pen{&*prob.channel, sv.mu};
    w += penalty_grad(pen, xk);
  }
  VectorXd z = lmo(prob.atoms, w, lmo_opts_for(ctx, k));
  st.counters.lmo_calls += 1;
  st.counters.sfo_calls += 1;  // one full-gradient query

  st.x = fw_update(xk, z, sv.eta);
  assert_in_atoms(prob.atoms, st.x, false);
  st.prev_mu = sv.mu;
  st.k = k;
  return st;
}

RunRecord run(const Problem& prob, const RunOptions& opt) {
  if (opt.iters < 1) throw ConfigError("iters must be >= 1");
  if (opt.batch < 1) throw ConfigError("batch must be >= 1");
  if (!(opt.constraint_frac > 0.0 && opt.constraint_frac <= 1.0))
    throw ConfigError("constraint-frac must lie in (0, 1]");
  if (opt.log_every < 1) throw ConfigError("log-every must be >= 1");
  if (opt.oracle == OracleMode::Szo && !prob.oracle.value)
    throw ConfigError("szo mode needs a value oracle");

  SampleOracle oracle = prob.oracle;
  oracle.mode = opt.oracle;
  // fresh raw-call instrumentation per run; the problem's own counter object
  // stays untouched so concurrent runs never share mutable state
  oracle.counters = std::make_shared<OracleCounters>();

  ScheduleParams sched = opt.sched;
  sched.variant = algo_variant(opt.algo);
  sched.consts = prob.consts;  // the problem knows its own constants

  RunRecord rec;
  rec.algo = algo_name(opt.algo);
  rec.problem = prob.name;
  rec.oracle = opt.oracle == OracleMode::Szo ? "szo" : "sfo";
  rec.seed = opt.seed;
  rec.mu_c = sched.mu_c;
  rec.tau0 = sched.tau0;
  rec.iters = static_cast<long>(opt.iters);
  rec.batch = opt.batch;
  rec.constraint_frac = opt.constraint_frac;
  rec.log_every = static_cast<long>(opt.log_every);
  rec.git_rev = build_git_rev();
  rec.fstar_source = prob.fstar_source;

  SampleStream stream(mix_seed(opt.seed, 0xba7c4e11ull));
  StepContext ctx;
  ctx.prob = &prob;
  ctx.oracle = &oracle;
  ctx.sched = sched;
  ctx.mode = opt.oracle;
  ctx.batch = opt.batch;
  ctx.constraint_frac = opt.constraint_frac;
  ctx.seed = opt.seed;
  ctx.stream = &stream;

  const bool plus = algo_variant(opt.algo) == Variant::MostFwPlus;
  // expected LMO-input target for the tracking-error column
  double pen_frac = 1.0;
  if (plus && prob.channel && opt.constraint_frac < 1.0 && prob.channel->samplable()) {
    const double rows = static_cast<double>(prob.channel->scalar_row_count());
    pen_frac = std::ceil(opt.constraint_frac * rows) / rows;
  }

  SolverState st = init_state(prob);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    for (long long k = 1; k <= opt.iters; ++k) {
      switch (opt.algo) {
        case Algo::MostFw: st = most_fw_step(std::move(st), ctx, false); break;
        case Algo::TMostFw: st = most_fw_step(std::move(st), ctx, true); break;
        case Algo::MostFwPlus:
          st = most_fw_plus_step(std::move(st), ctx, false);
          break;
        case Algo::TMostFwPlus:
          st = most_fw_plus_step(std::move(st), ctx, true);
          break;
        case Algo::Shcgm: st = shcgm_step(std::move(st), ctx); break;
        case Algo::Hfw: st = hfw_step(std::move(st), ctx); break;
      }
      const bool log =
          k == 1 || k % opt.log_every == 0 || k == opt.iters;
      if (!log) continue;

      assert_in_atoms(prob.atoms, st.x, true);
      const Metrics mt = metrics(prob, st.x);
      RunRow row;
      row.k = static_cast<long>(k);
      row.obj_proxy = mt.obj_proxy;
      row.cons_violation = mt.cons_violation;
      row.lmo_calls = static_cast<long>(st.counters.lmo_calls);
      row.lmo_skipped = static_cast<long>(st.counters.lmo_skipped);
      row.sfo_calls = st.counters.sfo_calls;
      row.szo_calls = st.counters.szo_calls;
      if (opt.track_error && prob.expected_grad && st.tracker.y.size() > 0) {
        VectorXd target = prob.expected_grad(st.tracker.prev_x);
        if (plus && prob.channel) {
          SmoothedPenalty pen{&*prob.channel, st.prev_mu};
          target += pen_frac * penalty_grad(pen, st.tracker.prev_x);
        }
        row.tracking_err = (st.tracker.y - target).squaredNorm();
      }
      row.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      rec.rows.push_back(std::move(row));
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

}  // namespace pffw
