#include "pffw/verify.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pffw/channel.hpp"
#include "pffw/errors.hpp"
#include "pffw/gradients.hpp"
#include "pffw/linalg.hpp"
#include "pffw/lmo.hpp"
#include "pffw/problems.hpp"
#include "pffw/record.hpp"
#include "pffw/rng.hpp"
#include "pffw/schedule.hpp"
#include "pffw/sets.hpp"
#include "pffw/smoothing.hpp"
#include "pffw/solvers.hpp"

namespace pffw {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

VectorXd random_vec(Rng& rng, Index n, double scale = 1.0) {
  VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = scale * rng.normal();
  return v;
}

SymMat random_sym(Rng& rng, Index n) {
  MatrixXd a(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) a(i, j) = rng.normal();
  return SymMat::from_dense(0.5 * (a + a.transpose()));
}

// quadratic oracle with zero sample noise: f = 0.5 ||x - a||^2
SampleOracle quad_oracle(const VectorXd& a) {
  SampleOracle o;
  o.dim = a.size();
  VectorXd center = a;
  o.value = [center](const VectorXd& x, const Sample&) {
    return 0.5 * (x - center).squaredNorm();
  };
  o.grad = [center](const VectorXd& x, const Sample&) {
    return VectorXd(x - center);
  };
  return o;
}

// a small mixed channel for smoothing checks: a couple of sparse rows plus
// an explicit bound row
ConstraintChannel random_rows_channel(Rng& rng, Index m) {
  std::vector<ChannelRow> rows;
  const int nrows = 3 + static_cast<int>(rng.uniform_int(0, 3));
  for (int r = 0; r < nrows; ++r) {
    ChannelRow row;
    const int terms = 1 + static_cast<int>(rng.uniform_int(0, 2));
    for (int t = 0; t < terms; ++t)
      row.coeffs.emplace_back(static_cast<Index>(rng.uniform_int(0, m - 1)),
                              rng.uniform(-2.0, 2.0));
    const int kind = static_cast<int>(rng.uniform_int(0, 2));
    row.rel = kind == 0   ? ChannelRow::Rel::Eq
              : kind == 1 ? ChannelRow::Rel::Ge
                          : ChannelRow::Rel::Le;
    row.rhs = rng.uniform(-1.0, 1.0);
    rows.push_back(std::move(row));
  }
  return ConstraintChannel::rows(std::move(rows), m);
}

using Check = std::function<VerifyResult()>;

VerifyResult guard(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  VerifyResult res;
  res.name = name;
  try {
    auto [ok, detail] = body();
    res.pass = ok;
    res.detail = detail;
  } catch (const std::exception& e) {
    res.pass = false;
    res.detail = std::string("exception: ") + e.what();
  }
  return res;
}

}  // namespace

std::vector<VerifyResult> run_verify(std::uint64_t seed) {
  std::vector<VerifyResult> out;

  // 1. trace-ball LMO against a dense eigendecomposition
  out.push_back(guard("lmo-vs-dense-eig", [&]() -> std::pair<bool, std::string> {
    Rng rng(mix_seed(seed, 1));
    const Index n = 8;
    const double bound = 2.0;
    AtomSet atoms = AtomSet::psd_trace_ball(n, bound);
    double worst = 0.0;
    for (int it = 0; it < 60; ++it) {
      SymMat w = random_sym(rng, n);
      VectorXd z = lmo(atoms, w.flat());
      const double got = z.dot(w.flat());
      Eigen::SelfAdjointEigenSolver<MatrixXd> eig(w.mat());
      const double want = bound * std::min(0.0, eig.eigenvalues()[0]);
      const double rel = std::abs(got - want) / std::max(1.0, std::abs(want));
      worst = std::max(worst, rel);
    }
    return {worst <= 1e-6, "max rel err " + fmt(worst)};
  }));

  // 2. l1-ball projection optimality against random feasible competitors
  out.push_back(guard("l1-projection", [&]() -> std::pair<bool, std::string> {
    Rng rng(mix_seed(seed, 2));
    double worst = 0.0;
    for (int it = 0; it < 80; ++it) {
      const Index n = 1 + static_cast<Index>(rng.uniform_int(0, 5));
      const double radius = rng.uniform(0.2, 3.0);
      EasySet ball = EasySet::l1_ball(n, radius);
      VectorXd y = random_vec(rng, n, 2.0);
      VectorXd p = ball.project(y);
      if (p.lpNorm<1>() > radius + 1e-9) return {false, "projection infeasible"};
      if ((ball.project(p) - p).norm() > 1e-12) return {false, "not idempotent"};
      const double dp = (y - p).norm();
      for (int c = 0; c < 60; ++c) {
        VectorXd q = random_vec(rng, n);
        const double l1 = q.lpNorm<1>();
        if (l1 > radius) q *= radius / l1 * rng.uniform();
        worst = std::max(worst, dp - (y - q).norm());
      }
    }
    return {worst <= 1e-9, "max optimality slack " + fmt(worst)};
  }));

  // 3. smoothed-penalty gradient vs central finite differences
  out.push_back(guard("smoothing-fd", [&]() -> std::pair<bool, std::string> {
    Rng rng(mix_seed(seed, 3));
    const double h = 1e-6;
    double worst = 0.0;
    int used = 0;
    for (int it = 0; it < 200 && used < 60; ++it) {
      const Index m = 4 + static_cast<Index>(rng.uniform_int(0, 4));
      ConstraintChannel chan = random_rows_channel(rng, m);
      const double mu = rng.uniform(0.2, 2.0);
      SmoothedPenalty pen{&chan, mu};
      VectorXd x = random_vec(rng, m, 1.5);
      if (chan.out_near_face(chan.apply(x), 1e-3)) continue;  // kink nearby
      ++used;
      VectorXd g = penalty_grad(pen, x);
      for (Index i = 0; i < m; ++i) {
        VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fd = (penalty_value(pen, xp) - penalty_value(pen, xm)) / (2 * h);
        const double rel = std::abs(g[i] - fd) / std::max(1.0, std::abs(fd));
        worst = std::max(worst, rel);
      }
    }
    return {used >= 40 && worst <= 1e-4,
            "instances " + std::to_string(used) + ", max rel err " + fmt(worst)};
  }));

  // 4. CGE is exact on quadratics
  out.push_back(guard("cge-quadratic", [&]() -> std::pair<bool, std::string> {
    Rng rng(mix_seed(seed, 4));
    double worst = 0.0;
    for (int it = 0; it < 30; ++it) {
      const Index m = 3 + static_cast<Index>(rng.uniform_int(0, 8));
      VectorXd a = random_vec(rng, m);
      SampleOracle o = quad_oracle(a);
      VectorXd x = random_vec(rng, m);
      VectorXd est = cge(o, x, 1e-3, Sample{7});
      worst = std::max(worst, (est - (x - a)).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-10, "max abs err " + fmt(worst)};
  }));

  // 5. schedule compatibility mu_k >= mu_{k-1}(1 - eta_k) up to k = 1e5
  out.push_back(guard("schedule-condition", [&]() -> std::pair<bool, std::string> {
    for (Variant v : {Variant::MostFw, Variant::MostFwPlus}) {
      ScheduleParams p;
      p.variant = v;
      p.mu_c = 2.75;
      double prev = 0.0;
      for (long k = 1; k <= 100000; ++k) {
        ScheduleValues sv = schedule(p, k, 16, OracleMode::Sfo);
        if (k >= 2 && sv.mu < prev * (1.0 - sv.eta) - 1e-15 * prev)
          return {false, "violated at k=" + std::to_string(k)};
        prev = sv.mu;
      }
    }
    return {true, "holds for k <= 1e5, both variants"};
  }));

  // 6. momentum tracker is an exact passthrough under zero variance
  out.push_back(guard("tracker-passthrough", [&]() -> std::pair<bool, std::string> {
    Problem prob = make_quadratic_test(12, seed, 0.0, false);
    RunOptions opt;
    opt.algo = Algo::MostFw;
    opt.iters = 40;
    opt.log_every = 1;
    opt.seed = seed;
    opt.track_error = true;
    RunRecord rec = run(prob, opt);
    if (!rec.error.empty()) return {false, rec.error};
    double worst = 0.0;
    for (const auto& row : rec.rows)
      if (row.tracking_err) worst = std::max(worst, *row.tracking_err);
    return {worst <= 1e-30, "max tracking err " + fmt(worst)};
  }));

  // 7. trimming with tau0 = 0 reproduces the untrimmed trace bit for bit
  out.push_back(guard("trim-tau0-identity", [&]() -> std::pair<bool, std::string> {
    Problem prob = make_quadratic_test(10, seed + 1, 0.5, true);
    RunOptions a;
    a.algo = Algo::MostFw;
    a.iters = 120;
    a.log_every = 7;
    a.seed = seed + 1;
    RunOptions b = a;
    b.algo = Algo::TMostFw;
    b.sched.tau0 = 0.0;
    RunRecord ra = run(prob, a), rb = run(prob, b);
    if (!ra.error.empty()) return {false, ra.error};
    if (!rb.error.empty()) return {false, rb.error};
    // the skipped column legitimately differs (it stays 0 in both here);
    // whole-row equality modulo wall time is the contract
    return {rows_equal_ignoring_wall(ra, rb), "rows compared: " +
                                                  std::to_string(ra.rows.size())};
  }));

  // 8. a trimmed run with a real threshold keeps the Lemma-style invariant
  // (asserted inside the step) and accounts every iteration
  out.push_back(guard("trim-accounting", [&]() -> std::pair<bool, std::string> {
    Problem prob = make_quadratic_test(10, seed + 2, 0.5, true);
    RunOptions opt;
    opt.algo = Algo::TMostFw;
    opt.iters = 150;
    opt.log_every = 150;
    opt.seed = seed + 2;
    opt.sched.tau0 = 20.0;  // large enough that late iterations actually skip
    RunRecord rec = run(prob, opt);
    if (!rec.error.empty()) return {false, rec.error};
    const auto& last = rec.rows.back();
    const bool ok =
        last.lmo_calls + last.lmo_skipped == last.k && last.lmo_skipped > 0;
    return {ok, "calls " + std::to_string(last.lmo_calls) + ", skipped " +
                    std::to_string(last.lmo_skipped)};
  }));

  // 9. same seed, same record body
  out.push_back(guard("determinism", [&]() -> std::pair<bool, std::string> {
    Problem prob = make_kmeans_synthetic(10, 2, 3, 0.2, seed + 3);
    RunOptions opt;
    opt.algo = Algo::MostFwPlus;
    opt.iters = 60;
    opt.log_every = 9;
    opt.seed = seed + 3;
    opt.constraint_frac = 0.5;
    RunRecord ra = run(prob, opt);
    RunRecord rb = run(prob, opt);
    if (!ra.error.empty()) return {false, ra.error};
    return {rows_equal_ignoring_wall(ra, rb), "two runs compared"};
  }));

  // 10. CSV round trip preserves the record
  out.push_back(guard("csv-roundtrip", [&]() -> std::pair<bool, std::string> {
    Problem prob = make_quadratic_test(6, seed + 4, 0.3, false);
    RunOptions opt;
    opt.iters = 25;
    opt.log_every = 4;
    opt.seed = seed + 4;
    opt.track_error = true;
    RunRecord rec = run(prob, opt);
    if (!rec.error.empty()) return {false, rec.error};
    const std::string path =
        (std::filesystem::temp_directory_path() / "pffw_verify_roundtrip.csv")
            .string();
    write_csv(rec, path);
    RunRecord back = parse_csv(path);
    std::filesystem::remove(path);
    const bool ok = rows_equal_ignoring_wall(rec, back) &&
                    back.algo == rec.algo && back.seed == rec.seed &&
                    back.iters == rec.iters;
    return {ok, std::to_string(rec.rows.size()) + " rows round-tripped"};
  }));

  // 11. the block-constant clustering fixture is feasible everywhere
  out.push_back(guard("kmeans-fixture-feasible", [&]() -> std::pair<bool, std::string> {
    BlobData blobs = gen_blobs(12, 3, 4, seed + 5);
    Problem prob = make_kmeans(blobs.points, 3, 0.5, seed + 5);
    MatrixXd xbar = kmeans_indicator(blobs.labels, 3);
    VectorXd flat = Eigen::Map<const VectorXd>(xbar.data(), xbar.size());
    const double cons = prob.channel->out_distance(prob.channel->apply(flat));
    const bool in_ball = prob.atoms.contains(flat, 1e-8);
    const Metrics mt = metrics(prob, flat);
    const bool ok = cons < 1e-10 && in_ball && mt.cons_violation < 1e-10;
    return {ok, "channel dist " + fmt(cons)};
  }));

  // 12. counter conventions: one LMO per untrimmed iteration; SZO bills
  // exactly 2m per sample
  out.push_back(guard("counter-conventions", [&]() -> std::pair<bool, std::string> {
    EdgeList g = gen_graph(8, 4, seed + 6);
    Problem prob = make_sparsest_cut(g, 0.3);
    RunOptions opt;
    opt.algo = Algo::MostFw;
    opt.oracle = OracleMode::Szo;
    opt.iters = 30;
    opt.log_every = 30;
    opt.seed = seed + 6;
    RunRecord rec = run(prob, opt);
    if (!rec.error.empty()) return {false, rec.error};
    const auto& last = rec.rows.back();
    const bool ok = last.lmo_calls == last.k &&
                    last.szo_calls == 2ll * prob.dim * last.k;
    return {ok, "szo_calls " + std::to_string(last.szo_calls)};
  }));

  // 13. slope fitting recovers a pure power law
  out.push_back(guard("slope-fit", [&]() -> std::pair<bool, std::string> {
    std::vector<double> ks, vs;
    for (int k = 1; k <= 2000; ++k) {
      ks.push_back(k);
      vs.push_back(std::pow(double(k), -0.5));
    }
    SlopeFit f = fit_loglog_slope(ks, vs, 10, 2000);
    return {std::abs(f.slope + 0.5) <= 1e-9, "slope " + fmt(f.slope)};
  }));

  // 14. momentum recursion matches its unexpanded form on scripted data
  out.push_back(guard("tracker-recursion", [&]() -> std::pair<bool, std::string> {
    Rng rng(mix_seed(seed, 14));
    const Index m = 6;
    TrackerState a;  // rearranged implementation
    VectorXd b_y;    // direct transcription of the boxed recursion
    double worst = 0.0;
    for (int k = 1; k <= 12; ++k) {
      const double gamma = 1.0 / k;
      VectorXd g = random_vec(rng, m), gp = random_vec(rng, m);
      if (k == 1) gp = g;  // same-sample evaluation at x_0 == x_1
      a = momentum_track(std::move(a), gamma, g, gp);
      if (k == 1)
        b_y = g;
      else
        b_y = (1.0 - gamma) * b_y + gamma * g + (1.0 - gamma) * (g - gp);
      worst = std::max(worst, (a.y - b_y).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-12, "max divergence " + fmt(worst)};
  }));

  return out;
}

bool all_passed(const std::vector<VerifyResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace pffw
