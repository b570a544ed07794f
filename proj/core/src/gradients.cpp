#include "pffw/gradients.hpp"

#include <cmath>

namespace pffw {

namespace {
void check_oracle(const SampleOracle& o, const VectorXd& x) {
  if (o.dim < 1) throw DimMismatch("SampleOracle: dim must be >= 1");
  if (x.size() != o.dim) throw DimMismatch("SampleOracle: input dimension mismatch");
  if (!x.allFinite()) throw NonFinite("SampleOracle: input has NaN/Inf");
}
}  // namespace

VectorXd cge(const SampleOracle& o, const VectorXd& x, double rho, const Sample& s) {
  check_oracle(o, x);
  if (!(rho > 0.0)) throw NonPositiveRho("cge: rho must be > 0");
  if (!o.value) throw std::invalid_argument("cge: oracle has no value function");

  VectorXd probe = x;
  VectorXd g(o.dim);
  for (Index i = 0; i < o.dim; ++i) {
    const double xi = probe[i];
    probe[i] = xi + rho;
    const double fp = o.value(probe, s);
    probe[i] = xi - rho;
    const double fm = o.value(probe, s);
    probe[i] = xi;  // restore bitwise
    g[i] = (fp - fm) / (2.0 * rho);
  }
  o.counters->value_calls += 2 * o.dim;
  if (!g.allFinite()) throw NonFinite("cge: estimator produced NaN/Inf");
  return g;
}

VectorXd stoch_grad(const SampleOracle& o, const VectorXd& x, double rho,
                    const std::vector<Sample>& batch) {
  check_oracle(o, x);
  if (batch.empty()) throw std::invalid_argument("stoch_grad: empty batch");

  VectorXd acc = VectorXd::Zero(o.dim);
  if (o.mode == OracleMode::Sfo) {
    if (!o.grad) throw std::invalid_argument("stoch_grad: oracle has no grad function");
    for (const Sample& s : batch) {
      VectorXd g = o.grad(x, s);
      if (g.size() != o.dim) throw DimMismatch("stoch_grad: sample gradient size");
      acc += g;
    }
    o.counters->grad_calls += static_cast<long long>(batch.size());
  } else {
    for (const Sample& s : batch) acc += cge(o, x, rho, s);
  }
  acc /= double(batch.size());
  if (!acc.allFinite()) throw NonFinite("stoch_grad: gradient has NaN/Inf");
  return acc;
}

PairedGrad paired_stoch_grad(const SampleOracle& o, const VectorXd& x,
                             const VectorXd& prev, double rho,
                             const std::vector<Sample>& batch) {
  PairedGrad pg;
  pg.at_x = stoch_grad(o, x, rho, batch);
  pg.at_prev = stoch_grad(o, prev, rho, batch);
  return pg;
}

TrackerState momentum_track(TrackerState ts, double gamma,
                            const VectorXd& g_at_x, const VectorXd& g_at_prev) {
  if (!(gamma > 0.0) || gamma > 1.0)
    throw GammaOutOfRange("momentum_track: gamma must be in (0, 1]");
  if (g_at_x.size() != g_at_prev.size() ||
      (ts.y.size() != 0 && ts.y.size() != g_at_x.size()))
    throw DimMismatch("momentum_track: gradient sizes disagree");
  if (ts.y.size() == 0) ts.y = VectorXd::Zero(g_at_x.size());
  // with gamma == 1 the history is dropped exactly, whatever y held
  if (gamma == 1.0) {
    ts.y = g_at_x;
    return ts;
  }
  ts.y = g_at_x + (1.0 - gamma) * (ts.y - g_at_prev);
  if (!ts.y.allFinite()) throw NonFinite("momentum_track: tracker has NaN/Inf");
  return ts;
}

TrackerState classic_track(TrackerState ts, double gamma, const VectorXd& g_at_x) {
  if (gamma < 0.0 || gamma > 1.0)
    throw GammaOutOfRange("classic_track: gamma must be in [0, 1]");
  if (ts.y.size() != 0 && ts.y.size() != g_at_x.size())
    throw DimMismatch("classic_track: gradient sizes disagree");
  if (ts.y.size() == 0) ts.y = VectorXd::Zero(g_at_x.size());
  ts.y = (1.0 - gamma) * ts.y + gamma * g_at_x;
  if (!ts.y.allFinite()) throw NonFinite("classic_track: tracker has NaN/Inf");
  return ts;
}

VectorXd composite_sample_grad(const SampleOracle& o, const SmoothedPenalty& pen,
                               const VectorXd& x, double rho, const Sample& s) {
  VectorXd g;
  if (o.mode == OracleMode::Sfo) {
    if (!o.grad) throw std::invalid_argument("composite_sample_grad: no grad function");
    check_oracle(o, x);
    g = o.grad(x, s);
    o.counters->grad_calls += 1;
  } else {
    g = cge(o, x, rho, s);
  }
  return g + penalty_grad(pen, x);
}

}  // namespace pffw
