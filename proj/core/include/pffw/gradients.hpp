#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "pffw/rng.hpp"
#include "pffw/smoothing.hpp"

namespace pffw {

enum class OracleMode { Sfo, Szo };

// Raw oracle-call instrumentation, shared by copies of the same oracle.
struct OracleCounters {
  long long value_calls = 0;
  long long grad_calls = 0;
};

// Per-sample objective oracle. `value` must be available in both modes;
// `grad` is consulted only in Sfo mode. Evaluation at a fixed (x, sample)
// pair is deterministic: problems regenerate their randomness from the
// sample key.
struct SampleOracle {
  OracleMode mode = OracleMode::Sfo;
  Index dim = 0;
  std::function<double(const VectorXd&, const Sample&)> value;
  std::function<VectorXd(const VectorXd&, const Sample&)> grad;
  std::shared_ptr<OracleCounters> counters = std::make_shared<OracleCounters>();
};

// Coordinate-wise gradient estimator: central differences along all m basis
// directions, costing exactly 2m value calls (recorded in the counters).
// For an f with L-Lipschitz per-sample gradient the bias is at most
// sqrt(m) * L * rho; for quadratics it vanishes.
VectorXd cge(const SampleOracle& o, const VectorXd& x, double rho, const Sample& s);

// Minibatch stochastic gradient: per-sample gradients (Sfo) or CGE estimates
// (Szo) averaged over the batch.
VectorXd stoch_grad(const SampleOracle& o, const VectorXd& x, double rho,
                    const std::vector<Sample>& batch);

// The same minibatch evaluated at two points. The momentum tracker's
// correction term is only meaningful when both gradients share one sample
// draw, so the paired evaluation takes the batch exactly once.
struct PairedGrad {
  VectorXd at_x;
  VectorXd at_prev;
};
PairedGrad paired_stoch_grad(const SampleOracle& o, const VectorXd& x,
                             const VectorXd& prev, double rho,
                             const std::vector<Sample>& batch);

struct TrackerState {
  VectorXd y;       // current gradient estimate
  VectorXd prev_x;  // the point y was formed at
};

// Momentum-corrected tracker update. Computes
//   y <- g_at_x + (1 - gamma) (y_old - g_at_prev)
// which is algebraically the recursion
//   y <- (1-gamma) y_old + gamma g_at_x + (1-gamma)(g_at_x - g_at_prev).
// Requires 0 < gamma <= 1; callers must have evaluated both gradients under
// the same sample draw.
TrackerState momentum_track(TrackerState ts, double gamma,
                            const VectorXd& g_at_x, const VectorXd& g_at_prev);

// Plain exponential averaging: y <- (1-gamma) y_old + gamma g. 0 <= gamma <= 1.
TrackerState classic_track(TrackerState ts, double gamma, const VectorXd& g_at_x);

// One-sample composite gradient: objective sample gradient plus the smoothed
// penalty gradient of a (possibly subsampled) channel.
VectorXd composite_sample_grad(const SampleOracle& o, const SmoothedPenalty& pen,
                               const VectorXd& x, double rho, const Sample& s);

}  // namespace pffw
