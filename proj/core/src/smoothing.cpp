#include "pffw/smoothing.hpp"

namespace pffw {

namespace {
void check(const SmoothedPenalty& p, const VectorXd& x) {
  if (p.channel == nullptr) throw std::invalid_argument("SmoothedPenalty: null channel");
  if (!(p.mu > 0.0)) throw NonPositiveMu("SmoothedPenalty: mu must be > 0");
  if (x.size() != p.channel->in_dim())
    throw DimMismatch("SmoothedPenalty: input dimension mismatch");
  if (!x.allFinite()) throw NonFinite("SmoothedPenalty: input has NaN/Inf");
}
}  // namespace

double penalty_value(const SmoothedPenalty& p, const VectorXd& x) {
  check(p, x);
  const double d = p.channel->out_distance(p.channel->apply(x));
  return d * d / (2.0 * p.mu);
}

VectorXd penalty_grad(const SmoothedPenalty& p, const VectorXd& x) {
  check(p, x);
  const VectorXd y = p.channel->apply(x);
  const VectorXd residual = y - p.channel->project_out(y);
  return p.channel->apply_adjoint(residual) / p.mu;
}

}  // namespace pffw
