#pragma once

#include "pffw/channel.hpp"

namespace pffw {

// Moreau-style smoothing of the indicator of { x : G x in target }:
//   h_mu(x) = dist^2(G x) / (2 mu)
// with gradient (1/mu) G^T (G x - proj(G x)). The gradient is Lipschitz
// with constant spectral_bound / mu.
struct SmoothedPenalty {
  const ConstraintChannel* channel = nullptr;  // non-owning
  double mu = 1.0;
};

double penalty_value(const SmoothedPenalty& p, const VectorXd& x);
VectorXd penalty_grad(const SmoothedPenalty& p, const VectorXd& x);

}  // namespace pffw
