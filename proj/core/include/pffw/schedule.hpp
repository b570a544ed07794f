#pragma once

#include "pffw/gradients.hpp"

namespace pffw {

enum class Variant { MostFw, MostFwPlus };

// Problem constants the schedules and diagnostics consume. L bounds the
// per-sample gradient Lipschitz constant (0 for linear objectives), L_G
// bounds ||G||^2, D bounds the atom-set diameter.
struct ProblemConstants {
  double L = 1.0;
  double L_G = 1.0;
  double D = 1.0;
};

struct ScheduleParams {
  Variant variant = Variant::MostFw;
  double mu_c = 1.0;
  double tau0 = 0.0;
  ProblemConstants consts;
};

struct ScheduleValues {
  double gamma;  // tracker weight 1/k
  double eta;    // step size 2/(k+1)
  double mu;     // smoothing mu_c/sqrt(k)  (plus variant: mu_c/(k+1)^{1/4})
  double rho;    // CGE probe radius D/(sqrt(m)(k+1)) in Szo mode, else 0
  double tau;    // trimming threshold tau0/(k+1)^{1/2}  (plus: /(k+1)^{1/4})
};

// All per-iteration scalars in one place. k counts from 1. The smoothing
// sequence satisfies mu_k >= mu_{k-1} (1 - eta_k) for every k >= 2, which
// the solvers assert each step.
ScheduleValues schedule(const ScheduleParams& p, long k, Index m, OracleMode mode);

}  // namespace pffw
