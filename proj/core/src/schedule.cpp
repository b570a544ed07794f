#include "pffw/schedule.hpp"

#include <cmath>

namespace pffw {

ScheduleValues schedule(const ScheduleParams& p, long k, Index m, OracleMode mode) {
  if (k < 1) throw BadK("schedule: k counts from 1");
  if (!(p.mu_c > 0.0)) throw NonPositiveMu("schedule: mu_c must be > 0");
  if (p.tau0 < 0.0) throw std::invalid_argument("schedule: tau0 must be >= 0");
  if (m < 1) throw DimMismatch("schedule: m must be >= 1");

  ScheduleValues v{};
  const double kd = double(k);
  v.gamma = 1.0 / kd;
  v.eta = 2.0 / (kd + 1.0);
  if (p.variant == Variant::MostFw) {
    v.mu = p.mu_c / std::sqrt(kd);
    v.tau = p.tau0 / std::sqrt(kd + 1.0);
  } else {
    v.mu = p.mu_c / std::pow(kd + 1.0, 0.25);
    v.tau = p.tau0 / std::pow(kd + 1.0, 0.25);
  }
  v.rho = (mode == OracleMode::Szo)
              ? p.consts.D / (std::sqrt(double(m)) * (kd + 1.0))
              : 0.0;
  return v;
}

}  // namespace pffw
