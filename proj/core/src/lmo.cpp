#include "pffw/lmo.hpp"

#include <cmath>

namespace pffw {

AtomSet AtomSet::psd_trace_ball(Index n, double trace_bound) {
  if (n < 1) throw DimMismatch("psd_trace_ball: n must be >= 1");
  if (!(trace_bound > 0.0) || !std::isfinite(trace_bound))
    throw std::invalid_argument("psd_trace_ball: trace bound must be positive");
  AtomSet a;
  a.kind_ = Kind::PsdTraceBall;
  a.side_ = n;
  a.dim_ = n * n;
  a.trace_bound_ = trace_bound;
  return a;
}

AtomSet AtomSet::hypercube(VectorXd lo, VectorXd hi) {
  if (lo.size() != hi.size() || lo.size() < 1)
    throw DimMismatch("hypercube: corner sizes disagree");
  if (!lo.allFinite() || !hi.allFinite()) throw NonFinite("hypercube: NaN/Inf corner");
  if ((hi - lo).minCoeff() < 0.0)
    throw std::invalid_argument("hypercube: hi must dominate lo");
  AtomSet a;
  a.kind_ = Kind::Hypercube;
  a.dim_ = lo.size();
  a.lo_ = std::move(lo);
  a.hi_ = std::move(hi);
  return a;
}

double AtomSet::diameter() const {
  if (kind_ == Kind::PsdTraceBall) return 2.0 * std::sqrt(2.0) * trace_bound_;
  return (hi_ - lo_).norm();
}

bool AtomSet::contains(const VectorXd& x, double tol) const {
  if (x.size() != dim_) throw DimMismatch("AtomSet::contains: bad input size");
  if (kind_ == Kind::Hypercube)
    return (x - lo_).minCoeff() >= -tol && (hi_ - x).minCoeff() >= -tol;
  const SymMat xm = SymMat::from_flat(x);
  if (xm.trace() > trace_bound_ + tol * std::max(1.0, trace_bound_)) return false;
  LanczosOptions lopt;
  lopt.tol = std::max(1e-10, tol * 1e-3);
  const EigPair p = extreme_eigpair(xm, Extreme::Smallest, lopt);
  return p.value >= -tol * std::max(1.0, trace_bound_);
}

VectorXd AtomSet::initial_atom() const {
  if (kind_ == Kind::Hypercube) return lo_;
  MatrixXd z = MatrixXd::Zero(side_, side_);
  z(0, 0) = trace_bound_;
  return Eigen::Map<const VectorXd>(z.data(), dim_);
}

VectorXd lmo(const AtomSet& atoms, const VectorXd& w, const LmoOptions& opts) {
  if (w.size() != atoms.dim()) throw DimMismatch("lmo: direction size mismatch");
  if (!w.allFinite()) throw NonFinite("lmo: direction has NaN/Inf");

  if (atoms.kind() == AtomSet::Kind::Hypercube) {
    VectorXd z(w.size());
    for (Index i = 0; i < w.size(); ++i)
      z[i] = w[i] >= 0.0 ? atoms.lo()[i] : atoms.hi()[i];
    return z;
  }

  // minimize <Z, W> over the trace ball: only the symmetric part of the
  // direction matters, and the minimum is K * min(lambda_min, 0)
  const SymMat dir = SymMat::from_flat(w);
  LanczosOptions lopt;
  lopt.tol = opts.tol;
  lopt.max_iter = opts.max_iter;
  lopt.seed = opts.seed;
  const EigPair p = extreme_eigpair(dir, Extreme::Smallest, lopt);
  if (!p.converged)
    throw EigFailure("lmo: eigensolver missed tolerance (residual " +
                     std::to_string(p.residual) + ")");
  const Index n = atoms.side();
  if (p.value < 0.0) {
    MatrixXd z = (atoms.trace_bound() * p.vector) * p.vector.transpose();
    return Eigen::Map<const VectorXd>(z.data(), n * n);
  }
  return VectorXd::Zero(n * n);
}

TrimState trimmed_lmo(TrimState ts, const AtomSet& atoms, const VectorXd& s,
                      double tau, bool first, const LmoOptions& opts) {
  if (tau < 0.0) throw std::invalid_argument("trimmed_lmo: tau must be >= 0");
  if (s.size() != atoms.dim()) throw DimMismatch("trimmed_lmo: surrogate size mismatch");

  const double gap = first ? 0.0 : (s - ts.v).norm();
  if (first || gap >= tau) {
    ts.z = lmo(atoms, s, opts);
    ts.v = s;
    ts.calls += 1;
    ts.last_gap = 0.0;
    return ts;
  }
  ts.skipped += 1;
  ts.last_gap = gap;
  if (gap >= tau)  // unreachable: the reuse branch requires gap < tau
    throw std::logic_error("trimmed_lmo: drift invariant violated");
  return ts;
}

}  // namespace pffw
