#pragma once

#include "pffw/linalg.hpp"

namespace pffw {

// Feasible regions the linear minimization oracle understands. PsdTraceBall
// is { X >= 0, tr(X) <= K } over flat n^2 vectors; Hypercube is a box over
// plain vectors.
class AtomSet {
 public:
  enum class Kind { PsdTraceBall, Hypercube };

  static AtomSet psd_trace_ball(Index n, double trace_bound);
  static AtomSet hypercube(VectorXd lo, VectorXd hi);

  Kind kind() const { return kind_; }
  Index dim() const { return dim_; }     // flat dimension (n^2 for the ball)
  Index side() const { return side_; }   // matrix side, 0 for boxes
  double trace_bound() const { return trace_bound_; }
  const VectorXd& lo() const { return lo_; }
  const VectorXd& hi() const { return hi_; }

  // Euclidean/Frobenius diameter bound used as the constant D: for the trace
  // ball the conservative 2 sqrt(2) K, for boxes ||hi - lo||.
  double diameter() const;

  // feasibility check; the PSD test runs the iterative eigensolver
  bool contains(const VectorXd& x, double tol) const;

  // deterministic feasible starting atom: K e1 e1^T, resp. the lower corner
  VectorXd initial_atom() const;

  AtomSet() = default;  // empty placeholder; factories build usable sets

 private:
  Kind kind_ = Kind::Hypercube;
  Index dim_ = 0;
  Index side_ = 0;
  double trace_bound_ = 0.0;
  VectorXd lo_, hi_;
};

struct LmoOptions {
  double tol = 1e-9;
  int max_iter = 0;  // 0 -> 10 n
  std::uint64_t seed = 0x7c0ffee5u;
};

// argmin_{z in atoms} <z, w>. For the trace ball this is K v v^T for the
// eigenvector v of the smallest eigenvalue of sym(mat(w)) when that
// eigenvalue is negative, and the zero matrix otherwise (ties at zero go to
// the zero matrix). Throws EigFailure when the eigensolver does not meet
// tolerance within its budget.
VectorXd lmo(const AtomSet& atoms, const VectorXd& w, const LmoOptions& opts = {});

// Bookkeeping for threshold-trimmed LMO calls: the oracle only runs when the
// surrogate has drifted at least tau from the surrogate of the last real
// call, otherwise the cached atom is reused.
struct TrimState {
  VectorXd v;  // surrogate at the last real LMO call
  VectorXd z;  // atom returned by that call
  long calls = 0;
  long skipped = 0;
  double last_gap = 0.0;  // ||s - v|| at the last decision, 0 after a call
};

// One trimmed decision. `first` forces a call (iteration one has no cache).
// Drift at exactly tau calls the oracle. Post-invariant: either this step
// called (and v == s) or ||s - v|| < tau.
TrimState trimmed_lmo(TrimState ts, const AtomSet& atoms, const VectorXd& s,
                      double tau, bool first, const LmoOptions& opts = {});

}  // namespace pffw
