#include "pffw/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "pffw/rng.hpp"

namespace pffw {

SymMat::SymMat(Index n) {
  if (n < 1) throw DimMismatch("SymMat: n must be >= 1");
  a_ = MatrixXd::Zero(n, n);
}

SymMat SymMat::from_dense(const MatrixXd& a) {
  if (a.rows() != a.cols()) throw DimMismatch("SymMat: matrix not square");
  SymMat s(a.rows());
  s.a_ = a;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = j + 1; i < a.rows(); ++i) s.a_(i, j) = s.a_(j, i);
  return s;
}

SymMat SymMat::symmetrized(const MatrixXd& a) {
  if (a.rows() != a.cols()) throw DimMismatch("SymMat: matrix not square");
  MatrixXd b = 0.5 * (a + a.transpose());
  return from_dense(b);
}

SymMat SymMat::from_flat(const VectorXd& x) {
  const auto n = static_cast<Index>(std::llround(std::sqrt(double(x.size()))));
  if (n * n != x.size()) throw DimMismatch("SymMat: flat size is not a square");
  return symmetrized(Eigen::Map<const MatrixXd>(x.data(), n, n));
}

VectorXd SymMat::flat() const {
  return Eigen::Map<const VectorXd>(a_.data(), a_.size());
}

double frob_inner(const SymMat& a, const SymMat& b) {
  return frob_inner(a.mat(), b.mat());
}

double frob_inner(const MatrixXd& a, const MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimMismatch("frob_inner: shape mismatch");
  return a.cwiseProduct(b).sum();
}

namespace {

// Number of eigenvalues of the tridiagonal (alpha, beta) strictly below x,
// by the classic Sturm-sequence recurrence.
int sturm_count_below(const std::vector<double>& alpha,
                      const std::vector<double>& beta, double x) {
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double off = (i == 0) ? 0.0 : beta[i - 1] * beta[i - 1] / d;
    d = alpha[i] - x - off;
    if (d == 0.0) d = -1e-300;  // nudge off an exact eigenvalue
    if (d < 0.0) ++count;
  }
  return count;
}

// Solve (T - sigma I) x = b for a symmetric tridiagonal T, LU with partial
// pivoting (fill produces a second superdiagonal). b is overwritten with x.
// Pivots are floored in magnitude so a near-singular shift (the whole point
// of inverse iteration) stays solvable.
void tridiag_solve_shifted(const std::vector<double>& alpha,
                           const std::vector<double>& beta, double sigma,
                           std::vector<double>& b, double floor_mag) {
  const int m = static_cast<int>(alpha.size());
  std::vector<double> dd(m), du(std::max(m - 1, 0)), du2(std::max(m - 2, 0), 0.0);
  for (int i = 0; i < m; ++i) dd[i] = alpha[i] - sigma;
  for (int i = 0; i + 1 < m; ++i) du[i] = beta[i];

  auto floored = [floor_mag](double v) {
    if (std::abs(v) >= floor_mag) return v;
    return v < 0.0 ? -floor_mag : floor_mag;
  };

  for (int i = 0; i + 1 < m; ++i) {
    const double below = beta[i];  // entry (i+1, i) before elimination
    if (std::abs(dd[i]) >= std::abs(below)) {
      dd[i] = floored(dd[i]);
      const double fact = below / dd[i];
      dd[i + 1] -= fact * du[i];
      if (i + 2 < m) du2[i] = 0.0;
      b[i + 1] -= fact * b[i];
    } else {
      // swap rows i and i+1
      const double fact = dd[i] / below;
      const double old_du_i = du[i];
      const double old_dd_1 = dd[i + 1];
      const double old_du_1 = (i + 1 < m - 1) ? du[i + 1] : 0.0;
      dd[i] = below;
      du[i] = old_dd_1;
      if (i + 2 < m) du2[i] = old_du_1;
      dd[i + 1] = old_du_i - fact * old_dd_1;
      if (i + 1 < m - 1) du[i + 1] = -fact * old_du_1;
      std::swap(b[i], b[i + 1]);
      b[i + 1] -= fact * b[i];
    }
  }

  dd[m - 1] = floored(dd[m - 1]);
  b[m - 1] /= dd[m - 1];
  if (m >= 2) {
    dd[m - 2] = floored(dd[m - 2]);
    b[m - 2] = (b[m - 2] - du[m - 2] * b[m - 1]) / dd[m - 2];
  }
  for (int i = m - 3; i >= 0; --i) {
    dd[i] = floored(dd[i]);
    b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / dd[i];
  }
}

struct TridiagPair {
  double value = 0.0;
  std::vector<double> vec;
};

// Extreme eigenpair of the tridiagonal (alpha, beta): bisection on the Sturm
// count for the eigenvalue, inverse iteration for the eigenvector. O(m) per
// bisection step, so cheap enough to run at every Lanczos iteration.
TridiagPair tridiag_extreme(const std::vector<double>& alpha,
                            const std::vector<double>& beta, Extreme which) {
  const int m = static_cast<int>(alpha.size());
  if (m == 1) return {alpha[0], {1.0}};

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < m; ++i) {
    const double r = (i > 0 ? std::abs(beta[i - 1]) : 0.0) +
                     (i < m - 1 ? std::abs(beta[i]) : 0.0);
    lo = std::min(lo, alpha[i] - r);
    hi = std::max(hi, alpha[i] + r);
  }
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  lo -= 1e-12 * scale;
  hi += 1e-12 * scale;

  for (int it = 0; it < 90 && hi - lo > 1e-15 * scale; ++it) {
    const double mid = 0.5 * (lo + hi);
    const int c = sturm_count_below(alpha, beta, mid);
    const bool go_left = (which == Extreme::Largest) ? (c >= m) : (c >= 1);
    if (go_left)
      hi = mid;
    else
      lo = mid;
  }
  const double theta = 0.5 * (lo + hi);

  TridiagPair out;
  out.value = theta;
  out.vec.assign(m, 1.0 / std::sqrt(double(m)));
  const double floor_mag = 1e-14 * scale;
  for (int sweep = 0; sweep < 3; ++sweep) {
    tridiag_solve_shifted(alpha, beta, theta, out.vec, floor_mag);
    double nrm = 0.0;
    for (double v : out.vec) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
      out.vec.assign(m, 1.0 / std::sqrt(double(m)));
      continue;
    }
    for (double& v : out.vec) v /= nrm;
  }
  return out;
}

void canonical_sign(VectorXd& v) {
  Index imax = 0;
  double amax = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > amax) {
      amax = a;
      imax = i;
    }
  }
  if (v[imax] < 0.0) v = -v;
}

}  // namespace

EigPair extreme_eigpair(const SymMat& a, Extreme which,
                        const LanczosOptions& opts) {
  const MatrixXd& m = a.mat();
  const Index n = a.n();
  if (!m.allFinite()) throw NonFinite("extreme_eigpair: matrix has NaN/Inf");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("extreme_eigpair: tol must be > 0");

  Rng rng(opts.seed);
  auto random_unit = [&]() {
    VectorXd v(n);
    for (Index i = 0; i < n; ++i) v[i] = rng.normal();
    const double nrm = v.norm();
    return nrm > 0.0 ? VectorXd(v / nrm) : VectorXd(VectorXd::Unit(n, 0));
  };

  if (n == 1) {
    EigPair p;
    p.value = m(0, 0);
    p.vector = VectorXd::Ones(1);
    p.converged = true;
    return p;
  }

  const double anorm = m.norm();
  if (anorm == 0.0) {
    // zero matrix: every unit vector is an eigenvector for value 0
    EigPair p;
    p.vector = random_unit();
    canonical_sign(p.vector);
    p.converged = true;
    return p;
  }

  const int max_iter = opts.max_iter > 0 ? opts.max_iter : static_cast<int>(10 * n);
  const double target = opts.tol * anorm;
  const double breakdown = 1e-14 * anorm;

  EigPair best;
  best.vector = VectorXd::Unit(n, 0);
  best.residual = std::numeric_limits<double>::infinity();
  int used = 0;

  while (used < max_iter) {
    std::vector<VectorXd> basis;
    std::vector<double> alpha, beta;
    basis.push_back(random_unit());

    while (used < max_iter) {
      VectorXd w = m * basis.back();
      ++used;
      const double a_j = basis.back().dot(w);
      alpha.push_back(a_j);
      w -= a_j * basis.back();
      if (basis.size() > 1) w -= beta.back() * basis[basis.size() - 2];
      // full reorthogonalization; a second pass mops up rounding
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) w -= q.dot(w) * q;
      const double b_j = w.norm();

      const TridiagPair tp = tridiag_extreme(alpha, beta, which);
      const double est = b_j * std::abs(tp.vec.back());
      const bool subspace_full = static_cast<Index>(basis.size()) == n;

      if (est <= target || b_j <= breakdown || subspace_full ||
          used >= max_iter) {
        VectorXd y = VectorXd::Zero(n);
        for (std::size_t i = 0; i < basis.size(); ++i) y += tp.vec[i] * basis[i];
        const double ynorm = y.norm();
        if (ynorm > 0.0) y /= ynorm;
        VectorXd r = m * y - tp.value * y;
        ++used;
        const double res = r.norm();

        if (res < best.residual) {
          best.value = tp.value;
          best.vector = y;
          best.residual = res;
        }
        if (res <= target) {
          best.converged = true;
          best.iterations = used;
          canonical_sign(best.vector);
          return best;
        }
        if (b_j <= breakdown || subspace_full) break;  // restart fresh
      }

      if (b_j <= breakdown) break;  // safety: do not divide by ~0
      beta.push_back(b_j);
      basis.push_back(w / b_j);
    }
  }

  best.iterations = used;
  canonical_sign(best.vector);
  return best;
}

}  // namespace pffw
