#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "pffw/errors.hpp"

namespace pffw {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Index = Eigen::Index;

// Dense symmetric matrix. Construction mirrors the upper triangle into the
// lower one, so a(i,j) == a(j,i) holds bitwise, not merely up to rounding.
class SymMat {
 public:
  explicit SymMat(Index n);                       // zero matrix, n >= 1
  static SymMat from_dense(const MatrixXd& a);    // upper triangle wins
  static SymMat symmetrized(const MatrixXd& a);   // (a + a^T)/2, then mirror
  static SymMat from_flat(const VectorXd& x);     // n^2 flat vector, symmetrized

  Index n() const { return a_.rows(); }
  const MatrixXd& mat() const { return a_; }
  double operator()(Index i, Index j) const { return a_(i, j); }
  double trace() const { return a_.trace(); }
  VectorXd flat() const;  // column-major n^2 vector

 private:
  MatrixXd a_;
};

double frob_inner(const SymMat& a, const SymMat& b);
double frob_inner(const MatrixXd& a, const MatrixXd& b);

// Flat storage convention: entry (i, j) of an n x n matrix lives at i + j*n.
// For symmetric content the ordering is immaterial.
inline Index flat_index(Index i, Index j, Index n) { return i + j * n; }
inline Eigen::Map<const MatrixXd> mat_view(const VectorXd& x, Index n) {
  if (x.size() != n * n) throw DimMismatch("mat_view: flat size != n^2");
  return Eigen::Map<const MatrixXd>(x.data(), n, n);
}

enum class Extreme { Largest, Smallest };

struct EigPair {
  double value = 0.0;
  VectorXd vector;
  double residual = 0.0;  // ||A v - value v||_2 of the returned pair
  bool converged = false;
  int iterations = 0;  // matrix-vector products spent
};

struct LanczosOptions {
  double tol = 1e-9;  // residual target, relative to ||A||_F
  int max_iter = 0;   // total matvec budget; 0 means 10 n
  std::uint64_t seed = 0x7c0ffee5u;
};

// Extreme eigenpair of a symmetric matrix via Lanczos iteration with full
// reorthogonalization; restarts with a fresh start vector on breakdown.
// The returned eigenvector's largest-magnitude entry is made positive
// (first such entry on ties). When the budget runs out the best pair seen
// is returned with converged == false; callers decide whether that is fatal.
EigPair extreme_eigpair(const SymMat& a, Extreme which,
                        const LanczosOptions& opts = {});

}  // namespace pffw
