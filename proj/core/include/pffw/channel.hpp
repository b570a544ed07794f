#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pffw/rng.hpp"
#include "pffw/sets.hpp"

namespace pffw {

// One scalar row of a flattened channel: a sparse linear functional on the
// flat iterate plus a one-dimensional target.
struct ChannelRow {
  enum class Rel { Eq, Ge, Le };

  std::vector<std::pair<Index, double>> coeffs;  // (flat index, weight)
  Rel rel = Rel::Eq;
  double rhs = 0.0;

  double apply(const VectorXd& x) const;
  double project_scalar(double y) const;  // nearest point of the 1-D target
};

// A linear map G together with the easy set its output must land in. A
// channel is a stack of blocks; each block is either a structured operator
// (identity on the flat vector, or the row-sum map X -> X 1) with an easy
// target, or an explicit list of scalar rows. Constraint subsampling
// flattens the stack into scalar rows and draws a subset of them.
class ConstraintChannel {
 public:
  static ConstraintChannel identity(Index m, EasySet target);
  static ConstraintChannel row_sum(Index n, EasySet target);  // vec(X) -> X 1
  static ConstraintChannel rows(std::vector<ChannelRow> rows, Index in_dim);
  static ConstraintChannel stack(std::vector<ConstraintChannel> parts);

  Index in_dim() const { return in_dim_; }
  Index out_dim() const { return out_dim_; }

  VectorXd apply(const VectorXd& x) const;          // G x
  VectorXd apply_adjoint(const VectorXd& r) const;  // G^T r
  VectorXd project_out(const VectorXd& y) const;    // projection onto the target
  double out_distance(const VectorXd& y) const;     // distance of y to the target
  bool out_near_face(const VectorXd& y, double eps) const;

  // upper bound on ||G||^2 (power iteration on G^T G at build time, exact
  // for the structured blocks); this is the constant the smoothed-penalty
  // gradient Lipschitz bound uses
  double spectral_bound() const { return spectral_bound_; }

  // scalar-row view; available when every block's target separates per row
  bool samplable() const;
  Index scalar_row_count() const;
  // draws ceil(frac * rows) distinct rows, uniformly, in stable row order
  ConstraintChannel sample_rows(double frac, Rng& rng) const;

 private:
  struct Block {
    enum class Op { Identity, RowSum, Rows };
    Op op = Op::Rows;
    Index n = 0;  // matrix side for RowSum, vector length for Identity
    EasySet target = EasySet::nonneg_orthant(1);
    std::vector<ChannelRow> rows;
    Index out_dim() const;
  };

  ConstraintChannel() = default;
  void finalize(bool compute_bound);
  ChannelRow extract_row(Index global_row) const;

  std::vector<Block> blocks_;
  Index in_dim_ = 0;
  Index out_dim_ = 0;
  double spectral_bound_ = 1.0;
};

}  // namespace pffw
