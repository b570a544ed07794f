#pragma once

#include <vector>

#include "pffw/linalg.hpp"

namespace pffw {

// Closed convex sets with cheap exact projections. These appear as the
// targets of constraint channels (the set the smoothed penalty measures
// distance to), never as the feasible region of the linear minimization
// oracle itself.
class EasySet {
 public:
  enum class Kind { L1Ball, FixedPoint, NonNegOrthant, Halfspace, Hyperplane, Product };

  static EasySet l1_ball(Index dim, double radius);
  static EasySet fixed_point(VectorXd b);
  static EasySet nonneg_orthant(Index dim);
  static EasySet halfspace(VectorXd a, double b);   // { y : a.y <= b }
  static EasySet hyperplane(VectorXd c, double d);  // { y : c.y == d }
  static EasySet product(std::vector<EasySet> blocks);

  Kind kind() const { return kind_; }
  Index dim() const { return dim_; }
  const std::vector<EasySet>& blocks() const { return blocks_; }

  VectorXd project(const VectorXd& y) const;
  double distance(const VectorXd& y) const;
  bool contains(const VectorXd& y, double tol) const;

  // True when y is within eps of a kink of the projection map. The squared
  // distance is differentiable away from such points; finite-difference
  // probes of the smoothed penalty must skip them.
  bool near_face(const VectorXd& y, double eps) const;

 private:
  EasySet() = default;

  Kind kind_ = Kind::NonNegOrthant;
  Index dim_ = 0;
  double radius_ = 0.0;   // L1Ball
  VectorXd point_;        // FixedPoint
  VectorXd normal_;       // Halfspace / Hyperplane
  double offset_ = 0.0;   // Halfspace / Hyperplane
  std::vector<EasySet> blocks_;  // Product

  void check_input(const VectorXd& y) const;
  // soft-threshold level for points outside the l1 ball
  double l1_threshold(const VectorXd& y) const;
};

}  // namespace pffw
