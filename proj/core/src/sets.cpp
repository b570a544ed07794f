#include "pffw/sets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pffw {

EasySet EasySet::l1_ball(Index dim, double radius) {
  if (dim < 1) throw DimMismatch("l1_ball: dim must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("l1_ball: radius must be positive and finite");
  EasySet s;
  s.kind_ = Kind::L1Ball;
  s.dim_ = dim;
  s.radius_ = radius;
  return s;
}

EasySet EasySet::fixed_point(VectorXd b) {
  if (b.size() < 1) throw DimMismatch("fixed_point: empty point");
  if (!b.allFinite()) throw NonFinite("fixed_point: point has NaN/Inf");
  EasySet s;
  s.kind_ = Kind::FixedPoint;
  s.dim_ = b.size();
  s.point_ = std::move(b);
  return s;
}

EasySet EasySet::nonneg_orthant(Index dim) {
  if (dim < 1) throw DimMismatch("nonneg_orthant: dim must be >= 1");
  EasySet s;
  s.kind_ = Kind::NonNegOrthant;
  s.dim_ = dim;
  return s;
}

EasySet EasySet::halfspace(VectorXd a, double b) {
  if (a.size() < 1) throw DimMismatch("halfspace: empty normal");
  if (!a.allFinite() || !std::isfinite(b)) throw NonFinite("halfspace: NaN/Inf data");
  if (a.norm() == 0.0) throw std::invalid_argument("halfspace: zero normal");
  EasySet s;
  s.kind_ = Kind::Halfspace;
  s.dim_ = a.size();
  s.normal_ = std::move(a);
  s.offset_ = b;
  return s;
}

EasySet EasySet::hyperplane(VectorXd c, double d) {
  if (c.size() < 1) throw DimMismatch("hyperplane: empty normal");
  if (!c.allFinite() || !std::isfinite(d)) throw NonFinite("hyperplane: NaN/Inf data");
  if (c.norm() == 0.0) throw std::invalid_argument("hyperplane: zero normal");
  EasySet s;
  s.kind_ = Kind::Hyperplane;
  s.dim_ = c.size();
  s.normal_ = std::move(c);
  s.offset_ = d;
  return s;
}

EasySet EasySet::product(std::vector<EasySet> blocks) {
  if (blocks.empty()) throw EmptyStack("product: no blocks");
  EasySet s;
  s.kind_ = Kind::Product;
  s.dim_ = 0;
  for (const auto& b : blocks) s.dim_ += b.dim();
  s.blocks_ = std::move(blocks);
  return s;
}

void EasySet::check_input(const VectorXd& y) const {
  if (y.size() != dim_) throw DimMismatch("EasySet: input dimension mismatch");
  if (!y.allFinite()) throw NonFinite("EasySet: input has NaN/Inf");
}

double EasySet::l1_threshold(const VectorXd& y) const {
  // sort |y| descending, find the largest active-set size consistent with
  // the soft-threshold KKT conditions
  std::vector<double> u(y.size());
  for (Index i = 0; i < y.size(); ++i) u[i] = std::abs(y[i]);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double cand = (cum - radius_) / double(j + 1);
    if (u[j] - cand > 0.0)
      theta = cand;
    else
      break;
  }
  return std::max(theta, 0.0);
}

VectorXd EasySet::project(const VectorXd& y) const {
  check_input(y);
  switch (kind_) {
    case Kind::L1Ball: {
      if (y.lpNorm<1>() <= radius_) return y;
      const double theta = l1_threshold(y);
      VectorXd out(y.size());
      for (Index i = 0; i < y.size(); ++i) {
        const double mag = std::abs(y[i]) - theta;
        out[i] = mag > 0.0 ? (y[i] > 0.0 ? mag : -mag) : 0.0;
      }
      return out;
    }
    case Kind::FixedPoint:
      return point_;
    case Kind::NonNegOrthant:
      return y.cwiseMax(0.0);
    case Kind::Halfspace: {
      const double viol = normal_.dot(y) - offset_;
      if (viol <= 0.0) return y;
      return y - (viol / normal_.squaredNorm()) * normal_;
    }
    case Kind::Hyperplane: {
      const double gap = normal_.dot(y) - offset_;
      return y - (gap / normal_.squaredNorm()) * normal_;
    }
    case Kind::Product: {
      VectorXd out(dim_);
      Index at = 0;
      for (const auto& b : blocks_) {
        out.segment(at, b.dim()) = b.project(y.segment(at, b.dim()));
        at += b.dim();
      }
      return out;
    }
  }
  throw std::logic_error("EasySet: unreachable kind");
}

double EasySet::distance(const VectorXd& y) const {
  check_input(y);
  switch (kind_) {
    case Kind::FixedPoint:
      return (y - point_).norm();
    case Kind::NonNegOrthant:
      return y.cwiseMin(0.0).norm();
    case Kind::Halfspace:
      return std::max(0.0, normal_.dot(y) - offset_) / normal_.norm();
    case Kind::Hyperplane:
      return std::abs(normal_.dot(y) - offset_) / normal_.norm();
    case Kind::L1Ball:
      return (y - project(y)).norm();
    case Kind::Product: {
      double acc = 0.0;
      Index at = 0;
      for (const auto& b : blocks_) {
        const double d = b.distance(y.segment(at, b.dim()));
        acc += d * d;
        at += b.dim();
      }
      return std::sqrt(acc);
    }
  }
  throw std::logic_error("EasySet: unreachable kind");
}

bool EasySet::contains(const VectorXd& y, double tol) const {
  return distance(y) <= tol;
}

bool EasySet::near_face(const VectorXd& y, double eps) const {
  check_input(y);
  switch (kind_) {
    case Kind::FixedPoint:
      return false;  // distance^2 is a smooth quadratic everywhere
    case Kind::Hyperplane:
      return false;  // likewise
    case Kind::NonNegOrthant:
      for (Index i = 0; i < y.size(); ++i)
        if (std::abs(y[i]) <= eps) return true;
      return false;
    case Kind::Halfspace:
      return std::abs(normal_.dot(y) - offset_) / normal_.norm() <= eps;
    case Kind::L1Ball: {
      if (std::abs(y.lpNorm<1>() - radius_) <= eps * std::max(1.0, radius_))
        return true;
      if (y.lpNorm<1>() <= radius_) return false;
      const double theta = l1_threshold(y);
      for (Index i = 0; i < y.size(); ++i)
        if (std::abs(std::abs(y[i]) - theta) <= eps) return true;
      return false;
    }
    case Kind::Product: {
      Index at = 0;
      for (const auto& b : blocks_) {
        if (b.near_face(y.segment(at, b.dim()), eps)) return true;
        at += b.dim();
      }
      return false;
    }
  }
  throw std::logic_error("EasySet: unreachable kind");
}

}  // namespace pffw
