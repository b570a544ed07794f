#include "pffw/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pffw {

double ChannelRow::apply(const VectorXd& x) const {
  double acc = 0.0;
  for (const auto& [idx, w] : coeffs) {
    if (idx < 0 || idx >= x.size()) throw DimMismatch("ChannelRow: index out of range");
    acc += w * x[idx];
  }
  return acc;
}

double ChannelRow::project_scalar(double y) const {
  switch (rel) {
    case Rel::Eq:
      return rhs;
    case Rel::Ge:
      return std::max(y, rhs);
    case Rel::Le:
      return std::min(y, rhs);
  }
  return y;
}

Index ConstraintChannel::Block::out_dim() const {
  switch (op) {
    case Op::Identity:
      return n;
    case Op::RowSum:
      return n;
    case Op::Rows:
      return static_cast<Index>(rows.size());
  }
  return 0;
}

ConstraintChannel ConstraintChannel::identity(Index m, EasySet target) {
  if (m < 1) throw DimMismatch("channel identity: m must be >= 1");
  if (target.dim() != m) throw DimMismatch("channel identity: target dim != m");
  ConstraintChannel c;
  Block b;
  b.op = Block::Op::Identity;
  b.n = m;
  b.target = std::move(target);
  c.blocks_.push_back(std::move(b));
  c.in_dim_ = m;
  c.finalize(false);
  c.spectral_bound_ = 1.0;  // exact for the identity
  return c;
}

ConstraintChannel ConstraintChannel::row_sum(Index n, EasySet target) {
  if (n < 1) throw DimMismatch("channel row_sum: n must be >= 1");
  if (target.dim() != n) throw DimMismatch("channel row_sum: target dim != n");
  ConstraintChannel c;
  Block b;
  b.op = Block::Op::RowSum;
  b.n = n;
  b.target = std::move(target);
  c.blocks_.push_back(std::move(b));
  c.in_dim_ = n * n;
  c.finalize(false);
  c.spectral_bound_ = double(n);  // G G^T = n I exactly
  return c;
}

ConstraintChannel ConstraintChannel::rows(std::vector<ChannelRow> rows, Index in_dim) {
  if (rows.empty()) throw EmptyStack("channel rows: empty row list");
  if (in_dim < 1) throw DimMismatch("channel rows: in_dim must be >= 1");
  ConstraintChannel c;
  Block b;
  b.op = Block::Op::Rows;
  b.rows = std::move(rows);
  c.blocks_.push_back(std::move(b));
  c.in_dim_ = in_dim;
  c.finalize(true);
  return c;
}

ConstraintChannel ConstraintChannel::stack(std::vector<ConstraintChannel> parts) {
  if (parts.empty()) throw EmptyStack("channel stack: no parts");
  ConstraintChannel c;
  c.in_dim_ = parts.front().in_dim_;
  for (auto& p : parts) {
    if (p.in_dim_ != c.in_dim_) throw DimMismatch("channel stack: input dims differ");
    for (auto& b : p.blocks_) c.blocks_.push_back(std::move(b));
  }
  c.finalize(true);
  return c;
}

void ConstraintChannel::finalize(bool compute_bound) {
  out_dim_ = 0;
  for (const auto& b : blocks_) out_dim_ += b.out_dim();
  if (!compute_bound) return;
  // power iteration on G^T G; inflate a little so the stored value is an
  // upper bound rather than a near-miss from slow ratio convergence
  Rng rng(0x5eed5u);
  VectorXd v(in_dim_);
  for (Index i = 0; i < in_dim_; ++i) v[i] = rng.normal();
  v.normalize();
  double lam = 0.0;
  for (int it = 0; it < 100; ++it) {
    VectorXd w = apply_adjoint(apply(v));
    const double nrm = w.norm();
    if (nrm == 0.0) break;
    lam = v.dot(w);
    v = w / nrm;
  }
  spectral_bound_ = std::max(lam, 0.0) * 1.02 + 1e-12;
}

VectorXd ConstraintChannel::apply(const VectorXd& x) const {
  if (x.size() != in_dim_) throw DimMismatch("channel apply: bad input size");
  VectorXd out(out_dim_);
  Index at = 0;
  for (const auto& b : blocks_) {
    switch (b.op) {
      case Block::Op::Identity:
        out.segment(at, b.n) = x;
        break;
      case Block::Op::RowSum:
        out.segment(at, b.n) = mat_view(x, b.n).rowwise().sum();
        break;
      case Block::Op::Rows:
        for (std::size_t r = 0; r < b.rows.size(); ++r)
          out[at + static_cast<Index>(r)] = b.rows[r].apply(x);
        break;
    }
    at += b.out_dim();
  }
  return out;
}

VectorXd ConstraintChannel::apply_adjoint(const VectorXd& r) const {
  if (r.size() != out_dim_) throw DimMismatch("channel apply_adjoint: bad input size");
  VectorXd out = VectorXd::Zero(in_dim_);
  Index at = 0;
  for (const auto& b : blocks_) {
    switch (b.op) {
      case Block::Op::Identity:
        out += r.segment(at, b.n);
        break;
      case Block::Op::RowSum: {
        // adjoint of X -> X 1 writes r into every column
        Eigen::Map<MatrixXd> view(out.data(), b.n, b.n);
        view.colwise() += r.segment(at, b.n);
        break;
      }
      case Block::Op::Rows:
        for (std::size_t i = 0; i < b.rows.size(); ++i) {
          const double ri = r[at + static_cast<Index>(i)];
          if (ri == 0.0) continue;
          for (const auto& [idx, w] : b.rows[i].coeffs) out[idx] += w * ri;
        }
        break;
    }
    at += b.out_dim();
  }
  return out;
}

VectorXd ConstraintChannel::project_out(const VectorXd& y) const {
  if (y.size() != out_dim_) throw DimMismatch("channel project_out: bad input size");
  VectorXd out(out_dim_);
  Index at = 0;
  for (const auto& b : blocks_) {
    switch (b.op) {
      case Block::Op::Identity:
      case Block::Op::RowSum:
        out.segment(at, b.n) = b.target.project(y.segment(at, b.n));
        break;
      case Block::Op::Rows:
        for (std::size_t r = 0; r < b.rows.size(); ++r) {
          const Index i = at + static_cast<Index>(r);
          out[i] = b.rows[r].project_scalar(y[i]);
        }
        break;
    }
    at += b.out_dim();
  }
  return out;
}

double ConstraintChannel::out_distance(const VectorXd& y) const {
  return (y - project_out(y)).norm();
}

bool ConstraintChannel::out_near_face(const VectorXd& y, double eps) const {
  if (y.size() != out_dim_) throw DimMismatch("channel out_near_face: bad input size");
  Index at = 0;
  for (const auto& b : blocks_) {
    switch (b.op) {
      case Block::Op::Identity:
      case Block::Op::RowSum:
        if (b.target.near_face(y.segment(at, b.n), eps)) return true;
        break;
      case Block::Op::Rows:
        for (std::size_t r = 0; r < b.rows.size(); ++r) {
          const ChannelRow& row = b.rows[r];
          if (row.rel == ChannelRow::Rel::Eq) continue;  // smooth
          if (std::abs(y[at + static_cast<Index>(r)] - row.rhs) <= eps) return true;
        }
        break;
    }
    at += b.out_dim();
  }
  return false;
}

bool ConstraintChannel::samplable() const {
  for (const auto& b : blocks_) {
    switch (b.op) {
      case Block::Op::Rows:
        break;
      case Block::Op::Identity:
      case Block::Op::RowSum: {
        const auto k = b.target.kind();
        if (k != EasySet::Kind::NonNegOrthant && k != EasySet::Kind::FixedPoint)
          return false;  // target does not separate per row
        break;
      }
    }
  }
  return true;
}

Index ConstraintChannel::scalar_row_count() const {
  return out_dim_;
}

ChannelRow ConstraintChannel::extract_row(Index global_row) const {
  Index at = 0;
  for (const auto& b : blocks_) {
    const Index od = b.out_dim();
    if (global_row < at + od) {
      const Index local = global_row - at;
      switch (b.op) {
        case Block::Op::Rows:
          return b.rows[static_cast<std::size_t>(local)];
        case Block::Op::Identity: {
          ChannelRow row;
          row.coeffs = {{local, 1.0}};
          if (b.target.kind() == EasySet::Kind::FixedPoint) {
            row.rel = ChannelRow::Rel::Eq;
            row.rhs = b.target.project(VectorXd::Zero(b.n))[local];
          } else {
            row.rel = ChannelRow::Rel::Ge;
            row.rhs = 0.0;
          }
          return row;
        }
        case Block::Op::RowSum: {
          ChannelRow row;
          row.coeffs.reserve(static_cast<std::size_t>(b.n));
          for (Index j = 0; j < b.n; ++j)
            row.coeffs.emplace_back(flat_index(local, j, b.n), 1.0);
          if (b.target.kind() == EasySet::Kind::FixedPoint) {
            row.rel = ChannelRow::Rel::Eq;
            row.rhs = b.target.project(VectorXd::Zero(b.n))[local];
          } else {
            row.rel = ChannelRow::Rel::Ge;
            row.rhs = 0.0;
          }
          return row;
        }
      }
    }
    at += od;
  }
  throw DimMismatch("channel extract_row: row index out of range");
}

ConstraintChannel ConstraintChannel::sample_rows(double frac, Rng& rng) const {
  if (!(frac > 0.0) || frac > 1.0)
    throw std::invalid_argument("sample_rows: frac must be in (0, 1]");
  if (!samplable())
    throw std::logic_error("sample_rows: channel target does not separate per row");
  const Index total = scalar_row_count();
  const auto want = static_cast<Index>(std::ceil(frac * double(total)));

  // partial Fisher-Yates gives `want` distinct rows; sort them so the
  // sampled channel preserves the stack's row order
  std::vector<Index> idx(static_cast<std::size_t>(total));
  std::iota(idx.begin(), idx.end(), Index{0});
  for (Index i = 0; i < want; ++i) {
    const auto j = static_cast<Index>(rng.uniform_int(i, total - 1));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  std::vector<Index> chosen(idx.begin(), idx.begin() + want);
  std::sort(chosen.begin(), chosen.end());

  std::vector<ChannelRow> out;
  out.reserve(chosen.size());
  for (Index g : chosen) out.push_back(extract_row(g));

  ConstraintChannel c;
  Block b;
  b.op = Block::Op::Rows;
  b.rows = std::move(out);
  c.blocks_.push_back(std::move(b));
  c.in_dim_ = in_dim_;
  c.finalize(false);
  c.spectral_bound_ = spectral_bound_;  // subset of rows cannot exceed the parent
  return c;
}

}  // namespace pffw
