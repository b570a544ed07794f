#include "pffw/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pffw/errors.hpp"
#include "pffw/linalg.hpp"

namespace pffw {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// count distinct indices from [0, total), partial Fisher-Yates, sorted so
// downstream accumulation walks memory in order
std::vector<Index> sample_indices(Index total, Index count, Rng& rng) {
  std::vector<Index> pool(static_cast<std::size_t>(total));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < count; ++i) {
    Index j = i + static_cast<Index>(rng.uniform_int(0, total - 1 - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

Index reveal_count(double frac, Index total) {
  if (!(frac > 0.0 && frac <= 1.0))
    throw ConfigError("sampling fraction must lie in (0, 1]");
  Index c = static_cast<Index>(std::ceil(frac * static_cast<double>(total)));
  return std::min(std::max<Index>(c, 1), total);
}

VectorXd flatten(const MatrixXd& a) {
  return Eigen::Map<const VectorXd>(a.data(), a.size());
}

// the shared generator for sparse-cov: d x rank factor with entries
// uniform on [-1, 1]
MatrixXd draw_psi(Index d, Index rank, std::uint64_t seed) {
  Rng gen(mix_seed(seed, 0x5c0full));
  MatrixXd psi(d, rank);
  for (Index j = 0; j < rank; ++j)
    for (Index i = 0; i < d; ++i) psi(i, j) = gen.uniform(-1.0, 1.0);
  return psi;
}

}  // namespace

Metrics metrics(const Problem& p, const VectorXd& x) {
  if (!p.metric_fn) throw ConfigError("problem '" + p.name + "' has no metrics");
  if (x.size() != p.dim) throw DimMismatch("metrics: iterate dim mismatch");
  return p.metric_fn(x);
}

void set_fstar(Problem& p, double fstar, std::string source) {
  if (!p.fstar_cell) p.fstar_cell = std::make_shared<double>(kNan);
  *p.fstar_cell = fstar;
  p.fstar_source = std::move(source);
}

bool has_fstar(const Problem& p) {
  return p.fstar_cell && std::isfinite(*p.fstar_cell);
}

// --- sparse covariance ---------------------------------------------------

MatrixXd sparse_cov_target(Index d, Index rank, std::uint64_t seed) {
  MatrixXd psi = draw_psi(d, rank, seed);
  return psi * psi.transpose();
}

Problem make_sparse_cov(Index d, Index rank, std::uint64_t seed,
                        bool swap_radii) {
  if (d < 2 || rank < 1) throw DimMismatch("sparse-cov: need d >= 2, rank >= 1");
  auto psi = std::make_shared<MatrixXd>(draw_psi(d, rank, seed));
  auto W = std::make_shared<MatrixXd>((*psi) * psi->transpose());

  const double tr_w = W->trace();
  const double l1_w = W->cwiseAbs().sum();
  // printed assignment: alpha = tr(W), K = ||vec W||_1; the swap gives the
  // conventional pairing where W itself is feasible
  const double alpha = swap_radii ? l1_w : tr_w;
  const double bound = swap_radii ? tr_w : l1_w;

  const Index m = d * d;
  Problem p;
  p.name = "sparse-cov";
  p.side = d;
  p.dim = m;
  p.atoms = AtomSet::psd_trace_ball(d, bound);
  p.channel = ConstraintChannel::identity(m, EasySet::l1_ball(m, alpha));
  p.consts = ProblemConstants{2.0, 1.0, p.atoms.diameter()};
  p.fstar_cell = std::make_shared<double>(kNan);

  auto draw_w = [psi](const Sample& s) {
    Rng r(s.key);
    VectorXd z(psi->cols());
    for (Index i = 0; i < z.size(); ++i) z[i] = r.normal();
    return VectorXd(*psi * z);  // ~ N(0, W)
  };

  p.oracle.mode = OracleMode::Sfo;
  p.oracle.dim = m;
  p.oracle.value = [draw_w, d](const VectorXd& x, const Sample& s) {
    VectorXd w = draw_w(s);
    auto X = mat_view(x, d);
    // ||X - w w^T||_F^2 without forming the outer product
    const double ns = w.squaredNorm();
    return X.squaredNorm() - 2.0 * w.dot(X * w) + ns * ns;
  };
  p.oracle.grad = [draw_w, d](const VectorXd& x, const Sample& s) {
    VectorXd w = draw_w(s);
    MatrixXd g = 2.0 * (mat_view(x, d) - w * w.transpose());
    return flatten(g);
  };

  p.expected_grad = [W, d](const VectorXd& x) {
    MatrixXd g = 2.0 * (mat_view(x, d) - *W);
    return flatten(g);
  };
  p.full_objective = [W, d](const VectorXd& x) {
    return (mat_view(x, d) - *W).squaredNorm();
  };
  p.metric_fn = [W, d, alpha](const VectorXd& x) {
    Metrics out;
    out.obj_proxy = (mat_view(x, d) - *W).squaredNorm() / W->squaredNorm();
    out.cons_violation = std::max(x.lpNorm<1>() - alpha, 0.0) / alpha;
    return out;
  };
  return p;
}

// --- k-means SDP ----------------------------------------------------------

MatrixXd kmeans_indicator(const std::vector<int>& labels, int k_clusters) {
  const Index n = static_cast<Index>(labels.size());
  if (n == 0 || k_clusters < 1) throw DimMismatch("indicator: empty input");
  std::vector<Index> sizes(static_cast<std::size_t>(k_clusters), 0);
  for (int c : labels) {
    if (c < 0 || c >= k_clusters) throw DimMismatch("indicator: label out of range");
    ++sizes[static_cast<std::size_t>(c)];
  }
  MatrixXd x = MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)])
        x(i, j) = 1.0 / static_cast<double>(
                            sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])]);
  return x;
}

Problem make_kmeans(const MatrixXd& points, int k_clusters, double reveal_frac,
                    std::uint64_t seed) {
  const Index n = points.rows();
  if (k_clusters < 1 || n < k_clusters)
    throw DimMismatch("kmeans: need N >= K >= 1");
  (void)seed;  // the per-sample keys drive all randomness here

  auto M = std::make_shared<MatrixXd>(n, n);
  for (Index i = 0; i < n; ++i) {
    (*M)(i, i) = 0.0;
    for (Index j = i + 1; j < n; ++j) {
      const double d2 = (points.row(i) - points.row(j)).squaredNorm();
      (*M)(i, j) = d2;
      (*M)(j, i) = d2;
    }
  }

  const Index m = n * n;
  const Index reveal = reveal_count(reveal_frac, m);

  Problem p;
  p.name = "kmeans";
  p.side = n;
  p.dim = m;
  p.atoms = AtomSet::psd_trace_ball(n, static_cast<double>(k_clusters));
  {
    std::vector<ConstraintChannel> parts;
    parts.push_back(
        ConstraintChannel::row_sum(n, EasySet::fixed_point(VectorXd::Ones(n))));
    parts.push_back(ConstraintChannel::identity(m, EasySet::nonneg_orthant(m)));
    p.channel = ConstraintChannel::stack(std::move(parts));
  }
  p.consts = ProblemConstants{M->cwiseAbs().maxCoeff() / static_cast<double>(m),
                              std::sqrt(p.channel->spectral_bound()),
                              p.atoms.diameter()};
  p.fstar_cell = std::make_shared<double>(kNan);

  p.oracle.mode = OracleMode::Sfo;
  p.oracle.dim = m;
  p.oracle.value = [M, m, reveal](const VectorXd& x, const Sample& s) {
    Rng r(s.key);
    auto idx = sample_indices(m, reveal, r);
    double acc = 0.0;
    for (Index id : idx) acc += M->data()[id] * x[id];
    return acc / static_cast<double>(reveal);
  };
  p.oracle.grad = [M, m, reveal](const VectorXd& x, const Sample& s) {
    (void)x;  // objective is linear; the estimate depends on the draw only
    Rng r(s.key);
    auto idx = sample_indices(m, reveal, r);
    VectorXd g = VectorXd::Zero(m);
    for (Index id : idx) g[id] = M->data()[id] / static_cast<double>(reveal);
    return g;
  };

  auto full = [M, m](const VectorXd& x) {
    return Eigen::Map<const VectorXd>(M->data(), m).dot(x) /
           static_cast<double>(m);
  };
  p.expected_grad = [M, m](const VectorXd&) {
    return VectorXd(Eigen::Map<const VectorXd>(M->data(), m) /
                    static_cast<double>(m));
  };
  p.full_objective = full;
  auto cell = p.fstar_cell;
  p.metric_fn = [full, cell, n](const VectorXd& x) {
    Metrics out;
    const double f = full(x);
    if (cell && std::isfinite(*cell))
      out.obj_proxy = std::abs(f - *cell) / std::max(std::abs(*cell), 1e-12);
    else
      out.obj_proxy = f;
    auto X = mat_view(x, n);
    const double row_gap =
        (X * VectorXd::Ones(n) - VectorXd::Ones(n)).norm() / std::sqrt(double(n));
    const double neg = (X - X.cwiseMax(0.0)).norm();
    out.cons_violation = row_gap + neg;
    return out;
  };
  return p;
}

BlobData gen_blobs(Index n_points, int k_clusters, Index features,
                   std::uint64_t seed) {
  if (n_points < k_clusters || k_clusters < 1 || features < 1)
    throw DimMismatch("gen_blobs: need N >= K >= 1, p >= 1");
  Rng gen(mix_seed(seed, 0xb10bull));
  MatrixXd centers(k_clusters, features);
  for (Index c = 0; c < k_clusters; ++c)
    for (Index j = 0; j < features; ++j) centers(c, j) = 5.0 * gen.normal();

  BlobData out;
  out.points.resize(n_points, features);
  out.labels.resize(static_cast<std::size_t>(n_points));
  for (Index i = 0; i < n_points; ++i) {
    const int c = static_cast<int>(i % k_clusters);  // balanced assignment
    out.labels[static_cast<std::size_t>(i)] = c;
    for (Index j = 0; j < features; ++j)
      out.points(i, j) = centers(c, j) + gen.normal();
  }
  return out;
}

Problem make_kmeans_synthetic(Index n_points, int k_clusters, Index features,
                              double reveal_frac, std::uint64_t seed) {
  BlobData blobs = gen_blobs(n_points, k_clusters, features, seed);
  Problem p = make_kmeans(blobs.points, k_clusters, reveal_frac, seed);
  MatrixXd xbar = kmeans_indicator(blobs.labels, k_clusters);
  set_fstar(p, p.full_objective(flatten(xbar)), "planted clustering");
  return p;
}

// --- uniform sparsest cut --------------------------------------------------

TriangleConvention parse_triangles(const std::string& name) {
  if (name == "ordered") return TriangleConvention::Ordered;
  if (name == "i-less-k" || name == "ilessk") return TriangleConvention::ILessK;
  if (name == "unordered") return TriangleConvention::Unordered;
  throw ConfigError("unknown triangle convention '" + name + "'");
}

long long triangle_row_count(Index d, TriangleConvention conv) {
  const long long full = static_cast<long long>(d) * (d - 1) * (d - 2);
  switch (conv) {
    case TriangleConvention::Ordered: return full;
    case TriangleConvention::ILessK: return full / 2;
    case TriangleConvention::Unordered: return full / 6;
  }
  throw ConfigError("bad triangle convention");
}

MatrixXd graph_laplacian(const EdgeList& graph) {
  const Index d = graph.d;
  if (d < 1) throw DimMismatch("laplacian: empty graph");
  MatrixXd lap = MatrixXd::Zero(d, d);
  for (auto [u, v] : graph.edges) {
    if (u < 0 || v < 0 || u >= d || v >= d)
      throw DimMismatch("laplacian: edge endpoint out of range");
    if (u == v) continue;  // self-loops contribute nothing to D - A
    lap(u, u) += 1.0;
    lap(v, v) += 1.0;
    lap(u, v) -= 1.0;
    lap(v, u) -= 1.0;
  }
  return lap;
}

bool graph_connected(const EdgeList& graph) {
  if (graph.d <= 1) return true;
  std::vector<Index> parent(static_cast<std::size_t>(graph.d));
  std::iota(parent.begin(), parent.end(), Index{0});
  std::function<Index(Index)> find = [&](Index a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  for (auto [u, v] : graph.edges) {
    if (u < 0 || v < 0 || u >= graph.d || v >= graph.d) continue;
    parent[static_cast<std::size_t>(find(u))] = find(v);
  }
  const Index root = find(0);
  for (Index i = 1; i < graph.d; ++i)
    if (find(i) != root) return false;
  return true;
}

Problem make_sparsest_cut(const EdgeList& graph, double batch_frac,
                          TriangleConvention conv, std::uint64_t seed) {
  const Index d = graph.d;
  if (d < 3) throw DimMismatch("sparsest-cut: need d >= 3");
  (void)seed;

  // normalized, deduplicated edge set
  auto edges = std::make_shared<std::vector<std::pair<int, int>>>();
  {
    std::vector<std::pair<int, int>> tmp;
    for (auto [u, v] : graph.edges) {
      if (u == v) continue;
      if (u < 0 || v < 0 || u >= d || v >= d)
        throw DimMismatch("sparsest-cut: edge endpoint out of range");
      tmp.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(tmp.begin(), tmp.end());
    tmp.erase(std::unique(tmp.begin(), tmp.end()), tmp.end());
    if (tmp.empty()) throw DimMismatch("sparsest-cut: graph has no edges");
    *edges = std::move(tmp);
  }

  const Index m = d * d;
  auto lap = std::make_shared<MatrixXd>(graph_laplacian(graph));

  Problem p;
  p.name = "sparsest-cut";
  p.side = d;
  p.dim = m;
  p.atoms = AtomSet::psd_trace_ball(d, static_cast<double>(d));
  p.connected_graph = graph_connected(graph);
  p.fstar_cell = std::make_shared<double>(kNan);

  {
    std::vector<ChannelRow> crows;
    crows.reserve(static_cast<std::size_t>(1 + triangle_row_count(d, conv)));
    // spread equality d tr(X) - 1^T X 1 = d^2 / 2
    ChannelRow spread;
    spread.rel = ChannelRow::Rel::Eq;
    spread.rhs = static_cast<double>(d) * static_cast<double>(d) / 2.0;
    spread.coeffs.reserve(static_cast<std::size_t>(m));
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j)
        spread.coeffs.emplace_back(flat_index(i, j, d),
                                   i == j ? static_cast<double>(d) - 1.0 : -1.0);
    crows.push_back(std::move(spread));

    auto add_triangle = [&](Index i, Index j, Index k) {
      ChannelRow r;
      r.rel = ChannelRow::Rel::Le;
      r.rhs = 0.0;
      r.coeffs = {{flat_index(i, j, d), 1.0},
                  {flat_index(j, k, d), 1.0},
                  {flat_index(i, k, d), -1.0},
                  {flat_index(j, j, d), -1.0}};
      crows.push_back(std::move(r));
    };
    switch (conv) {
      case TriangleConvention::Ordered:
        for (Index i = 0; i < d; ++i)
          for (Index j = 0; j < d; ++j)
            for (Index k = 0; k < d; ++k)
              if (i != j && j != k && i != k) add_triangle(i, j, k);
        break;
      case TriangleConvention::ILessK:
        for (Index i = 0; i < d; ++i)
          for (Index k = i + 1; k < d; ++k)
            for (Index j = 0; j < d; ++j)
              if (j != i && j != k) add_triangle(i, j, k);
        break;
      case TriangleConvention::Unordered:
        for (Index i = 0; i < d; ++i)
          for (Index j = i + 1; j < d; ++j)
            for (Index k = j + 1; k < d; ++k) add_triangle(i, j, k);
        break;
    }
    p.channel = ConstraintChannel::rows(std::move(crows), m);
  }
  p.consts = ProblemConstants{lap->cwiseAbs().maxCoeff() / static_cast<double>(m),
                              std::sqrt(p.channel->spectral_bound()),
                              p.atoms.diameter()};

  const Index ecount = static_cast<Index>(edges->size());
  const Index batch = reveal_count(batch_frac, ecount);
  const double scale =
      static_cast<double>(ecount) /
      (static_cast<double>(batch) * static_cast<double>(d) * static_cast<double>(d));

  p.oracle.mode = OracleMode::Sfo;
  p.oracle.dim = m;
  p.oracle.value = [edges, ecount, batch, scale, d](const VectorXd& x,
                                                    const Sample& s) {
    Rng r(s.key);
    auto idx = sample_indices(ecount, batch, r);
    auto X = mat_view(x, d);
    double acc = 0.0;
    for (Index id : idx) {
      auto [u, v] = (*edges)[static_cast<std::size_t>(id)];
      acc += X(u, u) + X(v, v) - 2.0 * X(u, v);
    }
    return acc * scale;
  };
  p.oracle.grad = [edges, ecount, batch, scale, d, m](const VectorXd&,
                                                      const Sample& s) {
    Rng r(s.key);
    auto idx = sample_indices(ecount, batch, r);
    VectorXd g = VectorXd::Zero(m);
    for (Index id : idx) {
      auto [u, v] = (*edges)[static_cast<std::size_t>(id)];
      g[flat_index(u, u, d)] += scale;
      g[flat_index(v, v, d)] += scale;
      g[flat_index(u, v, d)] -= scale;
      g[flat_index(v, u, d)] -= scale;
    }
    return g;
  };

  p.expected_grad = [lap, m](const VectorXd&) {
    return VectorXd(Eigen::Map<const VectorXd>(lap->data(), m) /
                    static_cast<double>(m));
  };
  p.full_objective = [lap, m](const VectorXd& x) {
    return Eigen::Map<const VectorXd>(lap->data(), m).dot(x) /
           static_cast<double>(m);
  };
  auto chan = std::make_shared<ConstraintChannel>(*p.channel);
  auto full = p.full_objective;
  p.metric_fn = [full, chan](const VectorXd& x) {
    Metrics out;
    out.obj_proxy = full(x);
    out.cons_violation = chan->out_distance(chan->apply(x));
    return out;
  };
  return p;
}

EdgeList gen_graph(Index d, Index extra_chords, std::uint64_t seed) {
  if (d < 3) throw DimMismatch("gen_graph: need d >= 3");
  EdgeList g;
  g.d = d;
  std::vector<std::pair<int, int>> seen;
  auto push = [&](int u, int v) {
    auto e = std::minmax(u, v);
    auto key = std::make_pair(e.first, e.second);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) return false;
    seen.push_back(key);
    g.edges.push_back(key);
    return true;
  };
  for (Index i = 0; i < d; ++i)
    push(static_cast<int>(i), static_cast<int>((i + 1) % d));
  Rng gen(mix_seed(seed, 0xc07dull));
  Index added = 0, attempts = 0;
  const Index cap = 200 * (extra_chords + 1);
  while (added < extra_chords && attempts < cap) {
    ++attempts;
    int u = static_cast<int>(gen.uniform_int(0, d - 1));
    int v = static_cast<int>(gen.uniform_int(0, d - 1));
    if (u == v) continue;
    if (push(u, v)) ++added;
  }
  return g;
}

// --- quadratic fixture ------------------------------------------------------

Problem make_quadratic_test(Index m, std::uint64_t seed, double noise,
                            bool with_channel) {
  if (m < 1) throw DimMismatch("quad: need m >= 1");
  if (noise < 0.0) throw ConfigError("quad: noise must be >= 0");
  Rng gen(mix_seed(seed, 0x9d7aull));
  auto c = std::make_shared<VectorXd>(m);
  for (Index i = 0; i < m; ++i) (*c)[i] = gen.uniform(-1.0, 1.0);

  Problem p;
  p.name = "quad";
  p.side = 0;
  p.dim = m;
  p.atoms = AtomSet::hypercube(VectorXd::Constant(m, -2.0),
                               VectorXd::Constant(m, 2.0));
  if (with_channel)
    p.channel = ConstraintChannel::identity(m, EasySet::nonneg_orthant(m));
  p.consts = ProblemConstants{1.0, 1.0, p.atoms.diameter()};
  p.fstar_cell = std::make_shared<double>(kNan);

  p.oracle.mode = OracleMode::Sfo;
  p.oracle.dim = m;
  p.oracle.value = [c, noise, m](const VectorXd& x, const Sample& s) {
    Rng r(s.key);
    double acc = 0.0;
    for (Index i = 0; i < m; ++i) {
      const double xi = (*c)[i] + noise * r.normal();
      acc += (x[i] - xi) * (x[i] - xi);
    }
    return 0.5 * acc;
  };
  p.oracle.grad = [c, noise, m](const VectorXd& x, const Sample& s) {
    Rng r(s.key);
    VectorXd g(m);
    for (Index i = 0; i < m; ++i) g[i] = x[i] - ((*c)[i] + noise * r.normal());
    return g;
  };

  p.expected_grad = [c](const VectorXd& x) { return VectorXd(x - *c); };
  p.full_objective = [c, noise, m](const VectorXd& x) {
    return 0.5 * (x - *c).squaredNorm() +
           0.5 * noise * noise * static_cast<double>(m);
  };
  auto chan_copy = p.channel
                       ? std::make_shared<ConstraintChannel>(*p.channel)
                       : std::shared_ptr<ConstraintChannel>();
  p.metric_fn = [c, chan_copy](const VectorXd& x) {
    Metrics out;
    // c is interior to the box, so this is the true optimality gap of the
    // unpenalized problem
    out.obj_proxy = 0.5 * (x - *c).squaredNorm();
    out.cons_violation =
        chan_copy ? chan_copy->out_distance(chan_copy->apply(x)) : 0.0;
    return out;
  };
  return p;
}

// --- file plumbing ----------------------------------------------------------

EdgeList load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open edge list '" + path + "'");
  std::vector<std::pair<long, long>> raw;
  std::string line;
  long line_no = 0;
  long min_id = std::numeric_limits<long>::max(), max_id = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t at = line.find_first_not_of(" \t");
    if (at == std::string::npos) continue;
    if (line[at] == '%' || line[at] == '#') continue;
    std::istringstream ls(line);
    long u, v;
    if (!(ls >> u >> v))
      throw ParseError("edge list '" + path + "' line " +
                       std::to_string(line_no) + ": expected two vertex ids");
    if (u < 0 || v < 0)
      throw ParseError("edge list '" + path + "' line " +
                       std::to_string(line_no) + ": negative vertex id");
    raw.emplace_back(u, v);
    min_id = std::min({min_id, u, v});
    max_id = std::max({max_id, u, v});
  }
  if (raw.empty()) throw ParseError("edge list '" + path + "' has no edges");
  const long shift = min_id >= 1 ? 1 : 0;  // auto-detect 1-indexed exports
  EdgeList g;
  g.d = static_cast<Index>(max_id - shift + 1);
  std::vector<std::pair<int, int>> tmp;
  for (auto [u, v] : raw) {
    if (u == v) continue;
    int a = static_cast<int>(u - shift), b = static_cast<int>(v - shift);
    tmp.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(tmp.begin(), tmp.end());
  tmp.erase(std::unique(tmp.begin(), tmp.end()), tmp.end());
  g.edges = std::move(tmp);
  return g;
}

void write_edge_list(const EdgeList& graph, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write edge list '" + path + "'");
  out << "# " << graph.d << " vertices, " << graph.edges.size()
      << " edges, 0-indexed\n";
  for (auto [u, v] : graph.edges) out << u << " " << v << "\n";
  if (!out) throw ParseError("short write on '" + path + "'");
}

MatrixXd load_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open points file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t at = line.find_first_not_of(" \t");
    if (at == std::string::npos) continue;
    if (line[at] == '#' || line[at] == '%') continue;
    for (char& ch : line)
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      const double val = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        throw ParseError("points file '" + path + "' line " +
                         std::to_string(line_no) + ": bad number '" + tok + "'");
      row.push_back(val);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("points file '" + path + "' line " +
                       std::to_string(line_no) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("points file '" + path + "' is empty");
  MatrixXd pts(static_cast<Index>(rows.size()),
               static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < pts.rows(); ++i)
    for (Index j = 0; j < pts.cols(); ++j)
      pts(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return pts;
}

void write_points_csv(const MatrixXd& pts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write points file '" + path + "'");
  char buf[64];
  for (Index i = 0; i < pts.rows(); ++i) {
    for (Index j = 0; j < pts.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", pts(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
  if (!out) throw ParseError("short write on '" + path + "'");
}

MatrixXd load_idx_images(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open idx file '" + path + "'");
  unsigned char magic[4];
  if (!in.read(reinterpret_cast<char*>(magic), 4))
    throw ParseError("idx file '" + path + "': truncated magic");
  if (magic[0] != 0 || magic[1] != 0)
    throw ParseError("idx file '" + path + "': bad magic");
  if (magic[2] != 0x08)
    throw ParseError("idx file '" + path + "': only unsigned-byte payloads");
  const int ndims = magic[3];
  if (ndims < 1 || ndims > 4)
    throw ParseError("idx file '" + path + "': unsupported rank");
  std::vector<std::uint32_t> dims(static_cast<std::size_t>(ndims));
  for (auto& dval : dims) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
      throw ParseError("idx file '" + path + "': truncated dims");
    dval = (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
  }
  std::uint64_t total = 1;
  for (auto dval : dims) total *= dval;
  if (total == 0) throw ParseError("idx file '" + path + "': empty payload");
  std::vector<unsigned char> payload(total);
  if (!in.read(reinterpret_cast<char*>(payload.data()),
               static_cast<std::streamsize>(total)))
    throw ParseError("idx file '" + path + "': truncated payload");

  const Index items = ndims == 1 ? 1 : static_cast<Index>(dims[0]);
  const Index width = static_cast<Index>(total / static_cast<std::uint64_t>(items));
  MatrixXd out(items, width);
  for (Index i = 0; i < items; ++i)
    for (Index j = 0; j < width; ++j)
      out(i, j) = static_cast<double>(payload[static_cast<std::size_t>(i * width + j)]);
  return out;
}

MatrixXd pca_reduce(const MatrixXd& rows, Index p) {
  const Index n = rows.rows(), q = rows.cols();
  if (p < 1 || p > q) throw DimMismatch("pca: need 1 <= p <= columns");
  VectorXd mean = rows.colwise().mean();
  MatrixXd centered = rows.rowwise() - mean.transpose();
  MatrixXd cov = centered.transpose() * centered /
                 std::max<double>(1.0, static_cast<double>(n - 1));
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw EigFailure("pca: eigensolver failed");
  MatrixXd basis(q, p);
  for (Index j = 0; j < p; ++j) {
    VectorXd v = eig.eigenvectors().col(q - 1 - j);  // descending variance
    Index big = 0;
    for (Index i = 1; i < q; ++i)
      if (std::abs(v[i]) > std::abs(v[big])) big = i;
    if (v[big] < 0.0) v = -v;
    basis.col(j) = v;
  }
  return centered * basis;
}

}  // namespace pffw
