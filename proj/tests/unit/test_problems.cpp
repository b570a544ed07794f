#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pffw/problems.hpp"

using namespace pffw;

namespace {

VectorXd vec_of(const MatrixXd& a) {
  return Eigen::Map<const VectorXd>(a.data(), a.size());
}

std::string tmp_path(const std::string& stem) {
  return std::string("pffw_test_") + stem;
}

}  // namespace

TEST_SUITE_BEGIN("problems");

// --- sparse covariance ------------------------------------------------

TEST_CASE("sparse-cov target is the PSD low-rank factor product") {
  MatrixXd w = sparse_cov_target(8, 3, 42);
  CHECK((w - w.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(w);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
  int positive = 0;
  for (Index i = 0; i < 8; ++i)
    if (eig.eigenvalues()[i] > 1e-8) ++positive;
  CHECK(positive == 3);
  // same (d, rank, seed) on the problem side sees the same target
  Problem p = make_sparse_cov(8, 3, 42);
  CHECK(p.full_objective(vec_of(w)) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("sparse-cov default radius pairing is alpha=tr W, K=l1 of W") {
  const Index d = 6;
  MatrixXd w = sparse_cov_target(d, 2, 7);
  const double tr_w = w.trace();
  const double l1_w = w.cwiseAbs().sum();

  Problem p = make_sparse_cov(d, 2, 7);
  CHECK(p.atoms.trace_bound() == doctest::Approx(l1_w).epsilon(1e-12));

  // probe the l1 radius: projecting a far-outside point through the channel
  // lands on the l1 sphere
  REQUIRE(p.channel.has_value());
  VectorXd big = VectorXd::Constant(d * d, 1000.0);
  VectorXd proj = p.channel->project_out(p.channel->apply(big));
  CHECK(proj.lpNorm<1>() == doctest::Approx(tr_w).epsilon(1e-9));
}

TEST_CASE("sparse-cov metrics at the target matrix") {
  const Index d = 6;
  MatrixXd w = sparse_cov_target(d, 2, 3);
  const double tr_w = w.trace();
  const double l1_w = w.cwiseAbs().sum();

  Problem p = make_sparse_cov(d, 2, 3);
  Metrics mt = metrics(p, vec_of(w));
  CHECK(mt.obj_proxy == 0.0);
  // default pairing: alpha = tr W < ||vec W||_1, so W itself violates the
  // l1 budget by exactly the off-diagonal mass
  CHECK(mt.cons_violation == doctest::Approx((l1_w - tr_w) / tr_w).epsilon(1e-12));

  Problem q = make_sparse_cov(d, 2, 3, true);  // swapped: W is feasible
  Metrics ms = metrics(q, vec_of(w));
  CHECK(ms.obj_proxy == 0.0);
  CHECK(ms.cons_violation == 0.0);
  CHECK(q.atoms.trace_bound() == doctest::Approx(tr_w).epsilon(1e-12));
}

TEST_CASE("sparse-cov sample gradients are unbiased for the expected one") {
  const Index d = 6;
  Problem p = make_sparse_cov(d, 2, 11);
  Rng rng(17);
  VectorXd x = oracles::rand_vec(rng, d * d);
  VectorXd want = p.expected_grad(x);

  const int n = 20000;
  VectorXd mean = VectorXd::Zero(d * d);
  VectorXd m2 = VectorXd::Zero(d * d);
  SampleStream stream(905);
  for (int i = 0; i < n; ++i) {
    VectorXd g = p.oracle.grad(x, stream.next());
    mean += g;
    m2 += g.cwiseProduct(g);
  }
  mean /= double(n);
  VectorXd var = m2 / double(n) - mean.cwiseProduct(mean);
  const double se_norm = std::sqrt(var.cwiseMax(0.0).sum() / double(n));
  CHECK((mean - want).norm() <= 5.0 * se_norm);
}

TEST_CASE("sparse-cov value and grad agree through central differences") {
  // per-sample objective is quadratic in x, so the central difference is
  // exact up to rounding, for any step
  const Index d = 5;
  Problem p = make_sparse_cov(d, 2, 13);
  Rng rng(3);
  VectorXd x = oracles::rand_vec(rng, d * d);
  SampleStream stream(19);
  for (int rep = 0; rep < 3; ++rep) {
    Sample s = stream.next();
    VectorXd g = p.oracle.grad(x, s);
    const double h = 1e-3;
    for (Index i = 0; i < d * d; i += 7) {
      VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (p.oracle.value(xp, s) - p.oracle.value(xm, s)) / (2.0 * h);
      CHECK(fd == doctest::Approx(g[i]).epsilon(1e-7));
    }
  }
}

TEST_CASE("sparse-cov constants carry the documented smoothness pair") {
  Problem p = make_sparse_cov(5, 2, 1);
  CHECK(p.consts.L == 2.0);
  CHECK(p.consts.L_G == 1.0);
  CHECK(p.consts.D == p.atoms.diameter());
}

// --- k-means SDP -------------------------------------------------------

TEST_CASE("kmeans cost matrix holds squared pairwise distances") {
  MatrixXd pts(2, 1);
  pts << 0.0, 2.0;
  Problem p = make_kmeans(pts, 1, 1.0, 0);
  // expected grad is vec(M) / N^2 and M = [[0,4],[4,0]]
  VectorXd g = p.expected_grad(VectorXd::Zero(4));
  CHECK(g[0] == 0.0);
  CHECK(g[1] == doctest::Approx(1.0));  // 4 / N^2
  CHECK(g[2] == doctest::Approx(1.0));
  CHECK(g[3] == 0.0);
}

TEST_CASE("planted indicator is feasible and optimal for the synthetic blobs") {
  const Index n = 9;
  const int k = 3;
  BlobData blobs = gen_blobs(n, k, 4, 21);
  MatrixXd xbar = kmeans_indicator(blobs.labels, k);

  CHECK((xbar * VectorXd::Ones(n) - VectorXd::Ones(n)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(xbar.minCoeff() >= 0.0);
  CHECK(xbar.trace() == doctest::Approx(double(k)).epsilon(1e-12));
  CHECK(oracles::dense_extreme_eig(xbar, true).value >= -1e-10);

  Problem p = make_kmeans_synthetic(n, k, 4, 0.5, 21);
  CHECK(has_fstar(p));
  CHECK(p.fstar_source == "planted clustering");
  Metrics mt = metrics(p, vec_of(xbar));
  CHECK(mt.cons_violation < 1e-10);
  CHECK(mt.obj_proxy < 1e-12);  // |f - f*| at the planted optimum
}

TEST_CASE("kmeans full reveal collapses the oracle onto the exact objective") {
  BlobData blobs = gen_blobs(6, 2, 3, 33);
  Problem p = make_kmeans(blobs.points, 2, 1.0, 33);
  Rng rng(2);
  VectorXd x = oracles::rand_vec(rng, 36);
  SampleStream stream(44);
  for (int rep = 0; rep < 5; ++rep) {
    Sample s = stream.next();
    // the full-reveal estimate averages all m entries, i.e. <M, X>/m
    CHECK(p.oracle.value(x, s) ==
          doctest::Approx(p.full_objective(x)).epsilon(1e-12));
    VectorXd g = p.oracle.grad(x, s);
    VectorXd want = p.expected_grad(x);
    CHECK((g - want).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("kmeans subsampled gradients are unbiased") {
  BlobData blobs = gen_blobs(4, 2, 3, 8);
  Problem p = make_kmeans(blobs.points, 2, 0.25, 8);
  VectorXd want = p.expected_grad(VectorXd::Zero(16));

  const int n = 20000;
  VectorXd mean = VectorXd::Zero(16);
  VectorXd m2 = VectorXd::Zero(16);
  SampleStream stream(71);
  for (int i = 0; i < n; ++i) {
    VectorXd g = p.oracle.grad(VectorXd::Zero(16), stream.next());
    mean += g;
    m2 += g.cwiseProduct(g);
  }
  mean /= double(n);
  VectorXd var = m2 / double(n) - mean.cwiseProduct(mean);
  const double se_norm = std::sqrt(var.cwiseMax(0.0).sum() / double(n));
  CHECK((mean - want).norm() <= 5.0 * se_norm);
}

TEST_CASE("kmeans construction guards its inputs") {
  MatrixXd pts = MatrixXd::Zero(3, 2);
  CHECK_THROWS_AS(make_kmeans(pts, 0, 1.0, 0), DimMismatch);
  CHECK_THROWS_AS(make_kmeans(pts, 4, 1.0, 0), DimMismatch);
  CHECK_THROWS_AS(make_kmeans(pts, 2, 0.0, 0), ConfigError);
  CHECK_THROWS_AS(make_kmeans(pts, 2, 1.5, 0), ConfigError);
  CHECK_THROWS_AS(kmeans_indicator({0, 1, 3}, 3), DimMismatch);
}

// --- uniform sparsest cut ------------------------------------------------

TEST_CASE("triangle-graph channel rows act as documented on the identity") {
  EdgeList k3;
  k3.d = 3;
  k3.edges = {{0, 1}, {1, 2}, {0, 2}};
  Problem p = make_sparsest_cut(k3, 1.0, TriangleConvention::Ordered, 0);
  REQUIRE(p.channel.has_value());

  VectorXd x = vec_of(MatrixXd::Identity(3, 3));
  VectorXd out = p.channel->apply(x);
  REQUIRE(out.size() == 1 + 6);  // spread + d(d-1)(d-2) triangles
  // spread row: (d-1) tr X - offdiag mass = 2 * 3 = 6
  CHECK(out[0] == doctest::Approx(6.0));
  // every triangle row: X_ij + X_jk - X_ik - X_jj = -1 on the identity
  for (Index r = 1; r < out.size(); ++r) CHECK(out[r] == doctest::Approx(-1.0));
  // the equality target d^2/2 = 4.5 leaves |6 - 4.5| of violation; the
  // satisfied inequalities contribute nothing
  CHECK(p.channel->out_distance(out) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("triangle rows are invariant under the i<->k swap on symmetric input") {
  EdgeList g = gen_graph(4, 2, 9);
  Problem p = make_sparsest_cut(g, 1.0, TriangleConvention::Ordered, 0);
  Rng rng(5);
  MatrixXd xs = oracles::rand_sym(rng, 4);
  VectorXd out = p.channel->apply(vec_of(xs));

  // replicate the ordered (i, j, k) enumeration to locate row positions
  std::vector<std::array<Index, 3>> triples;
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j)
      for (Index k = 0; k < 4; ++k)
        if (i != j && j != k && i != k) triples.push_back({i, j, k});
  REQUIRE(Index(triples.size()) == out.size() - 1);

  auto row_of = [&](Index i, Index j, Index k) {
    for (std::size_t t = 0; t < triples.size(); ++t)
      if (triples[t][0] == i && triples[t][1] == j && triples[t][2] == k)
        return Index(t) + 1;
    REQUIRE(false);
    return Index(0);
  };
  for (const auto& t : triples)
    CHECK(out[row_of(t[0], t[1], t[2])] ==
          doctest::Approx(out[row_of(t[2], t[1], t[0])]).epsilon(1e-12));
}

TEST_CASE("path-graph laplacian has the textbook entries") {
  EdgeList p3;
  p3.d = 3;
  p3.edges = {{0, 1}, {1, 2}};
  MatrixXd lap = graph_laplacian(p3);
  CHECK(lap(0, 0) == 1.0);
  CHECK(lap(1, 1) == 2.0);
  CHECK(lap(2, 2) == 1.0);
  CHECK(lap(0, 1) == -1.0);
  CHECK(lap(0, 2) == 0.0);
  CHECK((lap * VectorXd::Ones(3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("triangle row counts for d=25") {
  CHECK(triangle_row_count(25, TriangleConvention::Ordered) == 13800);
  CHECK(triangle_row_count(25, TriangleConvention::ILessK) == 6900);
  CHECK(triangle_row_count(25, TriangleConvention::Unordered) == 2300);
  CHECK(parse_triangles("ordered") == TriangleConvention::Ordered);
  CHECK(parse_triangles("i-less-k") == TriangleConvention::ILessK);
  CHECK(parse_triangles("unordered") == TriangleConvention::Unordered);
  CHECK_THROWS_AS(parse_triangles("diagonal"), ConfigError);
}

TEST_CASE("full edge batch reproduces the laplacian gradient exactly") {
  EdgeList g = gen_graph(6, 3, 14);
  Problem p = make_sparsest_cut(g, 1.0, TriangleConvention::Unordered, 0);
  VectorXd got = p.oracle.grad(VectorXd::Zero(36), Sample{123});
  VectorXd want = p.expected_grad(VectorXd::Zero(36));
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("disconnected graphs build but are flagged") {
  EdgeList two;
  two.d = 6;
  two.edges = {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
  CHECK_FALSE(graph_connected(two));
  Problem p = make_sparsest_cut(two, 1.0, TriangleConvention::Ordered, 0);
  CHECK_FALSE(p.connected_graph);
  CHECK(p.channel->apply(VectorXd::Zero(36)).size() == 1 + 6 * 5 * 4);

  EdgeList ring = gen_graph(7, 0, 0);
  CHECK(graph_connected(ring));
}

TEST_CASE("generated graphs are rings plus dedup'd chords") {
  EdgeList g = gen_graph(10, 5, 77);
  CHECK(g.d == 10);
  CHECK(g.edges.size() >= 10);
  CHECK(g.edges.size() <= 15);
  CHECK(graph_connected(g));
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    CHECK(g.edges[i].first != g.edges[i].second);
    for (std::size_t j = i + 1; j < g.edges.size(); ++j)
      CHECK((g.edges[i] != g.edges[j]));
  }
}

// --- quadratic fixture -----------------------------------------------

TEST_CASE("quadratic fixture centers its optimum inside the box") {
  Problem p = make_quadratic_test(6, 5, 0.7);
  // recover c from the expected gradient and check it's the minimizer
  VectorXd c = -p.expected_grad(VectorXd::Zero(6));
  CHECK((c.array().abs() <= 1.0).all());
  CHECK(p.expected_grad(c).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(metrics(p, c).obj_proxy == 0.0);
}

TEST_CASE("coordinate differences are exact on the quadratic oracle") {
  Problem p = make_quadratic_test(5, 9, 1.3);
  SampleOracle o = p.oracle;
  o.counters = std::make_shared<OracleCounters>();
  Rng rng(4);
  VectorXd x = oracles::rand_vec(rng, 5);
  SampleStream stream(6);
  for (int rep = 0; rep < 10; ++rep) {
    Sample s = stream.next();
    VectorXd est = cge(o, x, 1e-2, s);
    VectorXd g = p.oracle.grad(x, s);
    CHECK((est - g).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

// --- blobs / loaders ---------------------------------------------------

TEST_CASE("blob generator is deterministic with balanced labels") {
  BlobData a = gen_blobs(10, 3, 2, 55);
  BlobData b = gen_blobs(10, 3, 2, 55);
  CHECK((a.points.array() == b.points.array()).all());
  CHECK(a.labels == b.labels);
  for (Index i = 0; i < 10; ++i) CHECK(a.labels[std::size_t(i)] == int(i % 3));
  BlobData c = gen_blobs(10, 3, 2, 56);
  CHECK_FALSE((a.points.array() == c.points.array()).all());
}

TEST_CASE("edge lists survive a write/load round trip") {
  EdgeList g = gen_graph(8, 4, 31);
  const std::string path = tmp_path("edges.txt");
  write_edge_list(g, path);
  EdgeList back = load_edge_list(path);
  CHECK(back.d == g.d);
  // the loader canonicalizes edge order, so compare as sets
  auto want = g.edges;
  std::sort(want.begin(), want.end());
  CHECK(back.edges == want);
  std::remove(path.c_str());
}

TEST_CASE("one-indexed exports are shifted down automatically") {
  const std::string path = tmp_path("edges1.txt");
  {
    std::ofstream out(path);
    out << "% a comment\n\n1 2\n2 3\n3 1\n";
  }
  EdgeList g = load_edge_list(path);
  CHECK(g.d == 3);
  REQUIRE(g.edges.size() == 3);
  CHECK(g.edges[0] == std::make_pair(0, 1));
  CHECK(g.edges[1] == std::make_pair(0, 2));
  CHECK(g.edges[2] == std::make_pair(1, 2));
  std::remove(path.c_str());

  {
    std::ofstream out(path);
    out << "# hash comments too\n0 1\n1 2\n";
  }
  EdgeList h = load_edge_list(path);  // a 0 id means already 0-indexed
  CHECK(h.d == 3);
  CHECK(h.edges.size() == 2);
  std::remove(path.c_str());
}

TEST_CASE("malformed edge lists raise parse errors") {
  const std::string path = tmp_path("edges_bad.txt");
  {
    std::ofstream out(path);
    out << "0 1\n2\n";
  }
  CHECK_THROWS_AS(load_edge_list(path), ParseError);
  {
    std::ofstream out(path);
    out << "0 -1\n";
  }
  CHECK_THROWS_AS(load_edge_list(path), ParseError);
  {
    std::ofstream out(path);
    out << "# only comments\n";
  }
  CHECK_THROWS_AS(load_edge_list(path), ParseError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_edge_list("definitely_missing_file.txt"), ParseError);
}

TEST_CASE("points files round trip bit-for-bit") {
  Rng rng(8);
  MatrixXd pts(5, 3);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 3; ++j) pts(i, j) = rng.normal();
  const std::string path = tmp_path("points.csv");
  write_points_csv(pts, path);
  MatrixXd back = load_points_csv(path);
  REQUIRE(back.rows() == pts.rows());
  REQUIRE(back.cols() == pts.cols());
  CHECK((back.array() == pts.array()).all());  // %.17g round-trips exactly
  std::remove(path.c_str());
}

TEST_CASE("points loader accepts mixed separators and rejects ragged rows") {
  const std::string path = tmp_path("points_mixed.csv");
  {
    std::ofstream out(path);
    out << "# header\n1,2;3\n4 5\t6\n";
  }
  MatrixXd pts = load_points_csv(path);
  CHECK(pts.rows() == 2);
  CHECK(pts.cols() == 3);
  CHECK(pts(1, 2) == 6.0);
  {
    std::ofstream out(path);
    out << "1 2 3\n4 5\n";
  }
  CHECK_THROWS_AS(load_points_csv(path), ParseError);
  {
    std::ofstream out(path);
    out << "1 2 oops\n";
  }
  CHECK_THROWS_AS(load_points_csv(path), ParseError);
  std::remove(path.c_str());
}

TEST_CASE("idx loader reads crafted ubyte payloads") {
  const std::string path = tmp_path("images.idx");
  {
    std::ofstream out(path, std::ios::binary);
    const unsigned char bytes[] = {
        0, 0, 0x08, 3,          // magic: ubyte, rank 3
        0, 0, 0, 2,             // 2 items
        0, 0, 0, 2, 0, 0, 0, 2, // 2 x 2 each
        0, 1, 2, 3, 4, 5, 6, 7,
    };
    out.write(reinterpret_cast<const char*>(bytes), sizeof bytes);
  }
  MatrixXd imgs = load_idx_images(path);
  REQUIRE(imgs.rows() == 2);
  REQUIRE(imgs.cols() == 4);
  CHECK(imgs(0, 0) == 0.0);
  CHECK(imgs(0, 3) == 3.0);
  CHECK(imgs(1, 0) == 4.0);
  CHECK(imgs(1, 3) == 7.0);
  std::remove(path.c_str());
}

TEST_CASE("idx loader rejects bad magic and truncation") {
  const std::string path = tmp_path("bad.idx");
  auto write_bytes = [&](std::initializer_list<unsigned char> bytes) {
    std::ofstream out(path, std::ios::binary);
    for (unsigned char b : bytes) out.put(char(b));
  };
  write_bytes({1, 0, 0x08, 1, 0, 0, 0, 1, 9});
  CHECK_THROWS_AS(load_idx_images(path), ParseError);
  write_bytes({0, 0, 0x09, 1, 0, 0, 0, 1, 9});  // signed payload type
  CHECK_THROWS_AS(load_idx_images(path), ParseError);
  write_bytes({0, 0, 0x08, 1, 0, 0, 0, 4, 9});  // promises 4, delivers 1
  CHECK_THROWS_AS(load_idx_images(path), ParseError);
  std::remove(path.c_str());
}

TEST_CASE("pca projection preserves distances for collinear data") {
  MatrixXd rows(4, 3);
  const VectorXd dir = VectorXd::Ones(3) / std::sqrt(3.0);
  const double ts[] = {-3.0, -1.0, 2.0, 5.0};
  for (Index i = 0; i < 4; ++i) rows.row(i) = ts[i] * dir.transpose();

  MatrixXd red = pca_reduce(rows, 1);
  REQUIRE(red.cols() == 1);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j)
      CHECK(std::abs(red(i, 0) - red(j, 0)) ==
            doctest::Approx(std::abs(ts[i] - ts[j])).epsilon(1e-10));

  MatrixXd again = pca_reduce(rows, 1);  // sign convention fixes the basis
  CHECK((again.array() == red.array()).all());
  CHECK_THROWS_AS(pca_reduce(rows, 5), DimMismatch);
  CHECK_THROWS_AS(pca_reduce(rows, 0), DimMismatch);
}

TEST_SUITE_END();
