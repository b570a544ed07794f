#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pffw/channel.hpp"
#include "pffw/gradients.hpp"
#include "pffw/lmo.hpp"
#include "pffw/schedule.hpp"

namespace pffw {

// Per-iterate diagnostics every problem knows how to compute for itself.
struct Metrics {
  double obj_proxy = 0.0;       // problem-specific objective surrogate
  double cons_violation = 0.0;  // distance-to-feasibility of the hard channel
};

// A benchmark instance: stochastic oracle + atom set + (optional) constraint
// channel, plus closures for the exact quantities the harness logs.
struct Problem {
  std::string name;
  Index side = 0;  // matrix problems: n for n x n iterates (0 = plain vector)
  Index dim = 0;   // flattened iterate dimension

  SampleOracle oracle;
  AtomSet atoms;
  std::optional<ConstraintChannel> channel;
  ProblemConstants consts;

  // E[grad f(x, xi)] -- used for tracking-error diagnostics and tests.
  std::function<VectorXd(const VectorXd&)> expected_grad;
  // E[f(x, xi)] up to the problem's own normalisation (may be empty).
  std::function<double(const VectorXd&)> full_objective;
  // Fills the two logged columns.
  std::function<Metrics(const VectorXd&)> metric_fn;

  // Reference optimal value, when one is known.  NaN until set_fstar().
  std::shared_ptr<double> fstar_cell;
  std::string fstar_source;

  bool connected_graph = true;  // only meaningful for cut problems
};

Metrics metrics(const Problem& p, const VectorXd& x);
void set_fstar(Problem& p, double fstar, std::string source);
bool has_fstar(const Problem& p);

// --- sparse covariance estimation -------------------------------------
// min E_w ||X - w w^T||_F^2 over the PSD trace ball, with an l1-ball
// channel promoting entrywise sparsity.  w = Psi z, z standard normal,
// Psi a random d x rank factor with sparse support.
//
// Default radius pairing: alpha (l1 radius) = tr(W), K (trace bound) =
// ||vec W||_1 where W = Psi Psi^T.  swap_radii flips the two, which makes
// W itself feasible.
Problem make_sparse_cov(Index d, Index rank, std::uint64_t seed,
                        bool swap_radii = false);

// Ground-truth factor moments for tests: returns W = Psi Psi^T for the
// same (d, rank, seed) the builder uses.
MatrixXd sparse_cov_target(Index d, Index rank, std::uint64_t seed);

// --- k-means SDP -------------------------------------------------------
// min (1/N^2) <M, X> over the PSD trace ball (K = #clusters), channel:
// row sums = 1 stacked with entrywise nonnegativity.  The stochastic
// oracle reveals a uniformly sampled fraction of the entries of M.
Problem make_kmeans(const MatrixXd& points, int k_clusters,
                    double reveal_frac, std::uint64_t seed);

struct BlobData {
  MatrixXd points;          // N x p
  std::vector<int> labels;  // ground-truth cluster of each point
};
BlobData gen_blobs(Index n_points, int k_clusters, Index features,
                   std::uint64_t seed);

// Blob instance with f* taken from the planted clustering.
Problem make_kmeans_synthetic(Index n_points, int k_clusters, Index features,
                              double reveal_frac, std::uint64_t seed);

// Block-constant SDP iterate encoding a hard clustering.
MatrixXd kmeans_indicator(const std::vector<int>& labels, int k_clusters);

// --- uniform sparsest cut ---------------------------------------------
// min (1/d^2) <L, X> over the PSD trace ball, channel: the spread
// equality d*tr(X) - 1^T X 1 = d^2/2 plus one triangle inequality
// X_ij + X_jk - X_ik - X_jj <= 0 per triple, under a chosen convention.
enum class TriangleConvention {
  Ordered,    // all ordered distinct triples: d(d-1)(d-2) rows
  ILessK,     // dedupe the i<->k symmetry: half as many rows
  Unordered,  // one row per i<j<k: d(d-1)(d-2)/6 rows
};
TriangleConvention parse_triangles(const std::string& name);
long long triangle_row_count(Index d, TriangleConvention conv);

struct EdgeList {
  Index d = 0;  // number of vertices
  std::vector<std::pair<int, int>> edges;
};

// batch_frac: fraction of edges each stochastic draw reveals (default 5%).
Problem make_sparsest_cut(const EdgeList& graph, double batch_frac = 0.05,
                          TriangleConvention conv = TriangleConvention::Ordered,
                          std::uint64_t seed = 0);

MatrixXd graph_laplacian(const EdgeList& graph);
bool graph_connected(const EdgeList& graph);

// ring + random chords; connected by construction
EdgeList gen_graph(Index d, Index extra_chords, std::uint64_t seed);

// --- synthetic quadratic (unit tests / tracker experiments) ------------
// f(x, xi) = 0.5 ||x - xi||^2 with xi = c + noise * z, z ~ N(0, I),
// over a hypercube.  with_channel adds a nonnegativity channel.
Problem make_quadratic_test(Index m, std::uint64_t seed, double noise = 1.0,
                            bool with_channel = false);

// --- data plumbing ------------------------------------------------------
EdgeList load_edge_list(const std::string& path);
void write_edge_list(const EdgeList& graph, const std::string& path);

MatrixXd load_points_csv(const std::string& path);
void write_points_csv(const MatrixXd& pts, const std::string& path);

// IDX container of unsigned bytes (the common raster-image dump format,
// big-endian dims).  Returns one row per item, raw 0..255 values.
MatrixXd load_idx_images(const std::string& path);

// Rows -> centred rows projected onto the top p principal directions.
MatrixXd pca_reduce(const MatrixXd& rows, Index p);

}  // namespace pffw
