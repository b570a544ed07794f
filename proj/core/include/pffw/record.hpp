#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pffw/errors.hpp"

namespace pffw {

// One logged iteration. Counter columns are cumulative. sfo_calls counts
// one query per minibatch sample per iteration; szo_calls counts the
// estimator's nominal query size 2m per iteration (the Szo estimator probes
// 2m coordinates per gradient estimate).
struct RunRow {
  long k = 0;
  double obj_proxy = 0.0;
  double cons_violation = 0.0;
  long lmo_calls = 0;
  long lmo_skipped = 0;
  long long sfo_calls = 0;
  long long szo_calls = 0;
  std::optional<double> tracking_err;  // ||y_k - expected gradient||^2
  double wall_ms = 0.0;
};

struct RunRecord {
  // header metadata; everything except wall_ms and git_rev is covered by
  // the determinism guarantee
  std::string algo;
  std::string problem;
  std::string oracle = "sfo";
  std::uint64_t seed = 0;
  double mu_c = 1.0;
  double tau0 = 0.0;
  long iters = 0;
  int batch = 1;
  double batch_frac = 0.0;
  double constraint_frac = 0.0;
  long log_every = 1;
  bool swap_radii = false;
  std::string git_rev;
  std::string fstar_source;  // how the objective reference was obtained, if any
  std::string error;         // non-empty when the run aborted mid-way

  std::vector<RunRow> rows;
};

// git-describe string baked in at configure time ("unknown" outside a
// checkout)
std::string build_git_rev();

// Serialized row block (column header + rows), with doubles printed at
// full round-trip precision. This is the "body" the determinism checks
// compare; wall_ms sits in the last column so comparisons can drop it.
std::string csv_body(const RunRecord& r);

// Write header comments plus body to path via a temp file in the same
// directory followed by an atomic rename.
void write_csv(const RunRecord& r, const std::string& path);

RunRecord parse_csv(const std::string& path);

// Field-wise equality of the logged rows with wall_ms ignored.
bool rows_equal_ignoring_wall(const RunRecord& a, const RunRecord& b);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

// Least-squares fit of log(val) against log(k) over the window
// k in [k_min, k_max]. Requires at least 10 points in the window and
// strictly positive values (NonPositiveValues otherwise).
SlopeFit fit_loglog_slope(const std::vector<double>& k,
                          const std::vector<double>& val, double k_min,
                          double k_max);

}  // namespace pffw
