#pragma once

#include <cstdint>
#include <string>

namespace pffw {

// Every CLI-settable knob, with the CLI's defaults. Files set the same keys
// (dashes or underscores both accepted); flags passed on the command line
// win over file values.
struct RunConfig {
  std::string algo = "most-fw";
  std::string oracle = "sfo";
  std::string problem = "quad";
  double mu_c = 1.0;
  double tau0 = 0.0;
  long long iters = 1000;
  int batch = 1;
  double batch_frac = 0.05;       // oracle reveal fraction (kmeans / cut)
  double constraint_frac = 1.0;   // channel rows per draw (plus variants)
  std::uint64_t seed = 0;
  bool seed_set = false;          // true once a file/flag/env provided one
  int seeds = 5;                  // bench sweep width
  long long log_every = 10;
  std::string out = "run.csv";
  bool swap_radii = false;
  bool emit_plot = false;
  bool track_error = false;

  // problem sizing; data_seed fixes the generated dataset so seed sweeps
  // vary only the oracle stream
  std::uint64_t data_seed = 42;
  long long dim = 20;      // d / N / vertices / m depending on the problem
  long long rank = 3;      // sparse-cov factor count
  int clusters = 3;        // kmeans K
  long long features = 10; // kmeans point dimension
  long long chords = 8;    // generated-graph extra edges
  double noise = 1.0;      // quad oracle noise
  std::string graph;       // external edge-list path (sparsest-cut)
  std::string points;      // external points CSV (kmeans)
  std::string triangles = "ordered";
};

// `key = value` lines over the struct above; '#'/';' comments; unknown or
// duplicate keys raise ParseError with the line number.
RunConfig load_config(const std::string& path);

// One key assignment (shared by the file loader). Throws ParseError on
// unknown keys or malformed values.
void apply_config_kv(RunConfig& c, const std::string& key,
                     const std::string& value);

// Cross-field sanity; throws ConfigError on the first violation.
void validate_config(const RunConfig& c);

}  // namespace pffw
