// benchmark driver: solve / bench / verify / gen over the pffw solvers
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pffw/config.hpp"
#include "pffw/errors.hpp"
#include "pffw/plot.hpp"
#include "pffw/problems.hpp"
#include "pffw/record.hpp"
#include "pffw/solvers.hpp"
#include "pffw/verify.hpp"

namespace {

using nlohmann::json;
using namespace pffw;

// dataset construction is driven by data_seed only, so --seed sweeps reuse
// the exact same instance
Problem build_problem(const RunConfig& cfg, bool quiet = false) {
  if (cfg.problem == "quad")
    return make_quadratic_test(cfg.dim, cfg.data_seed, cfg.noise, true);
  if (cfg.problem == "sparse-cov")
    return make_sparse_cov(cfg.dim, cfg.rank, cfg.data_seed, cfg.swap_radii);
  if (cfg.problem == "kmeans") {
    if (!cfg.points.empty()) {
      MatrixXd pts = load_points_csv(cfg.points);
      return make_kmeans(pts, cfg.clusters, cfg.batch_frac, cfg.data_seed);
    }
    return make_kmeans_synthetic(cfg.dim, cfg.clusters, cfg.features,
                                 cfg.batch_frac, cfg.data_seed);
  }
  if (cfg.problem == "sparsest-cut") {
    EdgeList graph = cfg.graph.empty()
                         ? gen_graph(cfg.dim, cfg.chords, cfg.data_seed)
                         : load_edge_list(cfg.graph);
    Problem p = make_sparsest_cut(graph, cfg.batch_frac,
                                  parse_triangles(cfg.triangles), cfg.data_seed);
    if (!p.connected_graph && !quiet)
      std::fprintf(stderr, "warning: graph is disconnected; proceeding anyway\n");
    return p;
  }
  throw ConfigError("unknown problem '" + cfg.problem + "'");
}

RunOptions to_run_options(const RunConfig& cfg, Algo algo, std::uint64_t seed) {
  RunOptions opt;
  opt.algo = algo;
  opt.oracle = cfg.oracle == "szo" ? OracleMode::Szo : OracleMode::Sfo;
  opt.sched.mu_c = cfg.mu_c;
  opt.sched.tau0 = cfg.tau0;
  opt.iters = cfg.iters;
  opt.batch = cfg.batch;
  opt.constraint_frac = cfg.constraint_frac;
  opt.seed = seed;
  opt.log_every = cfg.log_every;
  opt.track_error = cfg.track_error;
  return opt;
}

// reference objective for datasets without a planted optimum: a long
// deterministic HFW run, 10x the configured budget
void attach_reference_fstar(Problem& prob, const RunConfig& cfg) {
  RunOptions ref;
  ref.algo = Algo::Hfw;
  ref.iters = cfg.iters * 10;
  ref.log_every = ref.iters;
  ref.seed = cfg.data_seed;
  RunRecord rec = run(prob, ref);
  if (!rec.error.empty() || rec.rows.empty())
    throw ConfigError("reference hfw run failed: " + rec.error);
  set_fstar(prob, rec.rows.back().obj_proxy, "hfw 10x reference");
}

std::string plot_path_for(const std::string& out) {
  std::filesystem::path p(out);
  p.replace_extension(".gp");
  return p.string();
}

void annotate(RunRecord& rec, const RunConfig& cfg) {
  rec.batch_frac = cfg.batch_frac;
  rec.swap_radii = cfg.swap_radii;
}

int cmd_solve(const RunConfig& cfg) {
  validate_config(cfg);
  Problem prob = build_problem(cfg);
  if (cfg.problem == "kmeans" && !cfg.points.empty())
    attach_reference_fstar(prob, cfg);
  RunRecord rec = run(prob, to_run_options(cfg, parse_algo(cfg.algo), cfg.seed));
  annotate(rec, cfg);
  write_csv(rec, cfg.out);
  if (cfg.emit_plot)
    emit_plot_script({rec}, {std::filesystem::path(cfg.out).filename().string()},
                     plot_path_for(cfg.out));
  if (!rec.error.empty()) {
    std::fprintf(stderr, "run aborted: %s (partial record written to %s)\n",
                 rec.error.c_str(), cfg.out.c_str());
    return 1;
  }
  const RunRow& last = rec.rows.back();
  std::printf("wrote %s (%zu rows); final obj %.6g, violation %.6g, lmo %ld/%ld\n",
              cfg.out.c_str(), rec.rows.size(), last.obj_proxy,
              last.cons_violation, last.lmo_calls, last.k);
  return 0;
}

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t at = 0;
  while (at <= s.size()) {
    std::size_t comma = s.find(',', at);
    if (comma == std::string::npos) comma = s.size();
    std::string tok = s.substr(at, comma - at);
    if (!tok.empty()) out.push_back(tok);
    at = comma + 1;
  }
  if (out.empty()) throw ConfigError("empty algorithm list");
  return out;
}

json fit_or_null(const std::vector<double>& ks, const std::vector<double>& vs,
                 double lo, double hi) {
  try {
    return fit_loglog_slope(ks, vs, lo, hi).slope;
  } catch (const std::exception&) {
    return nullptr;  // zeros or too few points in the window: no fit
  }
}

int cmd_bench(const RunConfig& cfg) {
  validate_config(cfg);
  Problem prob = build_problem(cfg);
  if (cfg.problem == "kmeans" && !cfg.points.empty())
    attach_reference_fstar(prob, cfg);

  const std::filesystem::path out(cfg.out);
  const std::string stem = (out.parent_path() / out.stem()).string();

  std::vector<RunRecord> records;
  std::vector<std::string> files;
  json series = json::array();
  bool any_error = false;

  for (const std::string& name : split_csv_list(cfg.algo)) {
    const Algo algo = parse_algo(name);
    for (int s = 0; s < cfg.seeds; ++s) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(s);
      RunRecord rec = run(prob, to_run_options(cfg, algo, seed));
      annotate(rec, cfg);
      const std::string file =
          stem + "_" + name + "_s" + std::to_string(seed) + ".csv";
      write_csv(rec, file);
      if (!rec.error.empty()) {
        any_error = true;
        std::fprintf(stderr, "run %s seed %llu aborted: %s\n", name.c_str(),
                     static_cast<unsigned long long>(seed), rec.error.c_str());
      }

      std::vector<double> ks, obj, cons;
      for (const auto& row : rec.rows) {
        ks.push_back(static_cast<double>(row.k));
        obj.push_back(row.obj_proxy);
        cons.push_back(row.cons_violation);
      }
      const double hi = static_cast<double>(cfg.iters);
      const double lo = hi / 10.0;  // fit over the last decade of iterations
      json entry;
      entry["algo"] = name;
      entry["seed"] = seed;
      entry["file"] = std::filesystem::path(file).filename().string();
      entry["error"] = rec.error;
      if (!rec.rows.empty()) {
        entry["final_obj"] = rec.rows.back().obj_proxy;
        entry["final_violation"] = rec.rows.back().cons_violation;
        entry["lmo_calls"] = rec.rows.back().lmo_calls;
        entry["lmo_skipped"] = rec.rows.back().lmo_skipped;
        entry["slope_obj"] = fit_or_null(ks, obj, lo, hi);
        entry["slope_violation"] = fit_or_null(ks, cons, lo, hi);
      }
      series.push_back(std::move(entry));
      files.push_back(std::filesystem::path(file).filename().string());
      records.push_back(std::move(rec));
    }
  }

  json summary;
  summary["problem"] = prob.name;
  summary["iters"] = cfg.iters;
  summary["seeds"] = cfg.seeds;
  summary["git_rev"] = build_git_rev();
  summary["series"] = std::move(series);
  const std::string sum_path = stem + "_summary.json";
  {
    std::ofstream js(sum_path);
    if (!js) throw ParseError("cannot write summary '" + sum_path + "'");
    js << summary.dump(2) << "\n";
  }
  if (cfg.emit_plot) emit_plot_script(records, files, stem + ".gp");
  std::printf("wrote %zu runs + %s\n", records.size(), sum_path.c_str());
  return any_error ? 1 : 0;
}

int cmd_verify(const RunConfig& cfg) {
  const auto results = run_verify(cfg.seed_set ? cfg.seed : 1234);
  for (const auto& r : results)
    std::printf("%s  %-24s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
  const bool ok = all_passed(results);
  std::printf("%s (%zu checks)\n", ok ? "all passed" : "FAILURES PRESENT",
              results.size());
  return ok ? 0 : 1;
}

int cmd_gen(const RunConfig& cfg) {
  if (cfg.problem == "kmeans") {
    BlobData blobs = gen_blobs(cfg.dim, cfg.clusters, cfg.features, cfg.data_seed);
    write_points_csv(blobs.points, cfg.out);
  } else if (cfg.problem == "sparsest-cut") {
    write_edge_list(gen_graph(cfg.dim, cfg.chords, cfg.data_seed), cfg.out);
  } else if (cfg.problem == "sparse-cov") {
    write_points_csv(sparse_cov_target(cfg.dim, cfg.rank, cfg.data_seed), cfg.out);
  } else {
    throw ConfigError("gen supports kmeans, sparsest-cut, sparse-cov");
  }
  std::printf("wrote %s\n", cfg.out.c_str());
  return 0;
}

void add_common_flags(CLI::App* sub, RunConfig& cfg, std::string& config_path) {
  sub->add_option("--config", config_path, "key = value config file");
  sub->add_option("--algo", cfg.algo,
                  "most-fw | most-fw-plus | t-most-fw | t-most-fw-plus | shcgm "
                  "| hfw (bench: comma-separated list)");
  sub->add_option("--oracle", cfg.oracle, "sfo | szo");
  sub->add_option("--problem", cfg.problem,
                  "quad | sparse-cov | kmeans | sparsest-cut");
  sub->add_option("--mu-c", cfg.mu_c, "smoothing scale mu_c");
  sub->add_option("--tau0", cfg.tau0, "trimming threshold scale");
  sub->add_option("--iters", cfg.iters, "iteration budget");
  sub->add_option("--batch", cfg.batch, "minibatch size per iteration");
  sub->add_option("--batch-frac", cfg.batch_frac,
                  "oracle reveal fraction (kmeans entries / cut edges)");
  sub->add_option("--constraint-frac", cfg.constraint_frac,
                  "channel rows sampled per iteration (plus variants)");
  sub->add_option("--seed", cfg.seed, "run seed (env PFFW_SEED as fallback)");
  sub->add_option("--seeds", cfg.seeds, "bench: number of seeds");
  sub->add_option("--log-every", cfg.log_every, "row cadence");
  sub->add_option("--out", cfg.out, "output path");
  sub->add_flag("--swap-radii", cfg.swap_radii,
                "sparse-cov: use the conventional alpha/K pairing");
  sub->add_flag("--emit-plot", cfg.emit_plot, "also write a gnuplot script");
  sub->add_flag("--track-error", cfg.track_error,
                "log the tracker error column");
  sub->add_option("--data-seed", cfg.data_seed, "dataset generation seed");
  sub->add_option("--dim", cfg.dim, "problem size (d / N / vertices / m)");
  sub->add_option("--rank", cfg.rank, "sparse-cov factor count");
  sub->add_option("--clusters", cfg.clusters, "kmeans cluster count");
  sub->add_option("--features", cfg.features, "kmeans point dimension");
  sub->add_option("--chords", cfg.chords, "generated-graph extra edges");
  sub->add_option("--noise", cfg.noise, "quad oracle noise level");
  sub->add_option("--graph", cfg.graph, "edge-list file (sparsest-cut)");
  sub->add_option("--points", cfg.points, "points CSV (kmeans)");
  sub->add_option("--triangles", cfg.triangles,
                  "ordered | i-less-k | unordered");
}

// CLI > config file > env > defaults
RunConfig merge_config(CLI::App* sub, const RunConfig& cli,
                       const std::string& config_path) {
  RunConfig final_cfg =
      config_path.empty() ? RunConfig{} : load_config(config_path);
  auto take = [&](const std::string& flag, auto member) {
    if (sub->count(flag) > 0) final_cfg.*member = cli.*member;
  };
  take("--algo", &RunConfig::algo);
  take("--oracle", &RunConfig::oracle);
  take("--problem", &RunConfig::problem);
  take("--mu-c", &RunConfig::mu_c);
  take("--tau0", &RunConfig::tau0);
  take("--iters", &RunConfig::iters);
  take("--batch", &RunConfig::batch);
  take("--batch-frac", &RunConfig::batch_frac);
  take("--constraint-frac", &RunConfig::constraint_frac);
  take("--seeds", &RunConfig::seeds);
  take("--log-every", &RunConfig::log_every);
  take("--out", &RunConfig::out);
  take("--swap-radii", &RunConfig::swap_radii);
  take("--emit-plot", &RunConfig::emit_plot);
  take("--track-error", &RunConfig::track_error);
  take("--data-seed", &RunConfig::data_seed);
  take("--dim", &RunConfig::dim);
  take("--rank", &RunConfig::rank);
  take("--clusters", &RunConfig::clusters);
  take("--features", &RunConfig::features);
  take("--chords", &RunConfig::chords);
  take("--noise", &RunConfig::noise);
  take("--graph", &RunConfig::graph);
  take("--points", &RunConfig::points);
  take("--triangles", &RunConfig::triangles);
  if (sub->count("--seed") > 0) {
    final_cfg.seed = cli.seed;
    final_cfg.seed_set = true;
  }
  if (!final_cfg.seed_set) {
    if (const char* env = std::getenv("PFFW_SEED")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end == env || *end != '\0')
        throw ConfigError("PFFW_SEED is not an integer");
      final_cfg.seed = static_cast<std::uint64_t>(v);
      final_cfg.seed_set = true;
    }
  }
  return final_cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projection-free stochastic Frank-Wolfe benchmark driver"};
  app.require_subcommand(1);

  RunConfig cli;
  std::string config_path;
  CLI::App* solve = app.add_subcommand("solve", "single run, CSV record out");
  CLI::App* bench =
      app.add_subcommand("bench", "multi-seed / multi-algo sweep + summary JSON");
  CLI::App* verify = app.add_subcommand("verify", "oracle/invariant property suite");
  CLI::App* gen = app.add_subcommand("gen", "emit synthetic datasets");
  for (CLI::App* sub : {solve, bench, verify, gen})
    add_common_flags(sub, cli, config_path);

  try {
    app.parse(argc, argv);
    CLI::App* active = app.get_subcommands().front();
    RunConfig cfg = merge_config(active, cli, config_path);
    if (active == solve) return cmd_solve(cfg);
    if (active == bench) return cmd_bench(cfg);
    if (active == verify) return cmd_verify(cfg);
    return cmd_gen(cfg);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // config-level misuse
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
