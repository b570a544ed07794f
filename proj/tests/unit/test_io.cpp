#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pffw/config.hpp"
#include "pffw/plot.hpp"
#include "pffw/record.hpp"

using namespace pffw;

namespace {

RunRecord sample_record() {
  RunRecord r;
  r.algo = "most-fw-plus";
  r.problem = "kmeans";
  r.oracle = "sfo";
  r.seed = 1234567890123ull;
  r.mu_c = 0.1;
  r.tau0 = 2.5;
  r.iters = 200;
  r.batch = 4;
  r.batch_frac = 0.01;
  r.constraint_frac = 0.125;
  r.log_every = 20;
  r.swap_radii = true;
  r.git_rev = "deadbee";
  r.fstar_source = "planted clustering";

  RunRow a;
  a.k = 1;
  a.obj_proxy = 1.0 / 3.0;
  a.cons_violation = 0.0;
  a.lmo_calls = 1;
  a.lmo_skipped = 0;
  a.sfo_calls = 4;
  a.szo_calls = 0;
  a.tracking_err = 1e-17;
  a.wall_ms = 0.25;
  RunRow b;
  b.k = 200;
  b.obj_proxy = 6.02214076e23;
  b.cons_violation = -0.0;  // sign must survive the round trip
  b.lmo_calls = 180;
  b.lmo_skipped = 20;
  b.sfo_calls = 800;
  b.szo_calls = 0;
  b.wall_ms = 1875.5;  // no tracking_err on this row
  r.rows = {a, b};
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("csv body prints the fixed column set at full precision") {
  RunRecord r;
  RunRow row;
  row.k = 3;
  row.obj_proxy = 0.5;
  row.cons_violation = 0.0;
  row.lmo_calls = 3;
  row.lmo_skipped = 0;
  row.sfo_calls = 3;
  row.szo_calls = 0;
  row.wall_ms = 1.5;
  r.rows = {row};
  CHECK(csv_body(r) ==
        "k,obj_proxy,cons_violation,lmo_calls,lmo_skipped,sfo_calls,szo_calls,"
        "tracking_err,wall_ms\n"
        "3,0.5,0,3,0,3,0,,1.5\n");
}

TEST_CASE("records survive a write/parse round trip") {
  RunRecord r = sample_record();
  const std::string path = "pffw_test_roundtrip.csv";
  write_csv(r, path);
  RunRecord back = parse_csv(path);
  std::remove(path.c_str());

  CHECK(back.algo == r.algo);
  CHECK(back.problem == r.problem);
  CHECK(back.oracle == r.oracle);
  CHECK(back.seed == r.seed);
  CHECK(back.mu_c == r.mu_c);
  CHECK(back.tau0 == r.tau0);
  CHECK(back.iters == r.iters);
  CHECK(back.batch == r.batch);
  CHECK(back.batch_frac == r.batch_frac);
  CHECK(back.constraint_frac == r.constraint_frac);
  CHECK(back.log_every == r.log_every);
  CHECK(back.swap_radii == r.swap_radii);
  CHECK(back.git_rev == r.git_rev);
  CHECK(back.fstar_source == r.fstar_source);
  CHECK(back.error.empty());
  CHECK(rows_equal_ignoring_wall(back, r));
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0].wall_ms == r.rows[0].wall_ms);
  CHECK(back.rows[1].wall_ms == r.rows[1].wall_ms);
  // the optional column keeps per-row presence
  CHECK(back.rows[0].tracking_err.has_value());
  CHECK_FALSE(back.rows[1].tracking_err.has_value());
  // -0.0 came back with its sign bit
  CHECK(std::signbit(back.rows[1].cons_violation));
}

TEST_CASE("error annotations round trip through the header") {
  RunRecord r = sample_record();
  r.error = "synthetic oracle outage";
  const std::string path = "pffw_test_error.csv";
  write_csv(r, path);
  RunRecord back = parse_csv(path);
  std::remove(path.c_str());
  CHECK(back.error == "synthetic oracle outage");
}

TEST_CASE("write_csv replaces existing files atomically") {
  RunRecord r = sample_record();
  const std::string path = "pffw_test_overwrite.csv";
  write_csv(r, path);
  r.rows.pop_back();
  write_csv(r, path);  // second write must rename over the first
  RunRecord back = parse_csv(path);
  std::remove(path.c_str());
  CHECK(back.rows.size() == 1);
}

TEST_CASE("parse_csv rejects malformed input") {
  const std::string path = "pffw_test_bad.csv";
  auto write_text = [&](const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
  };
  write_text("k,obj\n1,2\n");
  CHECK_THROWS_AS(parse_csv(path), ParseError);
  write_text(
      "k,obj_proxy,cons_violation,lmo_calls,lmo_skipped,sfo_calls,szo_calls,"
      "tracking_err,wall_ms\n"
      "1,zebra,0,1,0,1,0,,0.5\n");
  CHECK_THROWS_AS(parse_csv(path), ParseError);
  write_text(
      "k,obj_proxy,cons_violation,lmo_calls,lmo_skipped,sfo_calls,szo_calls,"
      "tracking_err,wall_ms\n"
      "1,0.5,0,1,0,1,0\n");
  CHECK_THROWS_AS(parse_csv(path), ParseError);
  write_text("# pffw-run v1\n# algo = most-fw\n");
  CHECK_THROWS_AS(parse_csv(path), ParseError);  // no column header at all
  std::remove(path.c_str());
  CHECK_THROWS_AS(parse_csv("definitely_missing.csv"), ParseError);
}

TEST_CASE("row equality ignores wall time and nothing else") {
  RunRecord a = sample_record();
  RunRecord b = sample_record();
  b.rows[0].wall_ms = 9999.0;
  CHECK(rows_equal_ignoring_wall(a, b));

  b = sample_record();
  b.rows[1].obj_proxy = std::nextafter(b.rows[1].obj_proxy, 1e30);
  CHECK_FALSE(rows_equal_ignoring_wall(a, b));

  b = sample_record();
  b.rows[0].tracking_err.reset();
  CHECK_FALSE(rows_equal_ignoring_wall(a, b));

  b = sample_record();
  b.rows.pop_back();
  CHECK_FALSE(rows_equal_ignoring_wall(a, b));
}

TEST_CASE("loglog fit recovers exact power laws") {
  std::vector<double> k, v_half, v_const;
  for (int i = 1; i <= 200; ++i) {
    k.push_back(double(i));
    v_half.push_back(1.0 / std::sqrt(double(i)));
    v_const.push_back(3.0);
  }
  SlopeFit f = fit_loglog_slope(k, v_half, 1.0, 200.0);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(f.intercept == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  CHECK(f.points == 200);
  CHECK(fit_loglog_slope(k, v_const, 1.0, 200.0).slope ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  // windowing drops everything outside [50, 100]
  CHECK(fit_loglog_slope(k, v_half, 50.0, 100.0).points == 51);
}

TEST_CASE("loglog fit shrugs off bounded multiplicative noise") {
  std::vector<double> k, v;
  for (int i = 1; i <= 1000; ++i) {
    k.push_back(double(i));
    v.push_back(std::exp(i % 2 ? 0.05 : -0.05) / double(i));
  }
  SlopeFit f = fit_loglog_slope(k, v, 1.0, 1000.0);
  CHECK(f.slope > -1.1);
  CHECK(f.slope < -0.9);
}

TEST_CASE("loglog fit validates its window") {
  std::vector<double> k, v;
  for (int i = 1; i <= 30; ++i) {
    k.push_back(double(i));
    v.push_back(1.0 / double(i));
  }
  CHECK_THROWS_AS(fit_loglog_slope(k, v, 1.0, 5.0), std::invalid_argument);
  v[3] = 0.0;
  CHECK_THROWS_AS(fit_loglog_slope(k, v, 1.0, 30.0), NonPositiveValues);
  v[3] = -1.0;
  CHECK_THROWS_AS(fit_loglog_slope(k, v, 1.0, 30.0), NonPositiveValues);
  v.pop_back();
  CHECK_THROWS_AS(fit_loglog_slope(k, v, 1.0, 30.0), DimMismatch);
}

TEST_CASE("build info string is always available") {
  CHECK_FALSE(build_git_rev().empty());
}

// --- config files -------------------------------------------------------

TEST_CASE("empty config files yield the documented defaults") {
  const std::string path = "pffw_test_empty.cfg";
  {
    std::ofstream out(path);
    out << "# nothing but comments\n; of either flavour\n\n";
  }
  RunConfig c = load_config(path);
  std::remove(path.c_str());
  RunConfig d;
  CHECK(c.algo == d.algo);
  CHECK(c.problem == d.problem);
  CHECK(c.mu_c == d.mu_c);
  CHECK(c.iters == d.iters);
  CHECK(c.seed_set == false);
  CHECK(c.out == d.out);
  CHECK(c.triangles == d.triangles);
  validate_config(c);  // defaults must validate
}

TEST_CASE("config values parse with dash/underscore keys interchangeable") {
  const std::string path = "pffw_test_full.cfg";
  {
    std::ofstream out(path);
    out << "algo = t-most-fw-plus\n"
        << "mu-c = 2.75\n"
        << "tau0 = 1.5\n"
        << "log_every = 3\n"
        << "constraint-frac = 0.25\n"
        << "seed = 99\n"
        << "swap_radii = on\n"
        << "track-error = yes\n"
        << "out = sweeps/run.csv\n";
  }
  RunConfig c = load_config(path);
  std::remove(path.c_str());
  CHECK(c.algo == "t-most-fw-plus");
  CHECK(c.mu_c == 2.75);
  CHECK(c.tau0 == 1.5);
  CHECK(c.log_every == 3);
  CHECK(c.constraint_frac == 0.25);
  CHECK(c.seed == 99);
  CHECK(c.seed_set);
  CHECK(c.swap_radii);
  CHECK(c.track_error);
  CHECK(c.out == "sweeps/run.csv");
}

TEST_CASE("config loader rejects unknown, duplicate and malformed lines") {
  const std::string path = "pffw_test_badcfg.cfg";
  auto write_text = [&](const std::string& text) {
    std::ofstream out(path);
    out << text;
  };
  write_text("muu_c = 1\n");
  CHECK_THROWS_AS(load_config(path), ParseError);
  write_text("mu_c = 1\nmu-c = 2\n");  // same key after normalization
  CHECK_THROWS_AS(load_config(path), ParseError);
  write_text("mu_c = banana\n");
  CHECK_THROWS_AS(load_config(path), ParseError);
  write_text("iters 100\n");
  CHECK_THROWS_AS(load_config(path), ParseError);
  write_text(" = 5\n");
  CHECK_THROWS_AS(load_config(path), ParseError);
  write_text("swap_radii = maybe\n");
  CHECK_THROWS_AS(load_config(path), ParseError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config("no_such_config.cfg"), ParseError);
}

TEST_CASE("validate_config flags each out-of-range knob") {
  auto broken = [](auto&& tweak) {
    RunConfig c;
    tweak(c);
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  };
  broken([](RunConfig& c) { c.iters = 0; });
  broken([](RunConfig& c) { c.batch = 0; });
  broken([](RunConfig& c) { c.batch_frac = 0.0; });
  broken([](RunConfig& c) { c.batch_frac = 1.5; });
  broken([](RunConfig& c) { c.constraint_frac = 0.0; });
  broken([](RunConfig& c) { c.mu_c = 0.0; });
  broken([](RunConfig& c) { c.tau0 = -0.5; });
  broken([](RunConfig& c) { c.log_every = 0; });
  broken([](RunConfig& c) { c.seeds = 0; });
  broken([](RunConfig& c) { c.problem = "sudoku"; });
  broken([](RunConfig& c) { c.oracle = "psychic"; });
  broken([](RunConfig& c) { c.triangles = "diagonal"; });
  broken([](RunConfig& c) { c.dim = 0; });
  broken([](RunConfig& c) { c.rank = 0; });
  broken([](RunConfig& c) { c.clusters = 0; });
  broken([](RunConfig& c) { c.features = 0; });
  broken([](RunConfig& c) { c.chords = -1; });
  broken([](RunConfig& c) { c.noise = -0.1; });
}

// --- plot scripts --------------------------------------------------------

TEST_CASE("plot scripts wire both panels to the written CSVs") {
  RunRecord a = sample_record();
  a.algo = "most-fw";
  a.seed = 1;
  RunRecord b = sample_record();
  b.algo = "shcgm";
  b.seed = 2;
  const std::string path = "pffw_test_plot.gp";
  emit_plot_script({a, b}, {"runs/a.csv", "runs/b.csv"}, path);
  const std::string text = slurp(path);
  std::remove(path.c_str());

  CHECK(text.find("set multiplot layout 1,2") != std::string::npos);
  CHECK(text.find("set logscale xy") != std::string::npos);
  CHECK(text.find("set output 'pffw_test_plot.png'") != std::string::npos);
  CHECK(text.find("'runs/a.csv' using 1:2") != std::string::npos);
  CHECK(text.find("'runs/b.csv' using 1:3") != std::string::npos);
  CHECK(text.find("#1b6ca8") != std::string::npos);  // most-fw palette entry
  CHECK(text.find("#8d6a9f") != std::string::npos);  // shcgm palette entry
  CHECK(text.find("most-fw seed 1") != std::string::npos);
  CHECK(text.find("unset multiplot") != std::string::npos);
}

TEST_CASE("plot emission validates its inputs") {
  CHECK_THROWS_AS(emit_plot_script({}, {}, "x.gp"), ConfigError);
  RunRecord r = sample_record();
  CHECK_THROWS_AS(emit_plot_script({r}, {"a.csv", "b.csv"}, "x.gp"),
                  DimMismatch);
}

TEST_SUITE_END();
