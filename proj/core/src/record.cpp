#include "pffw/record.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "pffw/rng.hpp"

namespace pffw {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ParseError("csv line " + std::to_string(line) + ": bad number '" + tok + "'");
  }
}

long long parse_ll(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ParseError("csv line " + std::to_string(line) + ": bad integer '" + tok + "'");
  }
}

constexpr const char* kColumns =
    "k,obj_proxy,cons_violation,lmo_calls,lmo_skipped,sfo_calls,szo_calls,"
    "tracking_err,wall_ms";

}  // namespace

std::string build_git_rev() {
#ifdef PFFW_GIT_REV
  return PFFW_GIT_REV;
#else
  return "unknown";
#endif
}

std::string csv_body(const RunRecord& r) {
  std::ostringstream os;
  os << kColumns << "\n";
  for (const RunRow& row : r.rows) {
    os << row.k << ',' << fmt_double(row.obj_proxy) << ','
       << fmt_double(row.cons_violation) << ',' << row.lmo_calls << ','
       << row.lmo_skipped << ',' << row.sfo_calls << ',' << row.szo_calls << ',';
    if (row.tracking_err) os << fmt_double(*row.tracking_err);
    os << ',' << fmt_double(row.wall_ms) << "\n";
  }
  return os.str();
}

void write_csv(const RunRecord& r, const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);  // best effort; the open below reports failure

  std::ostringstream os;
  os << "# pffw-run v1\n";
  os << "# algo = " << r.algo << "\n";
  os << "# problem = " << r.problem << "\n";
  os << "# oracle = " << r.oracle << "\n";
  os << "# seed = " << r.seed << "\n";
  os << "# mu_c = " << fmt_double(r.mu_c) << "\n";
  os << "# tau0 = " << fmt_double(r.tau0) << "\n";
  os << "# iters = " << r.iters << "\n";
  os << "# batch = " << r.batch << "\n";
  os << "# batch_frac = " << fmt_double(r.batch_frac) << "\n";
  os << "# constraint_frac = " << fmt_double(r.constraint_frac) << "\n";
  os << "# log_every = " << r.log_every << "\n";
  os << "# swap_radii = " << (r.swap_radii ? 1 : 0) << "\n";
  os << "# git = " << (r.git_rev.empty() ? "unknown" : r.git_rev) << "\n";
  if (!r.fstar_source.empty()) os << "# fstar_source = " << r.fstar_source << "\n";
  if (!r.error.empty()) os << "# error = " << r.error << "\n";
  os << csv_body(r);

  // unique temp name in the destination directory, then atomic rename
  std::uint64_t salt = std::hash<std::string>{}(path) ^
                       static_cast<std::uint64_t>(
                           std::chrono::steady_clock::now().time_since_epoch().count());
  const fs::path tmp = dir / (target.filename().string() + ".tmp" +
                              std::to_string(splitmix64(salt) & 0xffffff));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_csv: cannot open " + tmp.string());
    out << os.str();
    if (!out.flush()) throw std::runtime_error("write_csv: write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

RunRecord parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("parse_csv: cannot open " + path);

  RunRecord r;
  std::string line;
  int lineno = 0;
  bool saw_columns = false;

  auto set_header = [&r](const std::string& key, const std::string& val) {
    if (key == "algo") r.algo = val;
    else if (key == "problem") r.problem = val;
    else if (key == "oracle") r.oracle = val;
    else if (key == "seed") r.seed = std::stoull(val);
    else if (key == "mu_c") r.mu_c = std::stod(val);
    else if (key == "tau0") r.tau0 = std::stod(val);
    else if (key == "iters") r.iters = std::stol(val);
    else if (key == "batch") r.batch = std::stoi(val);
    else if (key == "batch_frac") r.batch_frac = std::stod(val);
    else if (key == "constraint_frac") r.constraint_frac = std::stod(val);
    else if (key == "log_every") r.log_every = std::stol(val);
    else if (key == "swap_radii") r.swap_radii = (val == "1" || val == "true");
    else if (key == "git") r.git_rev = val;
    else if (key == "fstar_source") r.fstar_source = val;
    else if (key == "error") r.error = val;
    // unknown header keys are tolerated: forward compatibility
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;  // banner line
      std::string key = line.substr(1, eq - 1);
      std::string val = line.substr(eq + 1);
      auto trim = [](std::string& s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
      };
      trim(key);
      trim(val);
      try {
        set_header(key, val);
      } catch (const std::exception&) {
        throw ParseError("csv line " + std::to_string(lineno) + ": bad header value");
      }
      continue;
    }
    if (!saw_columns) {
      if (line != kColumns)
        throw ParseError("csv line " + std::to_string(lineno) + ": unexpected columns");
      saw_columns = true;
      continue;
    }
    std::vector<std::string> tok;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        tok.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    tok.push_back(cur);
    if (tok.size() != 9)
      throw ParseError("csv line " + std::to_string(lineno) + ": expected 9 fields");
    RunRow row;
    row.k = static_cast<long>(parse_ll(tok[0], lineno));
    row.obj_proxy = parse_double(tok[1], lineno);
    row.cons_violation = parse_double(tok[2], lineno);
    row.lmo_calls = static_cast<long>(parse_ll(tok[3], lineno));
    row.lmo_skipped = static_cast<long>(parse_ll(tok[4], lineno));
    row.sfo_calls = parse_ll(tok[5], lineno);
    row.szo_calls = parse_ll(tok[6], lineno);
    if (!tok[7].empty()) row.tracking_err = parse_double(tok[7], lineno);
    row.wall_ms = parse_double(tok[8], lineno);
    r.rows.push_back(row);
  }
  if (!saw_columns) throw ParseError("parse_csv: no column header in " + path);
  return r;
}

bool rows_equal_ignoring_wall(const RunRecord& a, const RunRecord& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const RunRow& x = a.rows[i];
    const RunRow& y = b.rows[i];
    const bool track_eq =
        (x.tracking_err.has_value() == y.tracking_err.has_value()) &&
        (!x.tracking_err ||
         std::memcmp(&*x.tracking_err, &*y.tracking_err, sizeof(double)) == 0);
    if (x.k != y.k || x.lmo_calls != y.lmo_calls || x.lmo_skipped != y.lmo_skipped ||
        x.sfo_calls != y.sfo_calls || x.szo_calls != y.szo_calls || !track_eq ||
        std::memcmp(&x.obj_proxy, &y.obj_proxy, sizeof(double)) != 0 ||
        std::memcmp(&x.cons_violation, &y.cons_violation, sizeof(double)) != 0)
      return false;
  }
  return true;
}

SlopeFit fit_loglog_slope(const std::vector<double>& k,
                          const std::vector<double>& val, double k_min,
                          double k_max) {
  if (k.size() != val.size())
    throw DimMismatch("fit_loglog_slope: k and val lengths differ");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < k_min || k[i] > k_max) continue;
    if (!(k[i] > 0.0)) throw NonPositiveValues("fit_loglog_slope: k must be > 0");
    if (!(val[i] > 0.0))
      throw NonPositiveValues("fit_loglog_slope: window contains values <= 0");
    lx.push_back(std::log(k[i]));
    ly.push_back(std::log(val[i]));
  }
  if (lx.size() < 10)
    throw std::invalid_argument("fit_loglog_slope: need at least 10 points in window");

  const double n = double(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0)
    throw std::invalid_argument("fit_loglog_slope: degenerate window");
  SlopeFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  f.points = static_cast<int>(lx.size());
  return f;
}

}  // namespace pffw
