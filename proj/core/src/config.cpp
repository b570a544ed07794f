#include "pffw/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "pffw/errors.hpp"

namespace pffw {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::string normalize_key(std::string k) {
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

double parse_real(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ParseError("config key '" + key + "': bad number '" + v + "'");
  return x;
}

long long parse_int(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ParseError("config key '" + key + "': bad integer '" + v + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ParseError("config key '" + key + "': bad seed '" + v + "'");
  return static_cast<std::uint64_t>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ParseError("config key '" + key + "': bad boolean '" + v + "'");
}

}  // namespace

void apply_config_kv(RunConfig& c, const std::string& raw_key,
                     const std::string& value) {
  const std::string key = normalize_key(raw_key);
  if (key == "algo") c.algo = value;
  else if (key == "oracle") c.oracle = value;
  else if (key == "problem") c.problem = value;
  else if (key == "mu_c") c.mu_c = parse_real(key, value);
  else if (key == "tau0") c.tau0 = parse_real(key, value);
  else if (key == "iters") c.iters = parse_int(key, value);
  else if (key == "batch") c.batch = static_cast<int>(parse_int(key, value));
  else if (key == "batch_frac") c.batch_frac = parse_real(key, value);
  else if (key == "constraint_frac") c.constraint_frac = parse_real(key, value);
  else if (key == "seed") { c.seed = parse_u64(key, value); c.seed_set = true; }
  else if (key == "seeds") c.seeds = static_cast<int>(parse_int(key, value));
  else if (key == "log_every") c.log_every = parse_int(key, value);
  else if (key == "out") c.out = value;
  else if (key == "swap_radii") c.swap_radii = parse_bool(key, value);
  else if (key == "emit_plot") c.emit_plot = parse_bool(key, value);
  else if (key == "track_error") c.track_error = parse_bool(key, value);
  else if (key == "data_seed") c.data_seed = parse_u64(key, value);
  else if (key == "dim") c.dim = parse_int(key, value);
  else if (key == "rank") c.rank = parse_int(key, value);
  else if (key == "clusters") c.clusters = static_cast<int>(parse_int(key, value));
  else if (key == "features") c.features = parse_int(key, value);
  else if (key == "chords") c.chords = parse_int(key, value);
  else if (key == "noise") c.noise = parse_real(key, value);
  else if (key == "graph") c.graph = value;
  else if (key == "points") c.points = value;
  else if (key == "triangles") c.triangles = value;
  else throw ParseError("unknown config key '" + raw_key + "'");
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'");
  RunConfig c;
  std::set<std::string> seen;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string body = trim(line);
    if (body.empty() || body[0] == '#' || body[0] == ';') continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw ParseError("config '" + path + "' line " + std::to_string(line_no) +
                       ": expected key = value");
    const std::string key = trim(body.substr(0, eq));
    const std::string val = trim(body.substr(eq + 1));
    if (key.empty())
      throw ParseError("config '" + path + "' line " + std::to_string(line_no) +
                       ": empty key");
    if (!seen.insert(normalize_key(key)).second)
      throw ParseError("config '" + path + "' line " + std::to_string(line_no) +
                       ": duplicate key '" + key + "'");
    try {
      apply_config_kv(c, key, val);
    } catch (const ParseError& e) {
      throw ParseError("config '" + path + "' line " + std::to_string(line_no) +
                       ": " + e.what());
    }
  }
  return c;
}

void validate_config(const RunConfig& c) {
  if (c.iters < 1) throw ConfigError("iters must be >= 1");
  if (c.batch < 1) throw ConfigError("batch must be >= 1");
  if (!(c.batch_frac > 0.0 && c.batch_frac <= 1.0))
    throw ConfigError("batch-frac must lie in (0, 1]");
  if (!(c.constraint_frac > 0.0 && c.constraint_frac <= 1.0))
    throw ConfigError("constraint-frac must lie in (0, 1]");
  if (!(c.mu_c > 0.0)) throw ConfigError("mu-c must be > 0");
  if (c.tau0 < 0.0) throw ConfigError("tau0 must be >= 0");
  if (c.log_every < 1) throw ConfigError("log-every must be >= 1");
  if (c.seeds < 1) throw ConfigError("seeds must be >= 1");
  if (c.problem != "sparse-cov" && c.problem != "kmeans" &&
      c.problem != "sparsest-cut" && c.problem != "quad")
    throw ConfigError("unknown problem '" + c.problem + "'");
  if (c.oracle != "sfo" && c.oracle != "szo")
    throw ConfigError("unknown oracle '" + c.oracle + "'");
  if (c.triangles != "ordered" && c.triangles != "i-less-k" &&
      c.triangles != "ilessk" && c.triangles != "unordered")
    throw ConfigError("unknown triangle convention '" + c.triangles + "'");
  if (c.dim < 1) throw ConfigError("dim must be >= 1");
  if (c.rank < 1) throw ConfigError("rank must be >= 1");
  if (c.clusters < 1) throw ConfigError("clusters must be >= 1");
  if (c.features < 1) throw ConfigError("features must be >= 1");
  if (c.chords < 0) throw ConfigError("chords must be >= 0");
  if (c.noise < 0.0) throw ConfigError("noise must be >= 0");
}

}  // namespace pffw
