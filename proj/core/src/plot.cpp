#include "pffw/plot.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "pffw/errors.hpp"

namespace pffw {

namespace {

// fixed palette keyed by algorithm so the same sweep always renders the same
const char* algo_color(const std::string& algo) {
  static const std::map<std::string, const char*> palette = {
      {"most-fw", "#1b6ca8"},      {"most-fw-plus", "#d1495b"},
      {"t-most-fw", "#66a182"},    {"t-most-fw-plus", "#edae49"},
      {"shcgm", "#8d6a9f"},        {"hfw", "#3c3c3c"},
  };
  auto it = palette.find(algo);
  return it == palette.end() ? "#777777" : it->second;
}

}  // namespace

void emit_plot_script(const std::vector<RunRecord>& records,
                      const std::vector<std::string>& csv_paths,
                      const std::string& out_path) {
  if (records.empty()) throw ConfigError("emit_plot_script: no records to plot");
  if (records.size() != csv_paths.size())
    throw DimMismatch("emit_plot_script: records/paths length mismatch");

  std::filesystem::path png = std::filesystem::path(out_path);
  png.replace_extension(".png");

  std::ostringstream os;
  os << "# generated plot script; run with: gnuplot " << out_path << "\n";
  os << "set terminal pngcairo size 1200,520 font 'Sans,10'\n";
  os << "set output '" << png.filename().string() << "'\n";
  os << "set datafile separator comma\n";
  os << "set multiplot layout 1,2\n";
  os << "set logscale xy\n";
  os << "set grid\n";
  os << "set key bottom left font ',8'\n";
  os << "set xlabel 'iteration k'\n";

  auto series = [&](int column) {
    std::ostringstream ps;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (i) ps << ", \\\n     ";
      const RunRecord& r = records[i];
      ps << "'" << csv_paths[i] << "' using 1:" << column
         << " with lines lw 2 lc rgb '" << algo_color(r.algo) << "' title '"
         << r.algo << " seed " << r.seed << "'";
    }
    return ps.str();
  };

  os << "set ylabel 'objective proxy'\n";
  os << "plot " << series(2) << "\n";
  os << "set ylabel 'constraint violation'\n";
  os << "plot " << series(3) << "\n";
  os << "unset multiplot\n";

  std::ofstream out(out_path);
  if (!out) throw ParseError("cannot write plot script '" + out_path + "'");
  out << os.str();
  if (!out) throw ParseError("short write on '" + out_path + "'");
}

}  // namespace pffw
