#pragma once

#include <string>
#include <vector>

#include "pffw/record.hpp"

namespace pffw {

// Writes a self-contained two-panel gnuplot script (log-log objective proxy
// and constraint violation vs k) referencing already-written CSVs; nothing
// is plotted in-process. Series colors are grouped by algorithm so sweeps
// read naturally. records and csv_paths pair up one-to-one.
void emit_plot_script(const std::vector<RunRecord>& records,
                      const std::vector<std::string>& csv_paths,
                      const std::string& out_path);

}  // namespace pffw
