#pragma once

#include <string>
#include <vector>

namespace mbdiff_cli {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// One CSV line from already-formatted cells (no quoting; the schemas here
/// never contain commas).
std::string join_row(const std::vector<std::string>& cells);

}  // namespace mbdiff_cli
