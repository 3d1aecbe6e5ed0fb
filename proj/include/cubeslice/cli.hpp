#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cubeslice::cli {

/// Parameter grid: an explicit comma list "2,3,4" or "lo:hi:steps[:lin|log]".
struct SweepSpec {
  std::vector<double> grid;

  /// ParseError on malformed text, InvalidArgument for an empty grid,
  /// lo >= hi, steps < 2, or a nonpositive lo on a log scale.
  static SweepSpec parse(const std::string& text);
};

/// Comma-separated reals. ParseError on malformed input.
std::vector<double> parse_csv_doubles(const std::string& text);

/// Exit codes: 0 all checks passed, 1 a certification failed, 2 usage or
/// input error (one-line diagnostic on `err`).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cubeslice::cli
