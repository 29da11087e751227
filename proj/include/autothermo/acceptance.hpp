#pragma once

// Executable acceptance criteria, shared by `autothermo verify` and the
// acceptance test binary.

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace autothermo::acceptance {

struct Check {
  int criterion = 0;
  std::string id;    // e.g. "3.d"
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string detail;
};

struct Options {
  std::set<int> criteria;  // empty: all
  bool slow = false;       // include the alpha = 30 coherent-drive run
};

/// Runs the selected criteria, printing one line per check to `log` as it
/// goes. Returns every check.
std::vector<Check> run(const Options& options, std::ostream& log);

/// Exit status for a set of checks: 0 when nothing failed.
int exit_status(const std::vector<Check>& checks);

}  // namespace autothermo::acceptance
