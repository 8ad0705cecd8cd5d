#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pccool::cli {

/// Full command line (argv[0] included). Writes results to `out`, diagnostics
/// to `err`, and returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pccool::cli
