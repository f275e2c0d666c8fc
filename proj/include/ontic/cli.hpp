#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ontic::cli {

/// Runs one command line (without the program name). Results go to `out`
/// unless --out names a file; diagnostics go to `err`.
/// Exit codes: 0 success, 1 computation error (JSON on `err`), 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ontic::cli
