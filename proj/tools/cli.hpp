#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relaxkit::cli {

enum ExitCode : int { ok = 0, property_failed = 1, input_error = 2, numerical_error = 3 };

/// Runs one command line (without the program name). Data goes to `out`,
/// diagnostics to `err`; `in` is read by `fit` when no data path is given.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace relaxkit::cli
