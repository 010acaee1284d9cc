#pragma once

// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace shapeinv::cli {

enum ExitCode : int { kOk = 0, kToleranceFailure = 1, kConfigError = 2 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Rounds to 12 significant digits, the precision of every reported float.
double round12(double v);

}  // namespace shapeinv::cli
