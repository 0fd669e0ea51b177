#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fdetect::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

/// Runs one CLI invocation (`args` excludes the program name). The report
/// goes to `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fdetect::cli
