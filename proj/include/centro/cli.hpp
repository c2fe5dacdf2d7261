#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace centro::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Runs one command line (args excludes the program name). Results go to
/// --out when given, otherwise to `out`; diagnostics go to `err`.
/// Returns 0 on success, 1 on bad flags or a failed check, 2 on runtime errors.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "re,im;re,im;..." into contour points.
std::vector<std::complex<double>> parse_contour(const std::string& text);

}  // namespace centro::cli
