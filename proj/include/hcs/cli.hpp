#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hcs {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitResource = 3;

// Runs one command line (without the program name). Verdicts go to `out` as
// single-line JSON, diagnostics to `err`. Returns kExitOk when a verdict was
// computed, kExitInput on input, format or contract errors and kExitResource
// when a cap was exceeded.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hcs
