#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace alq::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { ok = 0, parameter_error = 1, resource_error = 2 };

// Parses a non-negative integer that may be written in scientific notation
// ("1e6", "2.5e3"); throws ParameterError if the value is not integral.
unsigned long long parse_count(const std::string& text);

// Entry point behind the `alq` binary. The JSON report goes to `out`,
// diagnostics and usage to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace alq::cli
