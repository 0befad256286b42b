#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace odofock {

/// Exit codes: 0 every check passed, 1 a check failed, 2 malformed input.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// ODOFOCK_TOL when set and valid, otherwise the library default.
double default_tolerance();

}  // namespace odofock
