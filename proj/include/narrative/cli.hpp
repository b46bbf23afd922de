#pragma once

#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

namespace narrative::cli {

/// Exit codes: 0 success, 1 user error (bad input or flags), 2 internal
/// invariant violation.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Exit code for an exception escaping a subcommand.
int exit_code_for(const std::exception& e);

}  // namespace narrative::cli
