#pragma once

#include <string>
#include <vector>

namespace specind {

/// Runs the command-line front end. Exit codes: 0 success, 1 a certified
/// bound check failed, 2 usage error.
int cli_main(const std::vector<std::string>& args);

} // namespace specind
