#pragma once

#include <string>
#include <vector>

namespace noma {

/// Entry point shared by the binary and the tests. argv-style arguments
/// without the program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args);

}  // namespace noma
