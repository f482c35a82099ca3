#pragma once

#include <string>
#include <vector>

namespace piclab::cli {

// Parses and runs one subcommand. Exit status: 0 on success, 1 on validation
// or input errors, 2 on numerical failures.
int run_cli(const std::vector<std::string>& args);

}  // namespace piclab::cli
