#pragma once

#include <string>
#include <vector>

namespace unfold {

// Entry point behind the `unfold` binary; args exclude the program name.
// Returns 0 on success, 1 on usage/input errors, 2 on numeric failures
// (solver divergence, eigensolver breakdown, failed validation).
int run_cli(const std::vector<std::string>& args);

}  // namespace unfold
