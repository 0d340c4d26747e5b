#pragma once

// Command-line front end. run_cli is the whole program minus process
// setup, so tests can drive it with captured streams.

#include <ostream>
#include <string>
#include <vector>

namespace abelian {

/// Exit codes: 0 success or FREE; 1 FORBIDDEN, or a search that ended
/// inconclusive or interrupted; 2 usage and configuration errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace abelian
