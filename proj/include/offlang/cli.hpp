#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace offlang {

// Runs the offlang command line. `args` excludes the program name. Exit status:
// 0 success, 1 environment or I/O failure, 2 invalid input or usage.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace offlang
