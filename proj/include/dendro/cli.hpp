#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dendro::cli {

// Runs one subcommand; args excludes the program name. Returns 0 on pass, 1 on a checked
// failure and 2 on an input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dendro::cli
