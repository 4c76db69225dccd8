#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gf2::cli {

/// Runs one command line (args[0] is the program name). Reports go to `out`
/// (or to the --output file), diagnostics to `err`. Returns 0 on success, 1
/// when a library module rejects the input, 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gf2::cli
