#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sessub::cli {

/// Runs the checker front end; `args` excludes the program name.
/// Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sessub::cli
