#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pkgsem {

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`. Returns 0 on success, 1 on a domain failure and 2
/// on a usage or parse error.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace pkgsem
