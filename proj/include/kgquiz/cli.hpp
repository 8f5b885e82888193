#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kgq::cli {

// Runs one subcommand. `args` excludes the program name. Returns 0 on
// success, 1 on a domain error (reported on `err` as `<Kind>: <message>`)
// and 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kgq::cli
