#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace airygeom {

/// Dispatches one command-line invocation. Returns 0 on success, 1 on domain
/// errors, 2 on unparseable arguments. Honors AIRYGEOM_CACHE_DIR for commands
/// that evaluate amplitudes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace airygeom
