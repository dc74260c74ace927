#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace weylkern::cli {

// Arguments exclude the program name. Returns 0 on success, 1 on domain or usage errors and 2 when a
// verification (suite invariant or chi-square test) fails.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace weylkern::cli
