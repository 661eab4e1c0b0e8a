#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace adtree::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;

// Runs one command line (program name excluded). Reports go to out,
// diagnostics to err. The default r_min comes from ADTREE_RMIN when set.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adtree::cli
