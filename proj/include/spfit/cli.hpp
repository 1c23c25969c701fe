#pragma once

#include <iosfwd>

namespace spfit {

/// Exit codes: 0 success, 1 usage error, 2 solver non-convergence,
/// 3 reference comparison failed.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spfit
