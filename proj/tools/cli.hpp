#ifndef VASSRED_TOOLS_CLI_HPP
#define VASSRED_TOOLS_CLI_HPP

#include <iosfwd>

namespace vassred::cli {

/// Exit codes.
enum Exit : int { kOk = 0, kFail = 1, kUsage = 2, kInconclusive = 3 };

/// Runs the command line; all output goes to `out` and `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vassred::cli

#endif  // VASSRED_TOOLS_CLI_HPP
