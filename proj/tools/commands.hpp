#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tdompc::cli {

/// Exit codes: 0 certified / stable, 2 not certified / unstable, 1 error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotCertified = 2;

/// Runs the tdo_mpc command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tdompc::cli
