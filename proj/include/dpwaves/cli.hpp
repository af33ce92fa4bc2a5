#pragma once

#include <ostream>
#include <string>

namespace dpwaves::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kUsageError = 2,
  kNumericalFailure = 3,
};

/// Entry point of the dpwaves tool; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Sets the spdlog level from DPWAVES_LOG (trace, debug, info, warn, error,
/// off). Unset means warn.
void configure_logging_from_env();

/// 17 significant digits, enough to round-trip a double.
std::string fmt17(double v);

}  // namespace dpwaves::cli
