#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iaspa::cli {

/// Exit codes, one per failure class.
enum ExitCode {
    kOk = 0,
    kFailure = 1,       // verify found violations, or an unexpected error
    kParseError = 2,
    kValidationError = 3,
    kInfeasibleTarget = 4,
    kCapExceeded = 5,
    kIoError = 6,
};

/// Runs one subcommand (build-fields | place | evaluate | compare | baseline |
/// verify | export). argv excludes the program name. Diagnostics are single
/// lines on `err`.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace iaspa::cli
