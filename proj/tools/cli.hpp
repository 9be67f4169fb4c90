#pragma once

/// @file cli.hpp
/// The dftool front end as a callable function.

#include <ostream>
#include <string>
#include <vector>

namespace dft {

/// Exit statuses.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitParse = 2,
  kExitUnmatched = 3,
  kExitQuadrature = 4,
};

/// Runs one dftool invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace dft
