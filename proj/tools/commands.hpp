#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ifsthermo::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 2,
  kExitNumerical = 3,
  kExitResource = 4,
};

// Runs one command line. Results go to --out (written only on success) or to
// out; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ifsthermo::cli
