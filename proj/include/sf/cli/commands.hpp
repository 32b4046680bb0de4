#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sf::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kNumeric = 3,
};

/// Runs `scanpath-forge <args...>` (args exclude the program name) and
/// returns the process exit code. Output and diagnostics go to the streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sf::cli
