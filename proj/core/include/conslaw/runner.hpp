#pragma once

#include <string>
#include <vector>

#include "conslaw/run_config.hpp"

namespace conslaw {

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> artifacts;  // file names written inside out_dir
  std::string error;                   // nonempty when exit_code != 0
};

/// Executes the configured mode, writing its artifacts (and always a
/// manifest.txt) into config.out_dir. Exit codes: 0 success, 2 configuration
/// error, 3 numerical failure, 4 certificate failure.
RunResult run(const RunConfig& config);

}  // namespace conslaw
