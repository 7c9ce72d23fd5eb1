#pragma once

#include <string>

#include "cnslab/config.hpp"

namespace cnslab {

inline constexpr const char* project_version = "cnslab 1.0.0";

// Executes the configured subcommand, writing CSV artifacts and a manifest
// under config.out_dir.  Returns the process exit code:
//   0 ok, 2 config error, 4 blowup detected (success for blowup hunts),
//   3 any other numeric failure.
int run(const RunConfig& config);

}  // namespace cnslab
