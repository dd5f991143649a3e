// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "config.hpp"
#include "multiplier.hpp"

namespace ak {

struct CommandResult {
  ordered_json report;
  int exit_code = 0;
};

// Command pipelines behind the CLI surface:
//   weight                      -> admissibility + growth-bound report
//   spectrum radius|strip|annulus|map|pseudo
//   multiplier norm|commute|symbol|thm4
//   verify                      -> cross-module invariant suite
// Reports embed the config hash and tolerances; with a nonempty out dir the
// report and any raster/strip files are also written to disk.
CommandResult run_command(const std::string& command, const std::string& subcommand,
                          const RunConfig& cfg);

// kernel catalogue ids, composition ids from the config, or a CSV path
Kernel kernel_by_id(const RunConfig& cfg, const Grid& g, const std::string& id);
const std::vector<std::string>& builtin_kernel_ids();

}  // namespace ak
