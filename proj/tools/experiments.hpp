#pragma once

#include <iosfwd>
#include <string>

#include "config.hpp"

namespace afpk::tool {

struct RunResult {
  bool accepted = true;
  std::string summary;  // one line for the log
};

// Runs the configured experiment, writing CSV (and field) files into
// config.directory. Returns accepted = false when the experiment's own
// tolerance check fails.
RunResult run_experiment(const ExperimentConfig& config, std::ostream& log);

// Column documentation printed by --help.
std::string csv_schemas();

}  // namespace afpk::tool
