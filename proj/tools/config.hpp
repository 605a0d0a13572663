#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "afpk/grid.hpp"

namespace afpk::tool {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Kind {
  KernelTable,
  VerifyBounds,
  MassScan,
  Solve,
  Residual,
  McCompare,
  Norms,
  TraceProbe,
  BmoProbe,
  RegularityProbe
};

const char* kind_name(Kind k);

struct BlockConfig {
  int dim = 1;
  double drift = 0.0;
  std::vector<StableTerm> terms;
};

struct ExperimentConfig {
  std::vector<BlockConfig> blocks;

  double alpha = 0.5;
  double beta = 0.5;
  double T = 1.0;
  std::size_t nt = 128;

  std::vector<std::size_t> grid_size;   // empty: per-kind default
  std::vector<double> grid_half_width;  // empty: per-kind default

  Kind kind = Kind::KernelTable;
  std::map<std::string, std::string> params;  // experiment.* other than kind

  std::filesystem::path directory = "afpk-out";
  std::uint64_t seed = 1;
  unsigned threads = 0;

  OperatorSpec spec() const;
  // typed access to experiment.* with a default; records the value used
  double param(const std::string& key, double fallback) const;
  std::size_t param_size(const std::string& key, std::size_t fallback) const;
  std::string param_text(const std::string& key, const std::string& fallback) const;
  std::vector<double> param_list(const std::string& key, const std::vector<double>& fallback) const;

  // `section.key = value` lines after defaults, sorted; includes experiment
  // parameters read so far with their defaults
  std::string effective() const;

 private:
  mutable std::map<std::string, std::string> used_;
};

// Parses the flat format; unknown keys, duplicates and bad values raise ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Experiment keys accepted per kind (without the "experiment." prefix).
const std::vector<std::string>& kind_keys(Kind k);

std::string format_number(double v);  // 17 significant digits
std::string format_shortest(double v);  // shortest round-trip form
std::uint64_t fnv1a(const std::string& s);

}  // namespace afpk::tool
