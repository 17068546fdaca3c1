#pragma once

// Flat key=value configuration files with [protocol], [sweep], [optimize]
// and [output] sections.  Unknown sections or keys are hard errors naming
// the offender; values are validated on parse.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "catrep/explorer.hpp"
#include "catrep/rate.hpp"

namespace catrep::config {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct LoadedConfig {
  rate::ProtocolConfig protocol;
  bool has_sweep = false;
  std::string sweep_param = "alpha";
  std::vector<double> sweep_values;
  bool has_optimize = false;
  explorer::OptimizeOptions optimize;
  std::string output_path;
};

LoadedConfig load_config(const std::string &path);
LoadedConfig parse_config_text(const std::string &text, const std::string &origin);

// Every effective protocol parameter as (key, value) pairs, for the CSV
// provenance header.
std::vector<std::pair<std::string, std::string>> effective_params(
    const rate::ProtocolConfig &config);

std::string variant_name(rate::Variant v);
std::string memory_name(rate::MemoryModel m);
std::string usd_name(rate::UsdConvention u);

} // namespace catrep::config
