#pragma once

// Reference-scenario drivers behind `reproduce <id>`: each id regenerates
// the data table for one documented headline scenario and prints a summary
// comparing the produced numbers against their quoted reference values.
//
//   2  two-peak readout success vs amplitude      success_probability_vs_alpha.csv
//   3  multiplexed vs single-channel SKR          skr_vs_alpha.csv
//   4  variant-crossing error vs coherence time   threshold_vs_coherence_time.csv
//   5  three-loss-code SKR vs total distance      skr_vs_distance.csv
//   6  link length meeting a cost target          l0_vs_distance.csv

#include <ostream>
#include <string>
#include <vector>

namespace catrep::reproduce {

std::vector<int> known_ids();

// Writes the scenario table under `out_dir` (created if missing), streams
// the summary to `summary`, and returns the CSV path.  Unknown ids raise
// config::ConfigError.
std::string run(int id, const std::string &out_dir, std::ostream &summary);

} // namespace catrep::reproduce
