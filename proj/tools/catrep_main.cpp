// Command-line surface for the cat-code repeater-chain rate model: grid
// sweeps, (alpha, m) optimization, the oracle verification suite, and the
// reference-scenario tables.  Exit codes: 0 success, 1 verification
// failure, 2 configuration error, 3 numeric-domain error.

#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "catrep/config.hpp"
#include "catrep/csv.hpp"
#include "catrep/explorer.hpp"
#include "catrep/fock.hpp"
#include "catrep/rate.hpp"
#include "catrep/reproduce.hpp"
#include "catrep/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

void emit(const catrep::csv::Table &table, const std::string &out_path) {
  if (out_path.empty())
    catrep::csv::write_table(std::cout, table);
  else
    catrep::csv::write_table_file(out_path, table);
}

std::vector<std::string> provenance_comments(const catrep::rate::ProtocolConfig &config) {
  std::vector<std::string> out;
  for (const auto &[key, value] : catrep::config::effective_params(config))
    out.push_back(key + " = " + value);
  return out;
}

int run_sweep(const std::string &config_path, const std::string &out_flag) {
  catrep::config::LoadedConfig loaded = catrep::config::load_config(config_path);
  catrep::explorer::SweepSpec spec;
  spec.base = loaded.protocol;
  if (loaded.has_sweep) {
    spec.param = loaded.sweep_param;
    spec.values = loaded.sweep_values;
  } else {
    // No [sweep] section: a single-point grid over the configured amplitude.
    spec.param = "alpha";
    spec.values = {loaded.protocol.code.alpha};
  }
  std::vector<catrep::rate::RateReport> reports = catrep::explorer::sweep(spec);

  catrep::csv::Table table;
  table.comments.push_back("sweep: param = " + spec.param +
                           ", points = " + std::to_string(spec.values.size()));
  for (auto &line : provenance_comments(spec.base)) table.comments.push_back(line);
  table.columns.push_back("sweep_value");
  for (auto &name : catrep::csv::report_columns()) table.columns.push_back(name);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    std::vector<double> row{spec.values[i]};
    for (double v : catrep::csv::report_row(reports[i])) row.push_back(v);
    table.rows.push_back(std::move(row));
  }
  emit(table, out_flag.empty() ? loaded.output_path : out_flag);
  return kOk;
}

int run_optimize(const std::string &config_path, const std::string &out_flag) {
  catrep::config::LoadedConfig loaded = catrep::config::load_config(config_path);
  catrep::explorer::OptimizeResult best =
      catrep::explorer::optimize(loaded.protocol, loaded.optimize);

  catrep::csv::Table table;
  table.comments.push_back(
      std::string("optimize: objective = ") +
      (loaded.optimize.objective == catrep::explorer::Objective::per_channel_use
           ? "per_channel_use"
           : "rate_bits") +
      ", value = " + catrep::csv::format_number(best.objective_value));
  table.comments.push_back("best alpha = " +
                           catrep::csv::format_number(best.config.code.alpha) +
                           ", best m = " + std::to_string(best.config.m_multiplex));
  for (auto &line : provenance_comments(best.config)) table.comments.push_back(line);
  table.columns = catrep::csv::report_columns();
  table.rows.push_back(catrep::csv::report_row(best.report));
  emit(table, out_flag.empty() ? loaded.output_path : out_flag);
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"cat-code repeater-chain secret-key-rate explorer"};
  app.require_subcommand(1);

  std::string sweep_config, sweep_out;
  CLI::App *sweep = app.add_subcommand("sweep", "Evaluate the rate model over a grid");
  sweep->add_option("--config", sweep_config, "configuration file")->required();
  sweep->add_option("--out", sweep_out, "output CSV path (default: stdout)");

  std::string opt_config, opt_out;
  CLI::App *opt =
      app.add_subcommand("optimize", "Grid-optimize (alpha, m) for the objective");
  opt->add_option("--config", opt_config, "configuration file")->required();
  opt->add_option("--out", opt_out, "output CSV path (default: stdout)");

  app.add_subcommand("verify", "Run the oracle property suite");

  int scenario_id = 0;
  std::string repro_out = ".";
  CLI::App *repro =
      app.add_subcommand("reproduce", "Regenerate a reference scenario table");
  repro->add_option("id", scenario_id, "scenario id (2-6)")->required();
  repro->add_option("--out", repro_out, "output directory (default: current)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (sweep->parsed()) return run_sweep(sweep_config, sweep_out);
    if (opt->parsed()) return run_optimize(opt_config, opt_out);
    if (repro->parsed()) {
      catrep::reproduce::run(scenario_id, repro_out, std::cout);
      return kOk;
    }
    // verify
    return catrep::verify::run_suite(std::cout) ? kOk : kVerifyFailed;
  } catch (const catrep::config::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const catrep::fock::truncation_error &e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::domain_error &e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}
