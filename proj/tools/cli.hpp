#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phcausal/scenario.hpp"

namespace phcausal::cli {

/// Flags shared by every subcommand.
struct GlobalOptions {
  std::optional<std::uint64_t> seed;  ///< overrides the config seed
  std::optional<std::filesystem::path> out_dir;
  bool quiet = false;
};

struct Contrast {
  double x = 1.0;
  double x0 = 0.0;
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  std::vector<Contrast> contrasts;
  std::vector<double> horizon_grid;
  std::uint64_t oracle_n = 1000000;  ///< 0 disables the oracle columns
  std::filesystem::path output_dir = "results";
  bool emit_csv = true;
  bool emit_json = true;
};

/// `scenario` may be an inline object or a path relative to base_dir.
ExperimentConfig parse_experiment_config(std::string_view json_text,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// One line of estimates.csv. Absent optionals are written as empty fields.
struct EstimateRow {
  std::string method;
  std::optional<double> x;
  std::optional<double> x0;
  double t = 0.0;
  double estimate = 0.0;
  std::optional<double> std_err;
  std::optional<double> oracle_value;
  std::optional<double> oracle_se;
  std::optional<double> rel_err;
  bool rarity_flag = false;
};

struct ExperimentResult {
  std::vector<EstimateRow> rows;
  std::string report_json;
};

/// Full pipeline: simulate, fit, estimate and compare with the oracle.
ExperimentResult run_experiment(const ExperimentConfig& config);

std::string format_estimates_csv(const std::vector<EstimateRow>& rows);

// Subcommands. Each writes its data to files and returns 0; failures are
// thrown and turned into exit codes by run().
int cmd_simulate(const std::filesystem::path& config_path,
                 const std::optional<std::filesystem::path>& out_path, const GlobalOptions& g,
                 std::ostream& log);
int cmd_fit(const std::filesystem::path& data_path, const std::vector<std::string>& covariates,
            const std::optional<std::filesystem::path>& out_path, const GlobalOptions& g,
            std::ostream& log);
int cmd_backdoor(const std::filesystem::path& data_path, const std::filesystem::path& fit_path,
                 const std::vector<double>& x, const std::vector<double>& x0, double t,
                 const std::optional<std::filesystem::path>& out_path, const GlobalOptions& g,
                 std::ostream& log);
int cmd_frontdoor(const std::filesystem::path& data_path, Contrast contrast, double t,
                  std::size_t x_bins, std::size_t z_bins,
                  const std::optional<std::filesystem::path>& out_path, const GlobalOptions& g,
                  std::ostream& log);
int cmd_oracle(const std::filesystem::path& config_path, Contrast contrast, std::uint64_t n,
               double t, bool shared_streams,
               const std::optional<std::filesystem::path>& out_path, const GlobalOptions& g,
               std::ostream& log);
int cmd_experiment(const std::filesystem::path& experiment_config_path, const GlobalOptions& g,
                   std::ostream& log);

/// Exit code for an exception escaping a subcommand: 2 for validation
/// failures, 3 for numerical failures, 1 otherwise.
int exit_code_for(const std::exception& e);

/// Parses argv and dispatches. Diagnostics go to err.
int run(int argc, const char* const* argv, std::ostream& err);

}  // namespace phcausal::cli
