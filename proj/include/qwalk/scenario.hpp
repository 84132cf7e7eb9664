#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/network.hpp"
#include "qwalk/radical_pair.hpp"

namespace qwalk {

inline constexpr int kSchemaVersion = 1;

enum class IntegrationMethod { exact, stepwise };

struct IntegrationPlan {
  IntegrationMethod method = IntegrationMethod::exact;
  double t_final = 0.0;  // s
  double dt = 0.0;       // s; stepwise only
  int samples = 2;
};

enum class OutputKind { timeseries, rates_report, consistency_report };

/// A fully resolved scenario: graph bound to numeric rates, initial state
/// validated against the graph basis, integration plan checked.
struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  ReactionGraph graph;
  std::map<std::string, double> rates;
  DensityOperator initial;
  IntegrationPlan integration;
  std::vector<OutputKind> outputs;
  std::optional<double> measured_rate;
};

/// Parses and validates the JSON scenario format. Every violation is
/// collected and reported together; unknown keys are errors.
ScenarioConfig parse_config(const std::string& text);

/// parse_config on a file's contents.
ScenarioConfig load_config(const std::filesystem::path& path);

struct RunResult {
  TimeSeries series;
  std::optional<ConsistencyReport> rates_report;
  std::optional<ConsistencyReport> consistency_report;
  std::vector<std::filesystem::path> written;
};

struct RunOptions {
  std::filesystem::path output_dir = ".";
  std::string stem = "scenario";  // prefix for output file names
};

/// Propagates the scenario and writes the requested outputs:
///   <stem>_timeseries.csv
///   <stem>_rates_report.{txt,json}
///   <stem>_consistency_report.{txt,json}
/// Files are written atomically (temp + rename). Identical configs produce
/// byte-identical files.
RunResult run(const ScenarioConfig& config, const RunOptions& options = {});

/// CSV layout: t, then re/im of the upper triangle including the diagonal
/// (re_rho_i_j, im_rho_i_j with 1-based site indices), then trace, min_eig,
/// herm_defect. Values are printed with 17 significant digits.
void write_timeseries_csv(const std::filesystem::path& path,
                          const TimeSeries& series);
std::string timeseries_csv(const TimeSeries& series);

/// Operator comparison for the given rates; measured_rate adds a verdict
/// column.
ConsistencyReport compare_operators(double ks, double kt, double q_extra,
                                    std::optional<double> measured_rate);

std::string report_text(const ConsistencyReport& report);
std::string report_json(const ConsistencyReport& report);

}  // namespace qwalk
