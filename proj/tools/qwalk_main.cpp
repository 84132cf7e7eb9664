// Command-line runner: config-driven simulation, operator rate tables, and
// config validation.

#include <atomic>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qwalk/scenario.hpp"
#include "qwalk/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

void print_error(const qwalk::Error& e) {
  nlohmann::json j;
  j["error"]["code"] = qwalk::errc_name(e.code());
  j["error"]["message"] = e.what();
  if (const auto* schema = dynamic_cast<const qwalk::SchemaError*>(&e)) {
    auto& violations = j["error"]["violations"];
    violations = nlohmann::json::array();
    for (const auto& v : schema->violations()) {
      violations.push_back({{"path", v.path}, {"reason", v.reason}});
    }
  }
  std::cerr << j.dump(2) << std::endl;
}

int exit_code_for(const qwalk::Error& e) {
  return e.is_config_error() ? kExitConfig : kExitNumeric;
}

std::string config_stem(const std::filesystem::path& path) {
  std::string stem = path.stem().string();
  return stem.empty() ? "scenario" : stem;
}

int run_one(const std::filesystem::path& config_path,
            const std::filesystem::path& output_dir) {
  try {
    qwalk::ScenarioConfig config = qwalk::load_config(config_path);
    qwalk::RunOptions options;
    options.output_dir = output_dir;
    options.stem = config_stem(config_path);
    qwalk::RunResult result = qwalk::run(config, options);
    for (const auto& path : result.written) {
      std::cout << "wrote " << path.string() << "\n";
    }
    return kExitOk;
  } catch (const qwalk::Error& e) {
    print_error(e);
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << R"({"error":{"code":"internal","message":")" << e.what()
              << R"("}})" << std::endl;
    return kExitNumeric;
  }
}

int cmd_simulate(const std::vector<std::string>& configs,
                 const std::string& output_dir, int jobs) {
  std::vector<int> codes(configs.size(), kExitOk);
  if (jobs <= 1 || configs.size() <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) {
      codes[i] = run_one(configs[i], output_dir);
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= configs.size()) return;
        codes[i] = run_one(configs[i], output_dir);
      }
    };
    std::vector<std::thread> pool;
    int n = std::min<int>(jobs, static_cast<int>(configs.size()));
    pool.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  int exit = kExitOk;
  for (int code : codes) {
    if (code == kExitConfig) return kExitConfig;
    if (code != kExitOk) exit = code;
  }
  return exit;
}

int cmd_rates(double ks, double kt, double q, std::optional<double> measured,
              bool as_json) {
  try {
    qwalk::ConsistencyReport report =
        qwalk::compare_operators(ks, kt, q, measured);
    std::cout << (as_json ? qwalk::report_json(report)
                          : qwalk::report_text(report));
    return kExitOk;
  } catch (const qwalk::Error& e) {
    print_error(e);
    return exit_code_for(e);
  }
}

int cmd_validate(const std::string& config_path) {
  try {
    qwalk::ScenarioConfig config = qwalk::load_config(config_path);
    std::cout << "OK: " << config_path << "\n"
              << "  sites: " << config.graph.n_sites() << "\n"
              << "  edges: " << config.graph.edges().size() << "\n"
              << "  samples: " << config.integration.samples << "\n";
    if (config.graph.edges().empty()) {
      std::cout << "  warning: graph has no edges; dynamics are trivial\n";
    }
    return kExitOk;
  } catch (const qwalk::Error& e) {
    print_error(e);
    return exit_code_for(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent chemical kinetics on reaction graphs"};
  app.set_version_flag("--version",
                       std::string("qwalk ") + qwalk::kVersion);
  app.require_subcommand(0, 1);

  auto* simulate = app.add_subcommand(
      "simulate", "Propagate scenarios from config files");
  std::vector<std::string> configs;
  std::string output_dir = ".";
  int jobs = 1;
  simulate->add_option("--config", configs, "Scenario config file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--output-dir", output_dir, "Directory for outputs");
  simulate->add_option("--jobs", jobs, "Parallel scenarios")
      ->check(CLI::PositiveNumber);

  auto* rates = app.add_subcommand(
      "rates", "Operator dephasing-rate table for given recombination rates");
  double ks = 0.0, kt = 0.0, q = 0.0;
  double measured_value = 0.0;
  rates->add_option("--ks", ks, "Singlet recombination rate (1/s)")
      ->required();
  rates->add_option("--kt", kt, "Triplet recombination rate (1/s)")
      ->required();
  rates->add_option("--q", q, "Extra dephasing rate (1/s)");
  CLI::Option* measured_opt =
      rates->add_option("--measured", measured_value,
                        "Measured dephasing rate to compare against (1/s)");
  bool rates_json = false;
  rates->add_flag("--json", rates_json, "Emit the machine-readable report");

  auto* validate =
      app.add_subcommand("validate", "Check a config without running it");
  std::string validate_path;
  validate->add_option("--config", validate_path, "Scenario config file")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) return cmd_simulate(configs, output_dir, jobs);
  if (rates->parsed()) {
    std::optional<double> measured;
    if (measured_opt->count() > 0) measured = measured_value;
    return cmd_rates(ks, kt, q, measured, rates_json);
  }
  if (validate->parsed()) return cmd_validate(validate_path);

  std::cout << app.help();
  return kExitOk;
}
