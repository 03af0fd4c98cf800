#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nrqnn/experiment.hpp"

namespace fs = std::filesystem;
using namespace nrqnn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitExecution = 2;

std::string default_run_dir() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &utc);
  return (fs::path("runs") / buf).string();
}

ExperimentConfig prepare_config(const std::string& path, Mode mode) {
  ExperimentConfig config = load_config(path);
  if (config.mode && *config.mode != mode) {
    throw ConfigError("mode: config says \"" + std::string(to_string(*config.mode)) + "\" but subcommand is \"" +
                      std::string(to_string(mode)) + "\"");
  }
  apply_seed_offset(config, seed_offset_from_env());
  return config;
}

int run_grid(const std::string& config_path, Mode mode, RunOptions options) {
  const ExperimentConfig config = prepare_config(config_path, mode);
  for (std::size_t n : config.qubit_counts) {
    const std::size_t count = 2 * n * config.layers;
    if (mode == Mode::landscape && (options.axis1 >= count || options.axis2 >= count)) {
      throw ConfigError("--axis1/--axis2: index outside [0, " + std::to_string(count) + ") for " + std::to_string(n) +
                        " qubits");
    }
    if (mode == Mode::bp_variance && options.param_index >= count) {
      throw ConfigError("--param-index: outside [0, " + std::to_string(count) + ") for " + std::to_string(n) +
                        " qubits");
    }
  }
  if (mode == Mode::landscape && options.axis1 == options.axis2) throw ConfigError("--axis1/--axis2: must differ");
  const std::size_t cells = enumerate_cells(config).size();
  std::cout << "grid: " << cells << " cells (mode " << to_string(mode) << ") -> " << options.out_dir.string()
            << std::endl;

  const std::vector<RunRecord> records = run(config, mode, options);
  std::size_t failed = 0;
  for (const auto& r : records) {
    if (r.success) continue;
    ++failed;
    std::cerr << "cell " << r.cell.name() << " failed: " << r.error << '\n';
  }
  std::cout << "done: " << records.size() - failed << " succeeded, " << failed << " failed" << std::endl;
  if (mode == Mode::train) print_summary_table(std::cout, summarize(records));
  return failed == 0 ? kExitOk : kExitExecution;
}

int run_summarize(const std::string& run_dir) {
  const std::vector<RunRecord> records = load_records(run_dir);
  const std::vector<SummaryRow> rows = summarize(records);
  if (rows.empty()) {
    std::cerr << "summarize: no successful records in " << run_dir << '\n';
    return kExitExecution;
  }
  const fs::path out_path = fs::path(run_dir) / "summary.csv";
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + out_path.string() + " for writing");
  write_summary_csv(out, rows);
  print_summary_table(std::cout, rows);
  std::cout << "wrote " << out_path.string() << std::endl;
  return kExitOk;
}

int run_validate_cli() {
  bool all_passed = true;
  for (const auto& line : run_validate()) {
    std::printf("%-18s p=%.1f completeness_error=%.3e %s\n", std::string(to_string(line.kind)).c_str(),
                line.probability, line.completeness_error, line.passed ? "PASS" : "FAIL");
    all_passed = all_passed && line.passed;
  }
  return all_passed ? kExitOk : kExitExecution;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-resilience experiments for layered variational quantum circuits"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::size_t jobs = 1;
  RunOptions options;

  auto add_grid_options = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--jobs", jobs, "Concurrent cells")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "Run directory (default runs/<UTC timestamp>)");
  };

  CLI::App* train_cmd = app.add_subcommand("train", "Train every grid cell with Adam");
  add_grid_options(train_cmd);

  CLI::App* landscape_cmd = app.add_subcommand("landscape", "Scan the cost over two parameters for every cell");
  add_grid_options(landscape_cmd);
  landscape_cmd->add_option("--axis1", options.axis1, "First swept parameter index");
  landscape_cmd->add_option("--axis2", options.axis2, "Second swept parameter index");
  landscape_cmd->add_option("--resolution", options.resolution, "Grid points per axis")->check(CLI::Range(2, 100000));

  CLI::App* bp_cmd = app.add_subcommand("bp-variance", "Gradient variance over random initializations");
  add_grid_options(bp_cmd);
  bp_cmd->add_option("--samples", options.samples, "Random parameter draws per cell")->check(CLI::Range(2, 100000000));
  bp_cmd->add_option("--param-index", options.param_index, "Parameter whose gradient is probed");

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check CPTP completeness of every channel");

  std::string runs_dir;
  CLI::App* summarize_cmd = app.add_subcommand("summarize", "Aggregate a train run into summary.csv");
  summarize_cmd->add_option("--runs", runs_dir, "Run directory containing manifest.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (validate_cmd->parsed()) return run_validate_cli();
    if (summarize_cmd->parsed()) return run_summarize(runs_dir);

    options.out_dir = out_dir.empty() ? default_run_dir() : out_dir;
    options.jobs = jobs;
    if (train_cmd->parsed()) return run_grid(config_path, Mode::train, options);
    if (landscape_cmd->parsed()) return run_grid(config_path, Mode::landscape, options);
    if (bp_cmd->parsed()) return run_grid(config_path, Mode::bp_variance, options);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitExecution;
  }
  return kExitConfig;
}
