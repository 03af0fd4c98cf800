#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nrqnn/ansatz.hpp"
#include "nrqnn/landscape.hpp"
#include "nrqnn/noise.hpp"
#include "nrqnn/observables.hpp"
#include "nrqnn/trainer.hpp"

namespace nrqnn {

/// Bad configuration: parse failures, unknown keys or names, out-of-range values.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failure while writing or reading run artifacts.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

enum class Mode { train, landscape, bp_variance, validate };

std::string_view to_string(Mode mode);

struct ExperimentConfig {
  std::vector<std::size_t> qubit_counts{4, 6, 8, 10};
  std::size_t layers = kDefaultLayers;
  std::vector<ObservableKind> observables{ObservableKind::pauli_x, ObservableKind::pauli_y, ObservableKind::pauli_z,
                                          ObservableKind::custom_hermitian};
  std::vector<std::optional<NoiseKind>> noise_types{NoiseKind::phase_damping, NoiseKind::phase_flip,
                                                    NoiseKind::amplitude_damping};
  std::vector<double> probabilities{0.0, 0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::size_t iterations = kDefaultIterations;
  double learning_rate = 0.1;
  NoisePolicy noise_policy = NoisePolicy::per_gate;
  std::optional<Mode> mode;
};

/// Parses JSON text; an empty document or `{}` yields all defaults.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Reads NRQNN_SEED_OFFSET (default 0).
std::int64_t seed_offset_from_env();
void apply_seed_offset(ExperimentConfig& config, std::int64_t offset);

/// One point of the experiment grid. Zero probability and the "none" noise
/// type both collapse to the single ideal cell.
struct Cell {
  std::size_t num_qubits;
  ObservableKind observable;
  std::optional<NoiseKind> noise;
  double probability;
  std::uint64_t seed;

  std::string name() const;
  std::string noise_name() const;
};

/// Deterministic order: qubit count, observable, ideal cell then noise types in
/// config order crossed with probabilities, seed.
std::vector<Cell> enumerate_cells(const ExperimentConfig& config);

struct RunRecord {
  Cell cell;
  bool success = false;
  std::string error;
  std::string artifact;  // relative path inside the run directory
  double initial_cost = 0.0;
  double final_cost = 0.0;
  bool converged = false;
  double metric = 0.0;   // flatness (landscape) or gradient variance (bp_variance)
  double seconds = 0.0;  // wall clock; kept out of the deterministic outputs
};

struct RunOptions {
  std::filesystem::path out_dir;
  std::size_t jobs = 1;
  // landscape
  std::size_t axis1 = 0;
  std::size_t axis2 = 1;
  std::size_t resolution = kDefaultResolution;
  ScanRange range{};
  // bp_variance
  std::size_t samples = kDefaultBpSamples;
  std::size_t param_index = 0;
};

/// Executes every cell of the grid for `mode` and writes per-cell artifacts,
/// manifest.json and timings.csv into options.out_dir. A failing cell is
/// recorded and skipped; filesystem failures throw IoError.
std::vector<RunRecord> run(const ExperimentConfig& config, Mode mode, const RunOptions& options);

struct ValidationLine {
  NoiseKind kind;
  double probability;
  double completeness_error;
  bool passed;
};

/// CPTP completeness of every channel at probabilities 0.0, 0.1, ..., 1.0 (tol 1e-12).
std::vector<ValidationLine> run_validate();

// Trace files: header `iteration,cost,grad_l2`, one row per record.
void write_trace_csv(std::ostream& out, const TrainingTrace& trace);
std::vector<IterationRecord> read_trace_csv(const std::filesystem::path& path);

/// Reloads a train run from its manifest, taking costs from the trace files.
std::vector<RunRecord> load_records(const std::filesystem::path& run_dir);

struct SummaryRow {
  std::size_t num_qubits;
  ObservableKind observable;
  std::string noise;
  double probability;
  std::size_t runs;
  double mean_final_cost;
  double convergence_fraction;
  double mean_decrease;
};

/// Per (n, observable, noise, P) over successful records, in first-seen order.
std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void print_summary_table(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace nrqnn
