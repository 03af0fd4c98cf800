#include "nrqnn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace nrqnn {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {"qubit_counts", "layers",        "observables",  "noise_types",
                                          "probabilities", "seeds",        "iterations",   "learning_rate",
                                          "noise_policy",  "mode"};

Mode parse_mode(std::string_view name) {
  if (name == "train") return Mode::train;
  if (name == "landscape") return Mode::landscape;
  if (name == "bp_variance") return Mode::bp_variance;
  if (name == "validate") return Mode::validate;
  throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

const json& require_array(const json& doc, const std::string& key) {
  const json& value = doc.at(key);
  if (!value.is_array()) throw ConfigError(key + ": expected an array");
  if (value.empty()) throw ConfigError(key + ": must not be empty");
  return value;
}

std::string element_path(const std::string& key, std::size_t i) { return key + "[" + std::to_string(i) + "]"; }

std::uint64_t read_unsigned(const json& value, const std::string& path) {
  if (!value.is_number_integer()) throw ConfigError(path + ": expected an integer");
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  const auto v = value.get<std::int64_t>();
  if (v < 0) throw ConfigError(path + ": must be non-negative");
  return static_cast<std::uint64_t>(v);
}

std::string read_string(const json& value, const std::string& path) {
  if (!value.is_string()) throw ConfigError(path + ": expected a string");
  return value.get<std::string>();
}

template <typename T>
void require_unique(const std::vector<T>& values, const std::string& key) {
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      if (values[i] == values[j]) throw ConfigError(element_path(key, j) + ": duplicate entry");
}

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["qubit_counts"] = c.qubit_counts;
  j["layers"] = c.layers;
  j["observables"] = json::array();
  for (auto k : c.observables) j["observables"].push_back(std::string(to_string(k)));
  j["noise_types"] = json::array();
  for (const auto& k : c.noise_types) j["noise_types"].push_back(k ? std::string(to_string(*k)) : "none");
  j["probabilities"] = c.probabilities;
  j["seeds"] = c.seeds;
  j["iterations"] = c.iterations;
  j["learning_rate"] = c.learning_rate;
  j["noise_policy"] = std::string(to_string(c.noise_policy));
  return j;
}

json cell_to_json(const Cell& cell) {
  return {{"name", cell.name()},
          {"qubits", cell.num_qubits},
          {"observable", std::string(to_string(cell.observable))},
          {"noise", cell.noise_name()},
          {"probability", cell.probability},
          {"seed", cell.seed}};
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

struct CellSetup {
  Ansatz ansatz;
  CostSpec spec;
  std::optional<KrausChannel> channel;
};

CellSetup setup_cell(const Cell& cell, const ExperimentConfig& config) {
  const NoisePolicy policy = cell.noise ? config.noise_policy : NoisePolicy::none;
  std::optional<KrausChannel> channel;
  if (cell.noise) channel = make_channel(*cell.noise, cell.probability);
  return {build_ansatz(cell.num_qubits, config.layers, policy), CostSpec{{cell.observable, cell.num_qubits}},
          std::move(channel)};
}

void execute_cell(const ExperimentConfig& config, Mode mode, const RunOptions& options, RunRecord& record) {
  const Cell& cell = record.cell;
  const CellSetup setup = setup_cell(cell, config);
  switch (mode) {
    case Mode::train: {
      const TrainingTrace trace = train(setup.ansatz, setup.spec, setup.channel, cell.seed, config.iterations,
                                        AdamOptions{.learning_rate = config.learning_rate});
      std::ostringstream csv;
      write_trace_csv(csv, trace);
      make_dirs(options.out_dir / cell.name());
      record.artifact = cell.name() + "/trace.csv";
      write_text_file(options.out_dir / record.artifact, csv.str());
      record.initial_cost = trace.initial_cost();
      record.final_cost = trace.final_cost();
      record.converged = trace.converged();
      break;
    }
    case Mode::landscape: {
      const LandscapeGrid grid = scan(setup.ansatz, setup.spec, setup.channel, options.axis1, options.axis2,
                                      options.range, options.resolution, cell.seed);
      std::ostringstream csv;
      write_csv(csv, grid);
      make_dirs(options.out_dir / cell.name());
      record.artifact = cell.name() + "/landscape.csv";
      write_text_file(options.out_dir / record.artifact, csv.str());
      record.metric = flatness(grid);
      break;
    }
    case Mode::bp_variance:
      record.metric = bp_variance_probe(setup.ansatz, setup.spec, setup.channel, options.samples, cell.seed,
                                        options.param_index);
      record.artifact = "bp_variance.csv";
      break;
    case Mode::validate: throw std::invalid_argument("validate mode has no grid");
  }
}

json record_to_json(const RunRecord& r, Mode mode) {
  json j = cell_to_json(r.cell);
  j["status"] = r.success ? "success" : "failure";
  if (!r.success) {
    j["error"] = r.error;
    return j;
  }
  j["artifact"] = r.artifact;
  switch (mode) {
    case Mode::train:
      j["initial_cost"] = r.initial_cost;
      j["final_cost"] = r.final_cost;
      j["converged"] = r.converged;
      break;
    case Mode::landscape: j["flatness"] = r.metric; break;
    case Mode::bp_variance: j["variance"] = r.metric; break;
    case Mode::validate: break;
  }
  return j;
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::train: return "train";
    case Mode::landscape: return "landscape";
    case Mode::bp_variance: return "bp_variance";
    case Mode::validate: return "validate";
  }
  return "unknown";
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) return config;

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (!kKnownKeys.contains(key)) throw ConfigError(key + ": unknown key");
  }

  if (doc.contains("qubit_counts")) {
    const json& arr = require_array(doc, "qubit_counts");
    config.qubit_counts.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto n = read_unsigned(arr[i], element_path("qubit_counts", i));
      if (n < 2 || n > kMaxQubits) {
        throw ConfigError(element_path("qubit_counts", i) + ": " + std::to_string(n) + " outside [2, " +
                          std::to_string(kMaxQubits) + "]");
      }
      config.qubit_counts.push_back(static_cast<std::size_t>(n));
    }
    require_unique(config.qubit_counts, "qubit_counts");
  }
  if (doc.contains("layers")) {
    const auto l = read_unsigned(doc["layers"], "layers");
    if (l < 1) throw ConfigError("layers: must be at least 1");
    config.layers = static_cast<std::size_t>(l);
  }
  if (doc.contains("observables")) {
    const json& arr = require_array(doc, "observables");
    config.observables.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = element_path("observables", i);
      try {
        config.observables.push_back(parse_observable_name(read_string(arr[i], path)));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
      }
    }
    require_unique(config.observables, "observables");
  }
  if (doc.contains("noise_types")) {
    const json& arr = require_array(doc, "noise_types");
    config.noise_types.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = element_path("noise_types", i);
      try {
        config.noise_types.push_back(parse_noise_name(read_string(arr[i], path)));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
      }
    }
    require_unique(config.noise_types, "noise_types");
  }
  if (doc.contains("probabilities")) {
    const json& arr = require_array(doc, "probabilities");
    config.probabilities.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = element_path("probabilities", i);
      if (!arr[i].is_number()) throw ConfigError(path + ": expected a number");
      const double p = arr[i].get<double>();
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(path + ": " + format_g(p) + " outside [0, 1]");
      config.probabilities.push_back(p);
    }
    require_unique(config.probabilities, "probabilities");
  }
  if (doc.contains("seeds")) {
    const json& arr = require_array(doc, "seeds");
    config.seeds.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) config.seeds.push_back(read_unsigned(arr[i], element_path("seeds", i)));
    require_unique(config.seeds, "seeds");
  }
  if (doc.contains("iterations")) {
    const auto it = read_unsigned(doc["iterations"], "iterations");
    if (it < 1) throw ConfigError("iterations: must be at least 1");
    config.iterations = static_cast<std::size_t>(it);
  }
  if (doc.contains("learning_rate")) {
    if (!doc["learning_rate"].is_number()) throw ConfigError("learning_rate: expected a number");
    const double lr = doc["learning_rate"].get<double>();
    if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("learning_rate: must be positive");
    config.learning_rate = lr;
  }
  if (doc.contains("noise_policy")) {
    const std::string name = read_string(doc["noise_policy"], "noise_policy");
    if (name != "per_gate" && name != "per_layer") {
      throw ConfigError("noise_policy: expected \"per_gate\" or \"per_layer\", got \"" + name + "\"");
    }
    config.noise_policy = parse_noise_policy(name);
  }
  if (doc.contains("mode")) {
    try {
      config.mode = parse_mode(read_string(doc["mode"], "mode"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("mode: ") + e.what());
    }
  }
  return config;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::int64_t seed_offset_from_env() {
  const char* raw = std::getenv("NRQNN_SEED_OFFSET");
  if (raw == nullptr || *raw == '\0') return 0;
  std::size_t used = 0;
  std::int64_t value = 0;
  try {
    value = std::stoll(raw, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != std::string_view(raw).size()) throw ConfigError(std::string("NRQNN_SEED_OFFSET: not an integer: ") + raw);
  return value;
}

void apply_seed_offset(ExperimentConfig& config, std::int64_t offset) {
  for (auto& s : config.seeds) {
    const std::int64_t shifted = static_cast<std::int64_t>(s) + offset;
    if (shifted < 0) throw ConfigError("NRQNN_SEED_OFFSET: shifted seed " + std::to_string(shifted) + " is negative");
    s = static_cast<std::uint64_t>(shifted);
  }
}

std::string Cell::noise_name() const { return noise ? std::string(to_string(*noise)) : "none"; }

std::string Cell::name() const {
  return std::to_string(num_qubits) + "q_" + std::string(to_string(observable)) + "_" + noise_name() + "_p" +
         format_g(probability) + "_s" + std::to_string(seed);
}

std::vector<Cell> enumerate_cells(const ExperimentConfig& config) {
  std::vector<std::pair<std::optional<NoiseKind>, double>> noise_cells;
  const bool ideal =
      std::any_of(config.noise_types.begin(), config.noise_types.end(), [](const auto& k) { return !k; }) ||
      std::any_of(config.probabilities.begin(), config.probabilities.end(), [](double p) { return p == 0.0; });
  if (ideal) noise_cells.emplace_back(std::nullopt, 0.0);
  for (const auto& kind : config.noise_types) {
    if (!kind) continue;
    for (double p : config.probabilities)
      if (p > 0.0) noise_cells.emplace_back(kind, p);
  }

  std::vector<Cell> cells;
  for (std::size_t n : config.qubit_counts)
    for (ObservableKind obs : config.observables)
      for (const auto& [noise, p] : noise_cells)
        for (std::uint64_t seed : config.seeds) cells.push_back({n, obs, noise, p, seed});
  return cells;
}

std::vector<RunRecord> run(const ExperimentConfig& config, Mode mode, const RunOptions& options) {
  if (mode == Mode::validate) throw std::invalid_argument("run: use run_validate for validate mode");
  const std::vector<Cell> cells = enumerate_cells(config);
  make_dirs(options.out_dir);

  std::vector<RunRecord> records(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) records[i].cell = cells[i];

  std::atomic<std::size_t> next{0};
  std::mutex io_mutex;
  std::exception_ptr io_failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= records.size()) return;
      RunRecord& record = records[i];
      const auto start = std::chrono::steady_clock::now();
      try {
        execute_cell(config, mode, options, record);
        record.success = true;
      } catch (const IoError&) {
        std::lock_guard lock(io_mutex);
        if (!io_failure) io_failure = std::current_exception();
        next.store(records.size());
        return;
      } catch (const std::exception& e) {
        record.success = false;
        record.error = e.what();
      }
      record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, records.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (io_failure) std::rethrow_exception(io_failure);

  if (mode == Mode::bp_variance) {
    std::ostringstream csv;
    csv << "qubits,observable,noise,probability,seed,variance\n";
    for (const auto& r : records) {
      if (!r.success) continue;
      csv << r.cell.num_qubits << ',' << to_string(r.cell.observable) << ',' << r.cell.noise_name() << ','
          << format_full(r.cell.probability) << ',' << r.cell.seed << ',' << format_full(r.metric) << '\n';
    }
    write_text_file(options.out_dir / "bp_variance.csv", csv.str());
  }

  json manifest;
  manifest["mode"] = std::string(to_string(mode));
  manifest["config"] = config_to_json(config);
  if (mode == Mode::landscape) {
    manifest["landscape"] = {{"axis1", options.axis1},
                             {"axis2", options.axis2},
                             {"resolution", options.resolution},
                             {"range", {options.range.lo, options.range.hi}}};
  }
  if (mode == Mode::bp_variance) {
    manifest["bp_variance"] = {{"samples", options.samples}, {"param_index", options.param_index}};
  }
  manifest["cells"] = json::array();
  for (const auto& r : records) manifest["cells"].push_back(record_to_json(r, mode));
  write_text_file(options.out_dir / "manifest.json", manifest.dump(2) + "\n");

  std::ostringstream timings;
  timings << "name,seconds\n";
  for (const auto& r : records) timings << r.cell.name() << ',' << format_full(r.seconds) << '\n';
  write_text_file(options.out_dir / "timings.csv", timings.str());
  return records;
}

std::vector<ValidationLine> run_validate() {
  std::vector<ValidationLine> lines;
  for (NoiseKind kind : {NoiseKind::amplitude_damping, NoiseKind::phase_damping, NoiseKind::phase_flip}) {
    for (int step = 0; step <= 10; ++step) {
      const double p = step / 10.0;
      const KrausChannel channel = make_channel(kind, p);
      const double err = completeness_error(channel.operators);
      lines.push_back({kind, p, err, err <= 1e-12});
    }
  }
  return lines;
}

void write_trace_csv(std::ostream& out, const TrainingTrace& trace) {
  out << "iteration,cost,grad_l2\n";
  char line[96];
  for (const auto& r : trace.records) {
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", r.iteration, r.cost, r.gradient_l2);
    out << line;
  }
}

std::vector<IterationRecord> read_trace_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "iteration,cost,grad_l2") {
    throw IoError(path.string() + ": missing trace header");
  }
  std::vector<IterationRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    IterationRecord r{};
    std::istringstream fields(line);
    std::string it, cost, grad;
    if (!std::getline(fields, it, ',') || !std::getline(fields, cost, ',') || !std::getline(fields, grad)) {
      throw IoError(path.string() + ": malformed row '" + line + "'");
    }
    try {
      r.iteration = static_cast<std::size_t>(std::stoull(it));
      r.cost = std::stod(cost);
      r.gradient_l2 = std::stod(grad);
    } catch (const std::exception&) {
      throw IoError(path.string() + ": malformed row '" + line + "'");
    }
    records.push_back(r);
  }
  return records;
}

std::vector<RunRecord> load_records(const fs::path& run_dir) {
  std::ifstream in(run_dir / "manifest.json");
  if (!in) throw IoError("cannot open " + (run_dir / "manifest.json").string());
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("manifest.json: " + std::string(e.what()));
  }
  if (manifest.value("mode", "") != "train") throw IoError("manifest.json: not a train run");

  std::vector<RunRecord> records;
  try {
    for (const auto& c : manifest.at("cells")) {
      RunRecord r;
      r.cell.num_qubits = c.at("qubits").get<std::size_t>();
      r.cell.observable = parse_observable_name(c.at("observable").get<std::string>());
      const std::string noise = c.at("noise").get<std::string>();
      r.cell.noise = parse_noise_name(noise);
      r.cell.probability = c.at("probability").get<double>();
      r.cell.seed = c.at("seed").get<std::uint64_t>();
      r.success = c.at("status").get<std::string>() == "success";
      if (r.success) {
        r.artifact = c.at("artifact").get<std::string>();
        const auto trace = read_trace_csv(run_dir / r.artifact);
        if (trace.empty()) throw IoError(r.artifact + ": empty trace");
        r.initial_cost = trace.front().cost;
        r.final_cost = trace.back().cost;
        r.converged = r.final_cost <= kConvergenceThreshold;
      } else {
        r.error = c.value("error", "");
      }
      records.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw IoError("manifest.json: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw IoError("manifest.json: " + std::string(e.what()));
  }
  return records;
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
  std::vector<SummaryRow> rows;
  std::vector<std::size_t> converged;
  for (const auto& r : records) {
    if (!r.success) continue;
    const std::string noise = r.cell.noise_name();
    auto it = std::find_if(rows.begin(), rows.end(), [&](const SummaryRow& row) {
      return row.num_qubits == r.cell.num_qubits && row.observable == r.cell.observable && row.noise == noise &&
             row.probability == r.cell.probability;
    });
    if (it == rows.end()) {
      rows.push_back({r.cell.num_qubits, r.cell.observable, noise, r.cell.probability, 0, 0.0, 0.0, 0.0});
      converged.push_back(0);
      it = rows.end() - 1;
    }
    ++it->runs;
    it->mean_final_cost += r.final_cost;
    it->mean_decrease += r.initial_cost - r.final_cost;
    converged[static_cast<std::size_t>(it - rows.begin())] += r.converged;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double runs = static_cast<double>(rows[i].runs);
    rows[i].mean_final_cost /= runs;
    rows[i].mean_decrease /= runs;
    rows[i].convergence_fraction = static_cast<double>(converged[i]) / runs;
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "qubits,observable,noise,probability,runs,mean_final_cost,convergence_fraction,mean_decrease\n";
  for (const auto& r : rows) {
    out << r.num_qubits << ',' << to_string(r.observable) << ',' << r.noise << ',' << format_full(r.probability)
        << ',' << r.runs << ',' << format_full(r.mean_final_cost) << ',' << format_full(r.convergence_fraction)
        << ',' << format_full(r.mean_decrease) << '\n';
  }
}

void print_summary_table(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << std::left << std::setw(7) << "qubits" << std::setw(11) << "observable" << std::setw(19) << "noise"
      << std::setw(6) << "P" << std::setw(6) << "runs" << std::setw(12) << "final_cost" << std::setw(11)
      << "converged" << "decrease\n";
  for (const auto& r : rows) {
    char nums[64];
    std::snprintf(nums, sizeof nums, "%-12.4f%-11.2f%.4f", r.mean_final_cost, r.convergence_fraction,
                  r.mean_decrease);
    out << std::left << std::setw(7) << r.num_qubits << std::setw(11) << to_string(r.observable) << std::setw(19)
        << r.noise << std::setw(6) << format_g(r.probability) << std::setw(6) << r.runs << nums << '\n';
  }
}

}  // namespace nrqnn
