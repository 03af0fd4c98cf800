#include "nrqnn/ansatz.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nrqnn/rng.hpp"

namespace nrqnn {

namespace {

constexpr double kChannelTol = 1e-12;

}  // namespace

std::string_view to_string(NoisePolicy policy) {
  switch (policy) {
    case NoisePolicy::per_gate: return "per_gate";
    case NoisePolicy::per_layer: return "per_layer";
    case NoisePolicy::none: return "none";
  }
  return "unknown";
}

NoisePolicy parse_noise_policy(std::string_view name) {
  if (name == "per_gate") return NoisePolicy::per_gate;
  if (name == "per_layer") return NoisePolicy::per_layer;
  if (name == "none") return NoisePolicy::none;
  throw std::invalid_argument("unknown noise policy '" + std::string(name) + "'");
}

Ansatz::Ansatz(std::size_t num_qubits, std::size_t num_layers, std::vector<GateSpec> gates, NoisePolicy policy)
    : num_qubits_(num_qubits), num_layers_(num_layers), gates_(std::move(gates)), noise_policy_(policy) {
  for (const auto& g : gates_) {
    if (g.qubit >= num_qubits_) throw std::out_of_range("Ansatz: gate qubit out of range");
    if (g.kind == GateKind::cz) {
      if (g.partner != g.qubit + 1 || g.partner >= num_qubits_) {
        throw std::invalid_argument("Ansatz: CZ must act on an adjacent pair (j, j+1)");
      }
    } else if (g.param_index >= parameter_count()) {
      throw std::out_of_range("Ansatz: parameter index out of range");
    }
  }
}

std::size_t Ansatz::single_qubit_gate_count() const {
  std::size_t count = 0;
  for (const auto& g : gates_) count += g.kind != GateKind::cz;
  return count;
}

std::size_t Ansatz::two_qubit_gate_count() const {
  std::size_t count = 0;
  for (const auto& g : gates_) count += g.kind == GateKind::cz;
  return count;
}

Ansatz build_ansatz(std::size_t num_qubits, std::size_t num_layers, NoisePolicy policy) {
  if (num_qubits < 2) throw std::invalid_argument("build_ansatz: need at least 2 qubits for a CZ pair");
  if (num_qubits > kMaxQubits) throw std::invalid_argument("build_ansatz: too many qubits");
  if (num_layers < 1) throw std::invalid_argument("build_ansatz: need at least one layer");

  std::vector<GateSpec> gates;
  gates.reserve(num_layers * (3 * num_qubits - 1));
  for (std::size_t l = 0; l < num_layers; ++l) {
    for (std::size_t i = 0; i < num_qubits; ++i) {
      gates.push_back({GateKind::rx, i, 0, parameter_index(num_qubits, l, i, 0)});
      gates.push_back({GateKind::ry, i, 0, parameter_index(num_qubits, l, i, 1)});
    }
    for (std::size_t j = 0; j + 1 < num_qubits; ++j) gates.push_back({GateKind::cz, j, j + 1, 0});
  }
  return Ansatz(num_qubits, num_layers, std::move(gates), policy);
}

ParameterVector random_parameters(std::size_t num_qubits, std::size_t num_layers, std::uint64_t seed) {
  constexpr double pi = std::numbers::pi;
  SplitMix64 rng(seed);
  ParameterVector values(2 * num_qubits * num_layers);
  for (auto& v : values) {
    do {
      v = -pi + 2.0 * pi * rng.uniform01();
    } while (!(v > -pi && v < pi));
  }
  return values;
}

ComplexMatrix rotation_matrix(GateKind kind, double angle) {
  if (!std::isfinite(angle)) throw std::invalid_argument("rotation_matrix: non-finite angle");
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  switch (kind) {
    case GateKind::rx: return {{c, Complex{0.0, -s}}, {Complex{0.0, -s}, c}};
    case GateKind::ry: return {{c, -s}, {s, c}};
    case GateKind::cz: break;
  }
  throw std::invalid_argument("rotation_matrix: CZ is not a rotation");
}

ComplexMatrix cz_matrix() {
  const Complex d[] = {1.0, 1.0, 1.0, -1.0};
  return ComplexMatrix::diagonal(d);
}

NoisyCircuit::NoisyCircuit(const Ansatz& ansatz, std::optional<KrausChannel> channel)
    : num_qubits_(ansatz.num_qubits()), parameter_count_(ansatz.parameter_count()) {
  const NoisePolicy policy = ansatz.noise_policy();
  if (policy == NoisePolicy::none && channel) {
    throw std::invalid_argument("NoisyCircuit: channel given but noise policy is none");
  }
  if (policy != NoisePolicy::none && !channel) {
    throw std::invalid_argument("NoisyCircuit: noise policy " + std::string(to_string(policy)) + " needs a channel");
  }
  if (channel) {
    if (!validate_cptp(*channel, kChannelTol)) throw std::invalid_argument("NoisyCircuit: channel is not CPTP");
    channel_ = kraus_superop(channel->operators);
    channel_adjoint_ = adjoint_map(channel_);
  }

  const bool per_gate = policy == NoisePolicy::per_gate;
  const std::size_t gates_per_layer = ansatz.gates().size() / ansatz.num_layers();
  if (policy == NoisePolicy::per_layer && gates_per_layer * ansatz.num_layers() != ansatz.gates().size()) {
    throw std::invalid_argument("NoisyCircuit: per-layer noise needs equally sized layers");
  }
  std::size_t emitted = 0;
  for (const auto& g : ansatz.gates()) {
    if (g.kind == GateKind::cz) {
      steps_.push_back({CircuitStep::Kind::cz, GateKind::cz, g.qubit, g.partner});
      if (per_gate) {
        steps_.push_back({CircuitStep::Kind::channel, GateKind::cz, g.qubit});
        steps_.push_back({CircuitStep::Kind::channel, GateKind::cz, g.partner});
      }
    } else {
      steps_.push_back({CircuitStep::Kind::rotation, g.kind, g.qubit, 0, g.param_index, per_gate});
    }
    ++emitted;
    if (policy == NoisePolicy::per_layer && emitted % gates_per_layer == 0) {
      for (std::size_t q = 0; q < num_qubits_; ++q) steps_.push_back({CircuitStep::Kind::channel, GateKind::cz, q});
    }
  }
}

Superop NoisyCircuit::rotation_superop(const CircuitStep& step, double angle) const {
  const Superop gate = unitary_superop(rotation_matrix(step.gate, angle));
  return step.fused_channel ? compose(channel_, gate) : gate;
}

void NoisyCircuit::apply_step(DensityMatrix& rho, const CircuitStep& step, std::span<const double> params) const {
  switch (step.kind) {
    case CircuitStep::Kind::rotation: rho.apply(rotation_superop(step, params[step.param_index]), step.qubit); break;
    case CircuitStep::Kind::cz: rho.apply_cz(step.qubit, step.partner); break;
    case CircuitStep::Kind::channel: rho.apply(channel_, step.qubit); break;
  }
}

void NoisyCircuit::apply_step_adjoint(ComplexMatrix& observable, const CircuitStep& step,
                                      std::span<const double> params) const {
  switch (step.kind) {
    case CircuitStep::Kind::rotation:
      kernels::apply_superop(observable.entries(), num_qubits_, step.qubit,
                             adjoint_map(rotation_superop(step, params[step.param_index])));
      break;
    case CircuitStep::Kind::cz: kernels::apply_cz(observable.entries(), num_qubits_, step.qubit, step.partner); break;
    case CircuitStep::Kind::channel:
      kernels::apply_superop(observable.entries(), num_qubits_, step.qubit, channel_adjoint_);
      break;
  }
}

DensityMatrix NoisyCircuit::run(std::span<const double> params) const {
  if (params.size() != parameter_count_) {
    throw std::invalid_argument("evolve: expected " + std::to_string(parameter_count_) + " parameters, got " +
                                std::to_string(params.size()));
  }
  DensityMatrix rho = ground_state(num_qubits_);
  for (const auto& step : steps_) apply_step(rho, step, params);
  debug_check_state(rho);
  return rho;
}

DensityMatrix evolve(const Ansatz& ansatz, std::span<const double> params, const std::optional<KrausChannel>& channel) {
  return NoisyCircuit(ansatz, channel).run(params);
}

}  // namespace nrqnn
