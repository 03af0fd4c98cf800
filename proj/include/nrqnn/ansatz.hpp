#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nrqnn/linalg.hpp"
#include "nrqnn/noise.hpp"
#include "nrqnn/state.hpp"

namespace nrqnn {

enum class GateKind { rx, ry, cz };

/// Where noise channels act: after every gate on each qubit it touches, once per
/// qubit at the end of every layer, or nowhere.
enum class NoisePolicy { per_gate, per_layer, none };

std::string_view to_string(NoisePolicy policy);
NoisePolicy parse_noise_policy(std::string_view name);

inline constexpr std::size_t kDefaultLayers = 2;

struct GateSpec {
  GateKind kind;
  std::size_t qubit;
  std::size_t partner = 0;      // cz only: always qubit + 1
  std::size_t param_index = 0;  // rx / ry only

  bool operator==(const GateSpec&) const = default;
};

using ParameterVector = std::vector<double>;

/// Layered hardware-efficient circuit: per layer, Rx then Ry on every qubit,
/// followed by CZ on each nearest-neighbour pair.
class Ansatz {
 public:
  Ansatz(std::size_t num_qubits, std::size_t num_layers, std::vector<GateSpec> gates, NoisePolicy policy);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t num_layers() const { return num_layers_; }
  NoisePolicy noise_policy() const { return noise_policy_; }
  const std::vector<GateSpec>& gates() const { return gates_; }

  std::size_t parameter_count() const { return 2 * num_qubits_ * num_layers_; }
  std::size_t single_qubit_gate_count() const;
  std::size_t two_qubit_gate_count() const;

 private:
  std::size_t num_qubits_;
  std::size_t num_layers_;
  std::vector<GateSpec> gates_;
  NoisePolicy noise_policy_;
};

/// Flat index of a rotation angle; which = 0 for Rx, 1 for Ry.
inline std::size_t parameter_index(std::size_t num_qubits, std::size_t layer, std::size_t qubit, std::size_t which) {
  return layer * 2 * num_qubits + 2 * qubit + which;
}

Ansatz build_ansatz(std::size_t num_qubits, std::size_t num_layers = kDefaultLayers,
                    NoisePolicy policy = NoisePolicy::per_gate);

/// i.i.d. uniform angles strictly inside (-pi, pi); identical seeds give identical vectors.
ParameterVector random_parameters(std::size_t num_qubits, std::size_t num_layers, std::uint64_t seed);

ComplexMatrix rotation_matrix(GateKind kind, double angle);
ComplexMatrix cz_matrix();

struct CircuitStep {
  enum class Kind { rotation, cz, channel };
  Kind kind;
  GateKind gate = GateKind::rx;
  std::size_t qubit = 0;
  std::size_t partner = 0;
  std::size_t param_index = 0;
  bool fused_channel = false;  // rotation followed directly by the channel on the same qubit
};

/// An ansatz with its noise insertion points resolved into a flat step list.
class NoisyCircuit {
 public:
  /// Throws when the channel is missing for a noisy policy, present for
  /// NoisePolicy::none, or fails CPTP validation.
  NoisyCircuit(const Ansatz& ansatz, std::optional<KrausChannel> channel);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t parameter_count() const { return parameter_count_; }
  const std::vector<CircuitStep>& steps() const { return steps_; }

  /// Superoperator of a rotation step at `angle`, including a fused channel.
  Superop rotation_superop(const CircuitStep& step, double angle) const;

  void apply_step(DensityMatrix& rho, const CircuitStep& step, std::span<const double> params) const;

  /// Heisenberg-picture step on an observable buffer.
  void apply_step_adjoint(ComplexMatrix& observable, const CircuitStep& step, std::span<const double> params) const;

  DensityMatrix run(std::span<const double> params) const;

 private:
  std::size_t num_qubits_;
  std::size_t parameter_count_;
  std::vector<CircuitStep> steps_;
  Superop channel_{};
  Superop channel_adjoint_{};
};

/// Final state of the ansatz applied to |0...0> with the channel inserted per the policy.
DensityMatrix evolve(const Ansatz& ansatz, std::span<const double> params, const std::optional<KrausChannel>& channel);

}  // namespace nrqnn
