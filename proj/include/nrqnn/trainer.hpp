#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nrqnn/ansatz.hpp"
#include "nrqnn/noise.hpp"
#include "nrqnn/observables.hpp"
#include "nrqnn/state.hpp"

namespace nrqnn {

/// A run "converges" when its final cost is at most this value.
inline constexpr double kConvergenceThreshold = 0.1;
/// A run shows "no training" when its total cost decrease is at most this value.
inline constexpr double kNoTrainingDecrease = 0.05;

inline constexpr std::size_t kDefaultIterations = 50;
inline constexpr std::size_t kDefaultBpSamples = 200;

enum class CostReduction { mean_qubit_prob0, direct };

// Pauli kinds: C = 1 - (1/n) sum_i (1 + <P_i>) / 2.
// Custom Hermitian: C = 1 - <H>.
// Both are C = 1 - Tr(rho M) for the fixed operator returned by cost_operator().
struct CostSpec {
  Observable observable;

  CostReduction reduction() const {
    return is_pauli(observable.kind) ? CostReduction::mean_qubit_prob0 : CostReduction::direct;
  }
};

double cost(const DensityMatrix& rho, const CostSpec& spec);

/// M such that cost(rho) == 1 - Tr(rho M).
ComplexMatrix cost_operator(const CostSpec& spec);

struct CostAndGradient {
  double cost;
  std::vector<double> gradient;
};

/// Two-term shift rule, dC/dp_k = [C(p + pi/2 e_k) - C(p - pi/2 e_k)] / 2, for every k.
///
/// Both shifted costs are evaluated by splitting the circuit at the shifted
/// gate: one forward pass stores the state entering each rotation, one
/// Heisenberg-picture backward pass carries the cost operator to the gate's
/// output. Exact for any parameter-independent channels.
CostAndGradient cost_and_gradient(const Ansatz& ansatz, std::span<const double> params, const CostSpec& spec,
                                  const std::optional<KrausChannel>& channel);

std::vector<double> gradient_parameter_shift(const Ansatz& ansatz, std::span<const double> params,
                                             const CostSpec& spec, const std::optional<KrausChannel>& channel);

/// One shift-rule component from two complete circuit evaluations.
double parameter_shift_component(const Ansatz& ansatz, std::span<const double> params, const CostSpec& spec,
                                 const std::optional<KrausChannel>& channel, std::size_t index);

/// Central differences [C(p + h e_k) - C(p - h e_k)] / (2h).
std::vector<double> gradient_finite_difference(const Ansatz& ansatz, std::span<const double> params,
                                               const CostSpec& spec, const std::optional<KrausChannel>& channel,
                                               double h);

struct AdamOptions {
  double learning_rate = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::size_t step_count = 0;
  AdamOptions options;

  static AdamState zeros(std::size_t size, AdamOptions options = {});
};

/// Bias-corrected Adam descent step.
std::pair<AdamState, ParameterVector> adam_step(AdamState state, ParameterVector params,
                                                std::span<const double> grads);

struct IterationRecord {
  std::size_t iteration;
  double cost;
  double gradient_l2;
};

struct TrainingTrace {
  std::string fingerprint;
  std::vector<IterationRecord> records;  // iterations + 1 entries, first is the initial cost
  ParameterVector initial_parameters;
  ParameterVector final_parameters;

  double initial_cost() const { return records.front().cost; }
  double final_cost() const { return records.back().cost; }
  double total_decrease() const { return initial_cost() - final_cost(); }
  bool converged() const { return final_cost() <= kConvergenceThreshold; }
};

std::string fingerprint(const Ansatz& ansatz, const CostSpec& spec, const std::optional<KrausChannel>& channel,
                        std::uint64_t seed, std::size_t iterations, const AdamOptions& adam);

/// Adam training from random_parameters(seed). Record t holds the cost and
/// gradient norm at the parameters after t steps.
TrainingTrace train(const Ansatz& ansatz, const CostSpec& spec, const std::optional<KrausChannel>& channel,
                    std::uint64_t seed, std::size_t iterations = kDefaultIterations, AdamOptions adam = {});

/// Sample variance of dC/dp_index over `num_samples` random parameter draws.
/// Sample s uses random_parameters(derive_seed(seed, s)).
double bp_variance_probe(const Ansatz& ansatz, const CostSpec& spec, const std::optional<KrausChannel>& channel,
                         std::size_t num_samples, std::uint64_t seed, std::size_t param_index = 0);

}  // namespace nrqnn
