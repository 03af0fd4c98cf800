#include "nrqnn/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "nrqnn/rng.hpp"

namespace nrqnn {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void require_matching_qubits(std::size_t state_qubits, const CostSpec& spec) {
  if (spec.observable.num_qubits != state_qubits) {
    throw std::invalid_argument("cost: observable has " + std::to_string(spec.observable.num_qubits) +
                                " qubits, state has " + std::to_string(state_qubits));
  }
}

double l2_norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

double cost(const DensityMatrix& rho, const CostSpec& spec) {
  require_matching_qubits(rho.num_qubits(), spec);
  if (spec.reduction() == CostReduction::direct) return 1.0 - expectation(rho, spec.observable);
  const std::size_t n = rho.num_qubits();
  double prob0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) prob0 += (1.0 + expectation(rho, spec.observable, i)) / 2.0;
  return 1.0 - prob0 / static_cast<double>(n);
}

ComplexMatrix cost_operator(const CostSpec& spec) {
  const std::size_t n = spec.observable.num_qubits;
  if (spec.reduction() == CostReduction::direct) return build_custom_hermitian(n);

  const std::size_t dim = std::size_t{1} << n;
  const double w = 1.0 / (2.0 * static_cast<double>(n));
  const Complex i{0.0, 1.0};
  ComplexMatrix m(dim, dim);
  for (std::size_t b = 0; b < dim; ++b) m(b, b) = 0.5;
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t bit = qubit_mask(n, q);
    for (std::size_t b = 0; b < dim; ++b) {
      switch (spec.observable.kind) {
        case ObservableKind::pauli_z: m(b, b) += (b & bit) ? -w : w; break;
        case ObservableKind::pauli_x:
          if (!(b & bit)) {
            m(b, b | bit) += w;
            m(b | bit, b) += w;
          }
          break;
        case ObservableKind::pauli_y:
          if (!(b & bit)) {
            m(b, b | bit) += -i * w;
            m(b | bit, b) += i * w;
          }
          break;
        case ObservableKind::custom_hermitian: break;
      }
    }
  }
  return m;
}

CostAndGradient cost_and_gradient(const Ansatz& ansatz, std::span<const double> params, const CostSpec& spec,
                                  const std::optional<KrausChannel>& channel) {
  require_matching_qubits(ansatz.num_qubits(), spec);
  const NoisyCircuit circuit(ansatz, channel);
  if (params.size() != circuit.parameter_count()) {
    throw std::invalid_argument("gradient: expected " + std::to_string(circuit.parameter_count()) +
                                " parameters, got " + std::to_string(params.size()));
  }
  const auto& steps = circuit.steps();
  const std::size_t n = circuit.num_qubits();

  DensityMatrix rho = ground_state(n);
  std::vector<DensityMatrix> entering;  // state entering each rotation step, in order
  entering.reserve(circuit.parameter_count());
  for (const auto& step : steps) {
    if (step.kind == CircuitStep::Kind::rotation) entering.push_back(rho);
    circuit.apply_step(rho, step, params);
  }
  debug_check_state(rho);

  CostAndGradient out{cost(rho, spec), std::vector<double>(params.size(), 0.0)};

  // C(shift) = 1 - Tr(M_k E_k(shift)(rho_k)), with M_k the cost operator pulled
  // back through every step after k.
  ComplexMatrix observable = cost_operator(spec);
  for (std::size_t s = steps.size(); s-- > 0;) {
    const CircuitStep& step = steps[s];
    if (step.kind == CircuitStep::Kind::rotation) {
      const double angle = params[step.param_index];
      const Superop delta = difference(circuit.rotation_superop(step, angle + kHalfPi),
                                       circuit.rotation_superop(step, angle - kHalfPi));
      const double overlap = kernels::overlap_after_superop(observable.entries(), entering.back().entries(), n,
                                                            step.qubit, delta);
      out.gradient[step.param_index] += -0.5 * overlap;
      entering.pop_back();
    }
    if (s > 0) circuit.apply_step_adjoint(observable, step, params);
  }
  return out;
}

std::vector<double> gradient_parameter_shift(const Ansatz& ansatz, std::span<const double> params,
                                             const CostSpec& spec, const std::optional<KrausChannel>& channel) {
  return cost_and_gradient(ansatz, params, spec, channel).gradient;
}

double parameter_shift_component(const Ansatz& ansatz, std::span<const double> params, const CostSpec& spec,
                                 const std::optional<KrausChannel>& channel, std::size_t index) {
  require_matching_qubits(ansatz.num_qubits(), spec);
  if (index >= params.size()) throw std::out_of_range("parameter_shift_component: index out of range");
  const NoisyCircuit circuit(ansatz, channel);
  std::vector<double> shifted(params.begin(), params.end());
  shifted[index] = params[index] + kHalfPi;
  const double plus = cost(circuit.run(shifted), spec);
  shifted[index] = params[index] - kHalfPi;
  const double minus = cost(circuit.run(shifted), spec);
  return (plus - minus) / 2.0;
}

std::vector<double> gradient_finite_difference(const Ansatz& ansatz, std::span<const double> params,
                                               const CostSpec& spec, const std::optional<KrausChannel>& channel,
                                               double h) {
  if (!(h > 0.0)) throw std::invalid_argument("gradient_finite_difference: step must be positive");
  require_matching_qubits(ansatz.num_qubits(), spec);
  const NoisyCircuit circuit(ansatz, channel);
  std::vector<double> shifted(params.begin(), params.end());
  std::vector<double> grad(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    shifted[k] = params[k] + h;
    const double plus = cost(circuit.run(shifted), spec);
    shifted[k] = params[k] - h;
    const double minus = cost(circuit.run(shifted), spec);
    shifted[k] = params[k];
    grad[k] = (plus - minus) / (2.0 * h);
  }
  return grad;
}

AdamState AdamState::zeros(std::size_t size, AdamOptions options) {
  return {std::vector<double>(size, 0.0), std::vector<double>(size, 0.0), 0, options};
}

std::pair<AdamState, ParameterVector> adam_step(AdamState state, ParameterVector params,
                                                std::span<const double> grads) {
  if (params.size() != grads.size() || state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size()) {
    throw std::invalid_argument("adam_step: length mismatch");
  }
  const AdamOptions& o = state.options;
  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  const double bias1 = 1.0 - std::pow(o.beta1, t);
  const double bias2 = 1.0 - std::pow(o.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    state.first_moment[k] = o.beta1 * state.first_moment[k] + (1.0 - o.beta1) * grads[k];
    state.second_moment[k] = o.beta2 * state.second_moment[k] + (1.0 - o.beta2) * grads[k] * grads[k];
    const double m_hat = state.first_moment[k] / bias1;
    const double v_hat = state.second_moment[k] / bias2;
    params[k] -= o.learning_rate * m_hat / (std::sqrt(v_hat) + o.epsilon);
  }
  return {std::move(state), std::move(params)};
}

std::string fingerprint(const Ansatz& ansatz, const CostSpec& spec, const std::optional<KrausChannel>& channel,
                        std::uint64_t seed, std::size_t iterations, const AdamOptions& adam) {
  char buf[320];
  std::snprintf(buf, sizeof buf, "n=%zu;layers=%zu;observable=%s;noise=%s;p=%.17g;policy=%s;seed=%llu;iterations=%zu;lr=%.17g",
                ansatz.num_qubits(), ansatz.num_layers(), std::string(to_string(spec.observable.kind)).c_str(),
                channel ? std::string(to_string(channel->kind)).c_str() : "none",
                channel ? channel->probability : 0.0, std::string(to_string(ansatz.noise_policy())).c_str(),
                static_cast<unsigned long long>(seed), iterations, adam.learning_rate);
  return buf;
}

TrainingTrace train(const Ansatz& ansatz, const CostSpec& spec, const std::optional<KrausChannel>& channel,
                    std::uint64_t seed, std::size_t iterations, AdamOptions adam) {
  if (iterations < 1) throw std::invalid_argument("train: need at least one iteration");
  TrainingTrace trace;
  trace.fingerprint = fingerprint(ansatz, spec, channel, seed, iterations, adam);
  ParameterVector params = random_parameters(ansatz.num_qubits(), ansatz.num_layers(), seed);
  trace.initial_parameters = params;
  trace.records.reserve(iterations + 1);

  AdamState state = AdamState::zeros(params.size(), adam);
  for (std::size_t t = 0;; ++t) {
    CostAndGradient cg = cost_and_gradient(ansatz, params, spec, channel);
    if (!std::isfinite(cg.cost)) throw std::runtime_error("train: non-finite cost at iteration " + std::to_string(t));
    trace.records.push_back({t, cg.cost, l2_norm(cg.gradient)});
    if (t == iterations) break;
    std::tie(state, params) = adam_step(std::move(state), std::move(params), cg.gradient);
  }
  trace.final_parameters = std::move(params);
  return trace;
}

double bp_variance_probe(const Ansatz& ansatz, const CostSpec& spec, const std::optional<KrausChannel>& channel,
                         std::size_t num_samples, std::uint64_t seed, std::size_t param_index) {
  if (num_samples < 2) throw std::invalid_argument("bp_variance_probe: need at least two samples");
  if (param_index >= ansatz.parameter_count()) throw std::out_of_range("bp_variance_probe: parameter index out of range");
  std::vector<double> samples(num_samples);
  for (std::size_t s = 0; s < num_samples; ++s) {
    const ParameterVector params =
        random_parameters(ansatz.num_qubits(), ansatz.num_layers(), derive_seed(seed, s));
    samples[s] = parameter_shift_component(ansatz, params, spec, channel, param_index);
  }
  double mean = 0.0;
  for (double g : samples) mean += g;
  mean /= static_cast<double>(num_samples);
  double ss = 0.0;
  for (double g : samples) ss += (g - mean) * (g - mean);
  return ss / static_cast<double>(num_samples - 1);
}

}  // namespace nrqnn
