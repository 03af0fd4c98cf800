#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nrqnn/ansatz.hpp"
#include "nrqnn/rng.hpp"
#include "test_support.hpp"

using namespace nrqnn;

TEST(BuildAnsatz, GateCounts) {
  const std::size_t expected[][3] = {{4, 16, 6}, {6, 24, 10}, {8, 32, 14}, {10, 40, 18}};
  for (const auto& row : expected) {
    const Ansatz a = build_ansatz(row[0]);
    EXPECT_EQ(a.single_qubit_gate_count(), row[1]) << "n=" << row[0];
    EXPECT_EQ(a.two_qubit_gate_count(), row[2]) << "n=" << row[0];
    EXPECT_EQ(a.parameter_count(), row[1]);
  }
}

TEST(BuildAnsatz, GeneralCountFormula) {
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::size_t l = 1; l <= 4; ++l) {
      const Ansatz a = build_ansatz(n, l);
      EXPECT_EQ(a.single_qubit_gate_count(), 2 * n * l);
      EXPECT_EQ(a.two_qubit_gate_count(), (n - 1) * l);
    }
  }
}

TEST(BuildAnsatz, SmallestSequence) {
  const Ansatz a = build_ansatz(2, 1);
  const std::vector<GateSpec> expected{
      {GateKind::rx, 0, 0, 0}, {GateKind::ry, 0, 0, 1}, {GateKind::rx, 1, 0, 2}, {GateKind::ry, 1, 0, 3}, {GateKind::cz, 0, 1, 0}};
  EXPECT_EQ(a.gates(), expected);
}

TEST(BuildAnsatz, ParameterLayout) {
  const Ansatz a = build_ansatz(3, 2);
  for (const GateSpec& g : a.gates()) {
    if (g.kind == GateKind::cz) continue;
    EXPECT_EQ(g.param_index % 6 / 2, g.qubit);
    EXPECT_EQ(g.param_index % 2, g.kind == GateKind::rx ? 0u : 1u);
  }
  EXPECT_EQ(parameter_index(3, 1, 2, 1), 11u);
}

TEST(BuildAnsatz, Rejections) {
  EXPECT_THROW(build_ansatz(1), std::invalid_argument);
  EXPECT_THROW(build_ansatz(kMaxQubits + 1), std::invalid_argument);
  EXPECT_THROW(build_ansatz(4, 0), std::invalid_argument);
  EXPECT_THROW(Ansatz(3, 1, {{GateKind::cz, 0, 2, 0}}, NoisePolicy::none), std::invalid_argument);
}

TEST(RandomParameters, DeterministicAndInRange) {
  EXPECT_EQ(random_parameters(4, 2, 42), random_parameters(4, 2, 42));
  EXPECT_NE(random_parameters(4, 2, 42), random_parameters(4, 2, 43));
  const ParameterVector p = random_parameters(10, 2, 7);
  EXPECT_EQ(p.size(), 40u);
  for (double v : p) {
    EXPECT_GT(v, -std::numbers::pi);
    EXPECT_LT(v, std::numbers::pi);
  }
}

TEST(RandomParameters, UniformMean) {
  const ParameterVector p = random_parameters(10, 2500, 1);
  ASSERT_EQ(p.size(), 50000u);
  double mean = 0.0;
  for (double v : p) mean += v;
  mean /= static_cast<double>(p.size());
  EXPECT_NEAR(mean, 0.0, 0.02);
}

TEST(SplitMix64, ReferenceSequence) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(rng.next(), 0x06C45D188009454FULL);
}

TEST(RotationMatrix, Examples) {
  EXPECT_EQ(rotation_matrix(GateKind::rx, 0.0), ComplexMatrix::identity(2));
  const ComplexMatrix ry = rotation_matrix(GateKind::ry, std::numbers::pi);
  EXPECT_NEAR(std::abs(ry(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ry(1, 0)), 1.0, 1e-15);
  const ComplexMatrix full_turn = rotation_matrix(GateKind::rx, 2 * std::numbers::pi);
  EXPECT_LE(max_abs_diff(full_turn, scale(ComplexMatrix::identity(2), -1.0)), 1e-15);
  const DensityMatrix rho = fixtures::random_density(1, 9);
  EXPECT_LE(max_abs_diff(apply_single_qubit_unitary(rho, full_turn, 0).matrix(), rho.matrix()), 1e-12);
  EXPECT_THROW(rotation_matrix(GateKind::cz, 0.0), std::invalid_argument);
}

TEST(Evolve, ZeroParametersLeaveGroundState) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const Ansatz a = build_ansatz(n, 2, NoisePolicy::none);
    const ParameterVector zeros(a.parameter_count(), 0.0);
    EXPECT_LE(max_abs_diff(evolve(a, zeros, std::nullopt).matrix(), ground_state(n).matrix()), 1e-15);
  }
}

TEST(Evolve, FullDampingPerLayerStaysGround) {
  const Ansatz a = build_ansatz(2, 1, NoisePolicy::per_layer);
  const ParameterVector zeros(a.parameter_count(), 0.0);
  EXPECT_LE(max_abs_diff(evolve(a, zeros, amplitude_damping(1.0)).matrix(), ground_state(2).matrix()), 1e-15);
}

TEST(Evolve, ZeroStrengthChannelEqualsNoiseFree) {
  const ParameterVector p = random_parameters(2, 2, 5);
  const DensityMatrix clean = evolve(build_ansatz(2, 2, NoisePolicy::none), p, std::nullopt);
  for (NoisePolicy policy : {NoisePolicy::per_gate, NoisePolicy::per_layer}) {
    for (NoiseKind kind : {NoiseKind::amplitude_damping, NoiseKind::phase_damping, NoiseKind::phase_flip}) {
      const DensityMatrix noisy = evolve(build_ansatz(2, 2, policy), p, make_channel(kind, 0.0));
      EXPECT_LE(max_abs_diff(noisy.matrix(), clean.matrix()), 1e-12);
    }
  }
}

TEST(Evolve, Deterministic) {
  const Ansatz a = build_ansatz(5);
  const ParameterVector p = random_parameters(5, 2, 3);
  EXPECT_EQ(evolve(a, p, phase_damping(0.3)).matrix(), evolve(a, p, phase_damping(0.3)).matrix());
}

TEST(Evolve, PerGateMatchesExplicitKrausSequence) {
  const std::size_t n = 3;
  const Ansatz a = build_ansatz(n, 2, NoisePolicy::per_gate);
  const ParameterVector p = random_parameters(n, 2, 12);
  const KrausChannel ch = amplitude_damping(0.3);
  DensityMatrix rho = ground_state(n);
  for (const GateSpec& g : a.gates()) {
    if (g.kind == GateKind::cz) {
      rho = apply_two_qubit_unitary(rho, cz_matrix(), g.qubit, g.partner);
      rho = apply_kraus(rho, ch, g.qubit);
      rho = apply_kraus(rho, ch, g.partner);
    } else {
      rho = apply_single_qubit_unitary(rho, rotation_matrix(g.kind, p[g.param_index]), g.qubit);
      rho = apply_kraus(rho, ch, g.qubit);
    }
  }
  EXPECT_LE(max_abs_diff(evolve(a, p, ch).matrix(), rho.matrix()), 1e-12);
}

TEST(Evolve, PerLayerMatchesExplicitKrausSequence) {
  const std::size_t n = 3;
  const Ansatz a = build_ansatz(n, 2, NoisePolicy::per_layer);
  const ParameterVector p = random_parameters(n, 2, 13);
  const KrausChannel ch = phase_damping(0.4);
  DensityMatrix rho = ground_state(n);
  std::size_t in_layer = 0;
  for (const GateSpec& g : a.gates()) {
    if (g.kind == GateKind::cz) {
      rho = apply_two_qubit_unitary(rho, cz_matrix(), g.qubit, g.partner);
    } else {
      rho = apply_single_qubit_unitary(rho, rotation_matrix(g.kind, p[g.param_index]), g.qubit);
    }
    if (++in_layer == 3 * n - 1) {
      for (std::size_t q = 0; q < n; ++q) rho = apply_kraus(rho, ch, q);
      in_layer = 0;
    }
  }
  EXPECT_LE(max_abs_diff(evolve(a, p, ch).matrix(), rho.matrix()), 1e-12);
}

TEST(NoisyCircuit, PolicyChannelMismatch) {
  EXPECT_THROW(NoisyCircuit(build_ansatz(2, 1, NoisePolicy::none), phase_flip(0.1)), std::invalid_argument);
  EXPECT_THROW(NoisyCircuit(build_ansatz(2, 1, NoisePolicy::per_gate), std::nullopt), std::invalid_argument);
  EXPECT_THROW(evolve(build_ansatz(2, 1, NoisePolicy::none), ParameterVector(3, 0.0), std::nullopt),
               std::invalid_argument);
}
