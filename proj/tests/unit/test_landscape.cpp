#include <gtest/gtest.h>

#include <sstream>

#include "nrqnn/landscape.hpp"

using namespace nrqnn;

namespace {

const CostSpec kPauliX4{{ObservableKind::pauli_x, 4}};

}  // namespace

TEST(Scan, ShapeAndAxisValues) {
  const Ansatz a = build_ansatz(4, 2, NoisePolicy::none);
  const LandscapeGrid g = scan(a, kPauliX4, std::nullopt, 0, 1, ScanRange{}, 5, 0);
  EXPECT_EQ(g.resolution(), 5u);
  EXPECT_EQ(g.costs.size(), 25u);
  EXPECT_EQ(g.axis_values.front(), -std::numbers::pi);
  EXPECT_EQ(g.axis_values.back(), std::numbers::pi);
  EXPECT_EQ(g.base_params, random_parameters(4, 2, 0));
}

TEST(Scan, PointsMatchDirectEvaluation) {
  const Ansatz a = build_ansatz(4, 2, NoisePolicy::per_gate);
  const KrausChannel ch = phase_flip(0.3);
  const LandscapeGrid g = scan(a, kPauliX4, ch, 2, 5, ScanRange{-1.0, 2.0}, 4, 9);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      ParameterVector p = g.base_params;
      p[2] = g.axis_values[i];
      p[5] = g.axis_values[j];
      EXPECT_DOUBLE_EQ(g.at(i, j), cost(evolve(a, p, ch), kPauliX4));
    }
  }
}

TEST(Scan, ConstantLandscape) {
  const Ansatz a = build_ansatz(4, 2, NoisePolicy::per_gate);
  const LandscapeGrid g = scan(a, kPauliX4, amplitude_damping(1.0), 0, 1, ScanRange{}, 2, 0);
  ASSERT_EQ(g.costs.size(), 4u);
  for (double c : g.costs) EXPECT_NEAR(c, g.costs[0], 1e-15);
  EXPECT_LE(flatness(g), 1e-15);
}

TEST(Scan, TransposeUnderAxisSwap) {
  const Ansatz a = build_ansatz(4, 2, NoisePolicy::per_gate);
  const KrausChannel ch = amplitude_damping(0.2);
  const LandscapeGrid g1 = scan(a, kPauliX4, ch, 0, 3, ScanRange{}, 7, 4);
  const LandscapeGrid g2 = scan(a, kPauliX4, ch, 3, 0, ScanRange{}, 7, 4);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j) EXPECT_NEAR(g1.at(i, j), g2.at(j, i), 1e-12);
}

TEST(Scan, Deterministic) {
  const Ansatz a = build_ansatz(4, 2, NoisePolicy::per_gate);
  const LandscapeGrid g1 = scan(a, kPauliX4, phase_damping(0.5), 0, 1, ScanRange{}, 6, 1);
  const LandscapeGrid g2 = scan(a, kPauliX4, phase_damping(0.5), 0, 1, ScanRange{}, 6, 1);
  EXPECT_EQ(g1.costs, g2.costs);
  EXPECT_EQ(g1.fingerprint, g2.fingerprint);
}

TEST(Scan, Rejections) {
  const Ansatz a = build_ansatz(4, 2, NoisePolicy::none);
  EXPECT_THROW(scan(a, kPauliX4, std::nullopt, 1, 1, ScanRange{}, 5, 0), std::invalid_argument);
  EXPECT_THROW(scan(a, kPauliX4, std::nullopt, 0, 16, ScanRange{}, 5, 0), std::out_of_range);
  EXPECT_THROW(scan(a, kPauliX4, std::nullopt, 0, 1, ScanRange{}, 1, 0), std::invalid_argument);
  EXPECT_THROW(scan(a, kPauliX4, std::nullopt, 0, 1, ScanRange{1.0, 1.0}, 5, 0), std::invalid_argument);
}

TEST(Flatness, Examples) {
  LandscapeGrid g;
  g.axis_values = {0.0, 1.0};
  g.costs = {0.25, 0.25, 0.25, 0.25};
  EXPECT_EQ(flatness(g), 0.0);
  g.costs = {0.0, 0.5, 1.0, 0.2};
  EXPECT_EQ(flatness(g), 1.0);
}

TEST(Flatness, NoiseFreePauliXExceedsStrongDephasing) {
  const Ansatz clean = build_ansatz(4, 2, NoisePolicy::none);
  const Ansatz noisy = build_ansatz(4, 2, NoisePolicy::per_gate);
  const double f0 = flatness(scan(clean, kPauliX4, std::nullopt, 0, 1, ScanRange{}, 12, 0));
  const double f9 = flatness(scan(noisy, kPauliX4, phase_damping(0.9), 0, 1, ScanRange{}, 12, 0));
  EXPECT_GT(f0, 0.0);
  EXPECT_GT(f0, f9);
}

TEST(WriteCsv, HeaderAndRows) {
  LandscapeGrid g;
  g.axis_values = {-1.0, 1.0};
  g.costs = {0.1, 0.2, 0.3, 0.4};
  std::ostringstream out;
  write_csv(out, g);
  EXPECT_EQ(out.str(),
            "axis1,axis2,cost\n"
            "-1,-1,0.10000000000000001\n"
            "-1,1,0.20000000000000001\n"
            "1,-1,0.29999999999999999\n"
            "1,1,0.40000000000000002\n");
}
