#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "nrqnn/noise.hpp"
#include "nrqnn/state.hpp"
#include "test_support.hpp"

using namespace nrqnn;

namespace {

const std::array<NoiseKind, 3> kKinds{NoiseKind::amplitude_damping, NoiseKind::phase_damping, NoiseKind::phase_flip};

}  // namespace

TEST(AmplitudeDamping, Operators) {
  const KrausChannel zero = amplitude_damping(0.0);
  ASSERT_EQ(zero.operators.size(), 2u);
  EXPECT_EQ(zero.operators[0], ComplexMatrix::identity(2));
  EXPECT_EQ(zero.operators[1], ComplexMatrix(2, 2));

  const ComplexMatrix decay{{0, 1}, {0, 0}};
  EXPECT_EQ(amplitude_damping(1.0).operators[1], decay);

  const KrausChannel half = amplitude_damping(0.5);
  const ComplexMatrix& k0 = half.operators[0];
  EXPECT_NEAR(k0(0, 0).real(), 1.0, 1e-12);
  EXPECT_NEAR(k0(1, 1).real(), 0.7071067811865476, 1e-12);
  EXPECT_EQ(k0(0, 1), Complex(0.0));
  EXPECT_EQ(k0(1, 0), Complex(0.0));
}

TEST(PhaseDamping, Examples) {
  const DensityMatrix rho = fixtures::random_density(1, 3);
  EXPECT_LE(max_abs_diff(apply_kraus(rho, phase_damping(0.0), 0).matrix(), rho.matrix()), 1e-15);
  const DensityMatrix plus(ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}});
  const DensityMatrix out = apply_kraus(plus, phase_damping(1.0), 0);
  EXPECT_LE(max_abs_diff(out.matrix(), ComplexMatrix{{0.5, 0}, {0, 0.5}}), 1e-12);
}

TEST(PhaseFlip, Examples) {
  const DensityMatrix rho = fixtures::random_density(1, 4);
  EXPECT_LE(max_abs_diff(apply_kraus(rho, phase_flip(0.0), 0).matrix(), rho.matrix()), 1e-15);

  const DensityMatrix flipped = apply_kraus(rho, phase_flip(1.0), 0);
  EXPECT_NEAR(flipped(0, 0).real(), rho(0, 0).real(), 1e-15);
  EXPECT_NEAR(flipped(1, 1).real(), rho(1, 1).real(), 1e-15);
  EXPECT_LE(std::abs(flipped(0, 1) + rho(0, 1)), 1e-15);

  const DensityMatrix partial = apply_kraus(rho, phase_flip(0.3), 0);
  EXPECT_LE(std::abs(partial(0, 1) - 0.4 * rho(0, 1)), 1e-12);
}

TEST(Factories, RejectOutOfRangeProbability) {
  for (NoiseKind kind : kKinds) {
    EXPECT_THROW(make_channel(kind, -0.1), std::invalid_argument);
    EXPECT_THROW(make_channel(kind, 1.5), std::invalid_argument);
  }
}

TEST(ValidateCptp, AllChannelsOnProbabilityGrid) {
  for (NoiseKind kind : kKinds) {
    for (int step = 0; step <= 10; ++step) {
      const KrausChannel channel = make_channel(kind, step / 10.0);
      EXPECT_TRUE(validate_cptp(channel, 1e-12)) << to_string(kind) << " p=" << step / 10.0;
      EXPECT_LE(completeness_error(channel.operators), 1e-12);
    }
  }
}

TEST(ValidateCptp, Examples) {
  const std::vector<ComplexMatrix> shrink{ComplexMatrix{{1, 0}, {0, 0.5}}};
  EXPECT_FALSE(validate_cptp(shrink, 1e-12));
  const std::vector<ComplexMatrix> identity{ComplexMatrix::identity(2)};
  EXPECT_TRUE(validate_cptp(identity, 1e-12));
  EXPECT_THROW(completeness_error(std::vector<ComplexMatrix>{}), std::invalid_argument);
}

TEST(Properties, DephasingChannelsKeepDiagonal) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DensityMatrix rho = fixtures::random_density(1, seed);
    for (double p : {0.1, 0.5, 0.9}) {
      for (const KrausChannel& ch : {phase_damping(p), phase_flip(p)}) {
        const DensityMatrix out = apply_kraus(rho, ch, 0);
        EXPECT_NEAR(out(0, 0).real(), rho(0, 0).real(), 1e-12);
        EXPECT_NEAR(out(1, 1).real(), rho(1, 1).real(), 1e-12);
      }
    }
  }
}

TEST(Properties, AmplitudeDampingFixedPoint) {
  for (int step = 0; step <= 10; ++step) {
    const DensityMatrix out = apply_kraus(ground_state(1), amplitude_damping(step / 10.0), 0);
    EXPECT_LE(max_abs_diff(out.matrix(), ground_state(1).matrix()), 1e-12);
  }
}

TEST(Properties, OffDiagonalContractionFactors) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DensityMatrix rho = fixtures::random_density(1, 50 + seed);
    const double c = std::abs(rho(0, 1));
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      EXPECT_NEAR(std::abs(apply_kraus(rho, phase_damping(p), 0)(0, 1)), std::sqrt(1 - p) * c, 1e-12);
      EXPECT_NEAR(std::abs(apply_kraus(rho, phase_flip(p), 0)(0, 1)), std::abs(1 - 2 * p) * c, 1e-12);
      EXPECT_NEAR(std::abs(apply_kraus(rho, amplitude_damping(p), 0)(0, 1)), std::sqrt(1 - p) * c, 1e-12);
    }
  }
}

TEST(Names, ParseRoundTrip) {
  for (NoiseKind kind : kKinds) EXPECT_EQ(parse_noise_name(to_string(kind)), kind);
  EXPECT_EQ(parse_noise_name("none"), std::nullopt);
  EXPECT_THROW(parse_noise_name("depolarizing"), std::invalid_argument);
}
