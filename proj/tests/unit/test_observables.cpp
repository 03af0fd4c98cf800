#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "nrqnn/observables.hpp"
#include "nrqnn/state.hpp"
#include "test_support.hpp"

using namespace nrqnn;

namespace {

const Complex I{0.0, 1.0};
constexpr std::array<ObservableKind, 3> kPaulis{ObservableKind::pauli_x, ObservableKind::pauli_y, ObservableKind::pauli_z};

ComplexMatrix diag(std::vector<Complex> v) { return ComplexMatrix::diagonal(v); }

}  // namespace

TEST(PauliMatrix, Values) {
  EXPECT_EQ(pauli_matrix(ObservableKind::pauli_z), diag({1, -1}));
  EXPECT_EQ(pauli_matrix(ObservableKind::pauli_x), (ComplexMatrix{{0, 1}, {1, 0}}));
  EXPECT_EQ(pauli_matrix(ObservableKind::pauli_y), (ComplexMatrix{{0, -I}, {I, 0}}));
  EXPECT_THROW(pauli_matrix(ObservableKind::custom_hermitian), std::invalid_argument);
}

TEST(PauliMatrix, SpectrumIsPlusMinusOne) {
  // Involutory, traceless and Hermitian imply eigenvalues {+1, -1}.
  for (ObservableKind k : kPaulis) {
    const ComplexMatrix p = pauli_matrix(k);
    EXPECT_EQ(matmul(p, p), ComplexMatrix::identity(2));
    EXPECT_EQ(trace(p), Complex(0.0));
    EXPECT_TRUE(is_hermitian(p, 0.0));
  }
}

TEST(CustomHermitian, Examples) {
  EXPECT_EQ(build_custom_hermitian(1), diag({1, 0}));
  EXPECT_EQ(build_custom_hermitian(2), diag({1, 1, 0, 0}));
  for (std::size_t n = 1; n <= 6; ++n) {
    const ComplexMatrix expected = kron(diag({1, 0}), ComplexMatrix::identity(std::size_t{1} << (n - 1)));
    EXPECT_EQ(build_custom_hermitian(n), expected);
  }
  EXPECT_THROW(build_custom_hermitian(0), std::invalid_argument);
}

TEST(CustomHermitian, IsProjector) {
  const ComplexMatrix h = build_custom_hermitian(4);
  EXPECT_EQ(matmul(h, h), h);
}

TEST(Expectation, Examples) {
  EXPECT_DOUBLE_EQ(expectation(ground_state(1), {ObservableKind::pauli_z, 1}, 0), 1.0);
  for (std::size_t n = 1; n <= 5; ++n)
    EXPECT_DOUBLE_EQ(expectation(ground_state(n), {ObservableKind::custom_hermitian, n}), 1.0);
  const DensityMatrix plus(ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}});
  EXPECT_NEAR(expectation(plus, {ObservableKind::pauli_x, 1}, 0), 1.0, 1e-15);
  EXPECT_NEAR(expectation(ground_state(1), {ObservableKind::pauli_x, 1}, 0), 0.0, 1e-15);
}

TEST(Expectation, MatchesDenseTrace) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const DensityMatrix rho = fixtures::random_density(n, 40 + n);
    for (ObservableKind k : kPaulis) {
      const Observable obs{k, n};
      for (std::size_t q = 0; q < n; ++q) {
        const Complex dense = trace(matmul(rho.matrix(), embedded_operator(obs, q)));
        EXPECT_LE(std::abs(dense.imag()), 1e-10);
        EXPECT_NEAR(expectation(rho, obs, q), dense.real(), 1e-12) << to_string(k) << " q=" << q;
      }
    }
    const Observable h{ObservableKind::custom_hermitian, n};
    const Complex dense = trace(matmul(rho.matrix(), embedded_operator(h, std::nullopt)));
    EXPECT_NEAR(expectation(rho, h), dense.real(), 1e-12);
  }
}

TEST(Expectation, HermitianIsQubitZeroGroundProbability) {
  const std::size_t n = 3;
  const DensityMatrix rho = fixtures::random_density(n, 77);
  double first_half = 0.0;
  for (std::size_t i = 0; i < (std::size_t{1} << (n - 1)); ++i) first_half += rho(i, i).real();
  EXPECT_NEAR(expectation(rho, {ObservableKind::custom_hermitian, n}), first_half, 1e-12);
}

TEST(Expectation, Errors) {
  EXPECT_THROW(expectation(ground_state(2), {ObservableKind::pauli_z, 3}, 0), std::invalid_argument);
  EXPECT_THROW(expectation(ground_state(2), {ObservableKind::pauli_z, 2}), std::invalid_argument);
  EXPECT_THROW(expectation(ground_state(2), {ObservableKind::pauli_z, 2}, 2), std::out_of_range);
}

TEST(Names, ParseRoundTrip) {
  for (ObservableKind k : {ObservableKind::pauli_x, ObservableKind::pauli_y, ObservableKind::pauli_z,
                           ObservableKind::custom_hermitian})
    EXPECT_EQ(parse_observable_name(to_string(k)), k);
  EXPECT_EQ(parse_observable_name("hermitian"), ObservableKind::custom_hermitian);
  EXPECT_THROW(parse_observable_name("pauli_w"), std::invalid_argument);
}
