#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "nrqnn/linalg.hpp"
#include "nrqnn/noise.hpp"

namespace nrqnn {

inline constexpr std::size_t kMaxQubits = 12;

// Qubit 0 is the most significant bit of a basis index:
//   b = sum_i q_i * 2^(n - 1 - i).
inline std::size_t qubit_mask(std::size_t num_qubits, std::size_t qubit) {
  return std::size_t{1} << (num_qubits - 1 - qubit);
}

/// Superoperator of a single-qubit linear map, row-major over the 2x2 block
/// vectorised as (00, 01, 10, 11) = (row bit, column bit).
using Superop = std::array<Complex, 16>;

Superop identity_superop();
Superop unitary_superop(const ComplexMatrix& u);
Superop kraus_superop(std::span<const ComplexMatrix> operators);
/// `after` applied to the output of `before`.
Superop compose(const Superop& after, const Superop& before);
/// Heisenberg-picture map: Tr(M S(rho)) == Tr(adjoint_map(S)(M) rho).
Superop adjoint_map(const Superop& s);
Superop difference(const Superop& a, const Superop& b);

namespace kernels {

// In-place kernels over a row-major 2^n x 2^n buffer. Callers validate qubits.
void apply_superop(std::span<Complex> rho, std::size_t num_qubits, std::size_t qubit,
                   const Superop& s);

/// rho -> D rho D^dagger for D = diag(phases) on (q1, q2), q1 high-order.
void apply_diagonal_two_qubit(std::span<Complex> rho, std::size_t num_qubits, std::size_t q1,
                              std::size_t q2, const std::array<Complex, 4>& phases);

void apply_cz(std::span<Complex> rho, std::size_t num_qubits, std::size_t q1, std::size_t q2);

void apply_two_qubit_unitary(std::span<Complex> rho, std::size_t num_qubits, std::size_t q1,
                             std::size_t q2, const ComplexMatrix& u);

/// Re Tr(M * S_q(rho)) for Hermitian M, without materialising S_q(rho).
double overlap_after_superop(std::span<const Complex> hermitian, std::span<const Complex> rho,
                             std::size_t num_qubits, std::size_t qubit, const Superop& s);

}  // namespace kernels

class StateVector {
 public:
  /// Requires 2^num_qubits amplitudes with unit norm (1e-10).
  StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes);

  static StateVector ground(std::size_t num_qubits);

  std::size_t num_qubits() const { return num_qubits_; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }

 private:
  std::size_t num_qubits_;
  std::vector<Complex> amplitudes_;
};

class DensityMatrix {
 public:
  /// Validates shape (2^n square), Hermiticity and unit trace within 1e-10.
  explicit DensityMatrix(ComplexMatrix matrix);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return matrix_(r, c); }

  double trace_real() const;
  double purity() const;

  // In-place evolution used by the circuit executor.
  void apply(const Superop& s, std::size_t qubit);
  void apply_cz(std::size_t q1, std::size_t q2);
  void apply_two_qubit(const ComplexMatrix& u, std::size_t q1, std::size_t q2);

  std::span<const Complex> entries() const { return matrix_.entries(); }

 private:
  struct Unchecked {};
  DensityMatrix(Unchecked, std::size_t num_qubits, ComplexMatrix matrix);

  void check_qubit(std::size_t qubit) const;

  std::size_t num_qubits_;
  ComplexMatrix matrix_;

  friend DensityMatrix ground_state(std::size_t num_qubits);
};

/// |0...0><0...0| on 1 <= n <= kMaxQubits qubits.
DensityMatrix ground_state(std::size_t num_qubits);

DensityMatrix apply_single_qubit_unitary(const DensityMatrix& rho, const ComplexMatrix& u,
                                         std::size_t qubit);

/// q1 is the high-order index of u's 4-dimensional space.
DensityMatrix apply_two_qubit_unitary(const DensityMatrix& rho, const ComplexMatrix& u,
                                      std::size_t q1, std::size_t q2);

DensityMatrix apply_kraus(const DensityMatrix& rho, const KrausChannel& channel, std::size_t qubit);

DensityMatrix from_statevector(const StateVector& psi);

/// Applies a 2^k x 2^k unitary to the listed qubits; qubits[0] is u's high-order index.
StateVector statevector_apply(const StateVector& psi, const ComplexMatrix& u,
                              std::span<const std::size_t> qubits);

/// Debug-build consistency check (trace and Hermiticity within 1e-9); no-op under NDEBUG.
void debug_check_state(const DensityMatrix& rho);

}  // namespace nrqnn
