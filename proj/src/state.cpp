#include "nrqnn/state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nrqnn {

namespace {

constexpr double kStateTol = 1e-10;
constexpr double kUnitaryTol = 1e-10;
constexpr double kChannelTol = 1e-12;

std::size_t log2_exact(std::size_t dim) {
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if ((std::size_t{1} << n) != dim) throw ShapeError("dimension " + std::to_string(dim) + " is not a power of two");
  return n;
}

void require_qubit_count(std::size_t num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count " + std::to_string(num_qubits) + " outside [1, " +
                                std::to_string(kMaxQubits) + "]");
  }
}

// Index of a 4-element block entry (row bit, col bit).
inline Complex apply_row(const Superop& s, std::size_t row, Complex a, Complex b, Complex c, Complex d) {
  return s[4 * row] * a + s[4 * row + 1] * b + s[4 * row + 2] * c + s[4 * row + 3] * d;
}

bool is_diagonal(const Superop& s) {
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i != j && s[4 * i + j] != Complex{}) return false;
    }
  }
  return true;
}

}  // namespace

Superop identity_superop() {
  Superop s{};
  for (std::size_t i = 0; i < 4; ++i) s[5 * i] = 1.0;
  return s;
}

Superop unitary_superop(const ComplexMatrix& u) {
  const ComplexMatrix ops[] = {u};
  return kraus_superop(ops);
}

Superop kraus_superop(std::span<const ComplexMatrix> operators) {
  // vec(K rho K^dagger)[(i,j)] = sum_{k,l} K_ik conj(K_jl) rho_kl
  Superop s{};
  for (const auto& k : operators) {
    if (k.rows() != 2 || k.cols() != 2) throw ShapeError("single-qubit operator must be 2x2");
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t a = 0; a < 2; ++a)
          for (std::size_t b = 0; b < 2; ++b) s[4 * (2 * i + j) + (2 * a + b)] += k(i, a) * std::conj(k(j, b));
  }
  return s;
}

Superop compose(const Superop& after, const Superop& before) {
  Superop out{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t j = 0; j < 4; ++j) out[4 * i + j] += after[4 * i + k] * before[4 * k + j];
  return out;
}

Superop adjoint_map(const Superop& s) {
  // E^dagger(M)_ab = sum_ij S[(i,j),(b,a)] M_ji
  Superop out{};
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) out[4 * (2 * a + b) + (2 * j + i)] = s[4 * (2 * i + j) + (2 * b + a)];
  return out;
}

Superop difference(const Superop& a, const Superop& b) {
  Superop out{};
  for (std::size_t i = 0; i < 16; ++i) out[i] = a[i] - b[i];
  return out;
}

namespace kernels {

void apply_superop(std::span<Complex> rho, std::size_t num_qubits, std::size_t qubit, const Superop& s) {
  const std::size_t dim = std::size_t{1} << num_qubits;
  const std::size_t bit = qubit_mask(num_qubits, qubit);
  Complex* data = rho.data();

  if (is_diagonal(s)) {
    const Complex d[4] = {s[0], s[5], s[10], s[15]};
    for (std::size_t r = 0; r < dim; ++r) {
      Complex* row = data + r * dim;
      const std::size_t rb = (r & bit) ? 2 : 0;
      for (std::size_t c = 0; c < dim; ++c) row[c] *= d[rb + ((c & bit) ? 1 : 0)];
    }
    return;
  }

  for (std::size_t rhi = 0; rhi < dim; rhi += 2 * bit) {
    for (std::size_t rlo = 0; rlo < bit; ++rlo) {
      Complex* row0 = data + (rhi + rlo) * dim;
      Complex* row1 = row0 + bit * dim;
      for (std::size_t chi = 0; chi < dim; chi += 2 * bit) {
        for (std::size_t clo = 0; clo < bit; ++clo) {
          const std::size_t c0 = chi + clo;
          const std::size_t c1 = c0 + bit;
          const Complex a = row0[c0], b = row0[c1], c = row1[c0], d = row1[c1];
          row0[c0] = apply_row(s, 0, a, b, c, d);
          row0[c1] = apply_row(s, 1, a, b, c, d);
          row1[c0] = apply_row(s, 2, a, b, c, d);
          row1[c1] = apply_row(s, 3, a, b, c, d);
        }
      }
    }
  }
}

void apply_diagonal_two_qubit(std::span<Complex> rho, std::size_t num_qubits, std::size_t q1,
                              std::size_t q2, const std::array<Complex, 4>& phases) {
  const std::size_t dim = std::size_t{1} << num_qubits;
  const std::size_t m1 = qubit_mask(num_qubits, q1);
  const std::size_t m2 = qubit_mask(num_qubits, q2);
  auto local = [&](std::size_t b) { return ((b & m1) ? 2u : 0u) + ((b & m2) ? 1u : 0u); };
  std::array<Complex, 4> conj_phases;
  for (std::size_t i = 0; i < 4; ++i) conj_phases[i] = std::conj(phases[i]);
  Complex* data = rho.data();
  for (std::size_t r = 0; r < dim; ++r) {
    const Complex pr = phases[local(r)];
    Complex* row = data + r * dim;
    for (std::size_t c = 0; c < dim; ++c) row[c] *= pr * conj_phases[local(c)];
  }
}

void apply_cz(std::span<Complex> rho, std::size_t num_qubits, std::size_t q1, std::size_t q2) {
  // Entry (r, c) flips sign iff exactly one of r, c has both bits set.
  const std::size_t dim = std::size_t{1} << num_qubits;
  const std::size_t both = qubit_mask(num_qubits, q1) | qubit_mask(num_qubits, q2);
  Complex* data = rho.data();
  for (std::size_t r = 0; r < dim; ++r) {
    const bool rset = (r & both) == both;
    Complex* row = data + r * dim;
    for (std::size_t c = 0; c < dim; ++c) {
      if (rset != ((c & both) == both)) row[c] = -row[c];
    }
  }
}

void apply_two_qubit_unitary(std::span<Complex> rho, std::size_t num_qubits, std::size_t q1,
                             std::size_t q2, const ComplexMatrix& u) {
  const std::size_t dim = std::size_t{1} << num_qubits;
  const std::size_t m1 = qubit_mask(num_qubits, q1);
  const std::size_t m2 = qubit_mask(num_qubits, q2);
  const std::size_t offsets[4] = {0, m2, m1, m1 | m2};
  Complex* data = rho.data();
  Complex tmp[4];

  // rho -> U rho: mix row quartets.
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & (m1 | m2)) continue;
    for (std::size_t c = 0; c < dim; ++c) {
      for (std::size_t i = 0; i < 4; ++i) {
        tmp[i] = 0.0;
        for (std::size_t k = 0; k < 4; ++k) tmp[i] += u(i, k) * data[(base + offsets[k]) * dim + c];
      }
      for (std::size_t i = 0; i < 4; ++i) data[(base + offsets[i]) * dim + c] = tmp[i];
    }
  }
  // rho -> rho U^dagger: mix column quartets.
  for (std::size_t r = 0; r < dim; ++r) {
    Complex* row = data + r * dim;
    for (std::size_t base = 0; base < dim; ++base) {
      if (base & (m1 | m2)) continue;
      for (std::size_t j = 0; j < 4; ++j) {
        tmp[j] = 0.0;
        for (std::size_t k = 0; k < 4; ++k) tmp[j] += row[base + offsets[k]] * std::conj(u(j, k));
      }
      for (std::size_t j = 0; j < 4; ++j) row[base + offsets[j]] = tmp[j];
    }
  }
}

double overlap_after_superop(std::span<const Complex> hermitian, std::span<const Complex> rho,
                             std::size_t num_qubits, std::size_t qubit, const Superop& s) {
  // Tr(M X) = sum_ij conj(M_ij) X_ij when M is Hermitian.
  const std::size_t dim = std::size_t{1} << num_qubits;
  const std::size_t bit = qubit_mask(num_qubits, qubit);
  const Complex* data = rho.data();
  const Complex* m = hermitian.data();
  double total = 0.0;
  for (std::size_t rhi = 0; rhi < dim; rhi += 2 * bit) {
    for (std::size_t rlo = 0; rlo < bit; ++rlo) {
      const std::size_t r0 = rhi + rlo;
      const Complex* row0 = data + r0 * dim;
      const Complex* row1 = row0 + bit * dim;
      const Complex* mrow0 = m + r0 * dim;
      const Complex* mrow1 = mrow0 + bit * dim;
      for (std::size_t chi = 0; chi < dim; chi += 2 * bit) {
        for (std::size_t clo = 0; clo < bit; ++clo) {
          const std::size_t c0 = chi + clo;
          const std::size_t c1 = c0 + bit;
          const Complex a = row0[c0], b = row0[c1], c = row1[c0], d = row1[c1];
          total += (std::conj(mrow0[c0]) * apply_row(s, 0, a, b, c, d)).real() +
                   (std::conj(mrow0[c1]) * apply_row(s, 1, a, b, c, d)).real() +
                   (std::conj(mrow1[c0]) * apply_row(s, 2, a, b, c, d)).real() +
                   (std::conj(mrow1[c1]) * apply_row(s, 3, a, b, c, d)).real();
        }
      }
    }
  }
  return total;
}

}  // namespace kernels

StateVector::StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  require_qubit_count(num_qubits_);
  if (amplitudes_.size() != (std::size_t{1} << num_qubits_)) {
    throw ShapeError("StateVector: expected " + std::to_string(std::size_t{1} << num_qubits_) +
                     " amplitudes, got " + std::to_string(amplitudes_.size()));
  }
  double norm = 0.0;
  for (const auto& a : amplitudes_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw std::invalid_argument("StateVector: non-finite amplitude");
    norm += std::norm(a);
  }
  if (std::abs(norm - 1.0) > kStateTol) {
    throw std::invalid_argument("StateVector: squared norm " + std::to_string(norm) + " is not 1");
  }
}

StateVector StateVector::ground(std::size_t num_qubits) {
  require_qubit_count(num_qubits);
  std::vector<Complex> amps(std::size_t{1} << num_qubits);
  amps[0] = 1.0;
  return StateVector(num_qubits, std::move(amps));
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix) : num_qubits_(0), matrix_(std::move(matrix)) {
  if (!matrix_.is_square()) throw ShapeError("DensityMatrix: matrix must be square");
  num_qubits_ = log2_exact(matrix_.rows());
  require_qubit_count(num_qubits_);
  if (!is_hermitian(matrix_, kStateTol)) throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
  if (std::abs(trace(matrix_) - Complex{1.0}) > kStateTol) {
    throw std::invalid_argument("DensityMatrix: trace is not 1");
  }
}

DensityMatrix::DensityMatrix(Unchecked, std::size_t num_qubits, ComplexMatrix matrix)
    : num_qubits_(num_qubits), matrix_(std::move(matrix)) {}

double DensityMatrix::trace_real() const { return trace(matrix_).real(); }

double DensityMatrix::purity() const {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  double sum = 0.0;
  for (const auto& z : matrix_.entries()) sum += std::norm(z);
  return sum;
}

void DensityMatrix::check_qubit(std::size_t qubit) const {
  if (qubit >= num_qubits_) {
    throw std::out_of_range("qubit " + std::to_string(qubit) + " out of range for " +
                            std::to_string(num_qubits_) + " qubits");
  }
}

void DensityMatrix::apply(const Superop& s, std::size_t qubit) {
  check_qubit(qubit);
  kernels::apply_superop(matrix_.entries(), num_qubits_, qubit, s);
}

void DensityMatrix::apply_cz(std::size_t q1, std::size_t q2) {
  check_qubit(q1);
  check_qubit(q2);
  if (q1 == q2) throw std::invalid_argument("two-qubit gate needs distinct qubits");
  kernels::apply_cz(matrix_.entries(), num_qubits_, q1, q2);
}

void DensityMatrix::apply_two_qubit(const ComplexMatrix& u, std::size_t q1, std::size_t q2) {
  check_qubit(q1);
  check_qubit(q2);
  if (q1 == q2) throw std::invalid_argument("two-qubit gate needs distinct qubits");
  if (u.rows() != 4 || u.cols() != 4) throw ShapeError("two-qubit unitary must be 4x4");
  bool diagonal = true;
  for (std::size_t i = 0; i < 4 && diagonal; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j && u(i, j) != Complex{}) diagonal = false;
  if (diagonal) {
    kernels::apply_diagonal_two_qubit(matrix_.entries(), num_qubits_, q1, q2, {u(0, 0), u(1, 1), u(2, 2), u(3, 3)});
  } else {
    kernels::apply_two_qubit_unitary(matrix_.entries(), num_qubits_, q1, q2, u);
  }
}

DensityMatrix ground_state(std::size_t num_qubits) {
  require_qubit_count(num_qubits);
  const std::size_t dim = std::size_t{1} << num_qubits;
  ComplexMatrix m(dim, dim);
  m(0, 0) = 1.0;
  return DensityMatrix(DensityMatrix::Unchecked{}, num_qubits, std::move(m));
}

DensityMatrix apply_single_qubit_unitary(const DensityMatrix& rho, const ComplexMatrix& u, std::size_t qubit) {
  if (u.rows() != 2 || u.cols() != 2) throw ShapeError("single-qubit unitary must be 2x2");
  if (!is_unitary(u, kUnitaryTol)) throw std::invalid_argument("apply_single_qubit_unitary: matrix is not unitary");
  DensityMatrix out = rho;
  out.apply(unitary_superop(u), qubit);
  debug_check_state(out);
  return out;
}

DensityMatrix apply_two_qubit_unitary(const DensityMatrix& rho, const ComplexMatrix& u, std::size_t q1,
                                      std::size_t q2) {
  if (u.rows() != 4 || u.cols() != 4) throw ShapeError("two-qubit unitary must be 4x4");
  if (!is_unitary(u, kUnitaryTol)) throw std::invalid_argument("apply_two_qubit_unitary: matrix is not unitary");
  DensityMatrix out = rho;
  out.apply_two_qubit(u, q1, q2);
  debug_check_state(out);
  return out;
}

DensityMatrix apply_kraus(const DensityMatrix& rho, const KrausChannel& channel, std::size_t qubit) {
  if (!validate_cptp(channel, kChannelTol)) throw std::invalid_argument("apply_kraus: channel is not CPTP");
  DensityMatrix out = rho;
  out.apply(kraus_superop(channel.operators), qubit);
  debug_check_state(out);
  return out;
}

DensityMatrix from_statevector(const StateVector& psi) {
  const auto amps = psi.amplitudes();
  const std::size_t dim = amps.size();
  ComplexMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = amps[r] * std::conj(amps[c]);
  return DensityMatrix(std::move(m));
}

StateVector statevector_apply(const StateVector& psi, const ComplexMatrix& u, std::span<const std::size_t> qubits) {
  const std::size_t n = psi.num_qubits();
  const std::size_t k = qubits.size();
  if (k == 0 || k > n) throw std::invalid_argument("statevector_apply: bad qubit list");
  const std::size_t local_dim = std::size_t{1} << k;
  if (u.rows() != local_dim || u.cols() != local_dim) throw ShapeError("statevector_apply: unitary dimension mismatch");
  if (!is_unitary(u, kUnitaryTol)) throw std::invalid_argument("statevector_apply: matrix is not unitary");

  std::vector<std::size_t> offsets(local_dim, 0);
  std::size_t all = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (qubits[j] >= n) throw std::out_of_range("statevector_apply: qubit out of range");
    const std::size_t m = qubit_mask(n, qubits[j]);
    if (all & m) throw std::invalid_argument("statevector_apply: repeated qubit");
    all |= m;
    for (std::size_t s = 0; s < local_dim; ++s)
      if (s & (std::size_t{1} << (k - 1 - j))) offsets[s] |= m;
  }

  std::vector<Complex> out(psi.amplitudes().begin(), psi.amplitudes().end());
  std::vector<Complex> gathered(local_dim);
  for (std::size_t base = 0; base < out.size(); ++base) {
    if (base & all) continue;
    for (std::size_t s = 0; s < local_dim; ++s) gathered[s] = out[base | offsets[s]];
    for (std::size_t i = 0; i < local_dim; ++i) {
      Complex acc{};
      for (std::size_t s = 0; s < local_dim; ++s) acc += u(i, s) * gathered[s];
      out[base | offsets[i]] = acc;
    }
  }
  return StateVector(n, std::move(out));
}

void debug_check_state([[maybe_unused]] const DensityMatrix& rho) {
#ifndef NDEBUG
  if (std::abs(rho.trace_real() - 1.0) > 1e-9) throw std::logic_error("density matrix trace drifted from 1");
  if (!is_hermitian(rho.matrix(), 1e-9)) throw std::logic_error("density matrix lost Hermiticity");
#endif
}

}  // namespace nrqnn
