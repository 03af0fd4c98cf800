#include "nrqnn/observables.hpp"

#include <stdexcept>
#include <string>

namespace nrqnn {

std::string_view to_string(ObservableKind kind) {
  switch (kind) {
    case ObservableKind::pauli_x: return "pauli_x";
    case ObservableKind::pauli_y: return "pauli_y";
    case ObservableKind::pauli_z: return "pauli_z";
    case ObservableKind::custom_hermitian: return "hermitian";
  }
  return "unknown";
}

ObservableKind parse_observable_name(std::string_view name) {
  if (name == "pauli_x") return ObservableKind::pauli_x;
  if (name == "pauli_y") return ObservableKind::pauli_y;
  if (name == "pauli_z") return ObservableKind::pauli_z;
  if (name == "hermitian") return ObservableKind::custom_hermitian;
  throw std::invalid_argument("unknown observable '" + std::string(name) + "'");
}

ComplexMatrix pauli_matrix(ObservableKind kind) {
  const Complex i{0.0, 1.0};
  switch (kind) {
    case ObservableKind::pauli_x: return {{0.0, 1.0}, {1.0, 0.0}};
    case ObservableKind::pauli_y: return {{0.0, -i}, {i, 0.0}};
    case ObservableKind::pauli_z: return {{1.0, 0.0}, {0.0, -1.0}};
    case ObservableKind::custom_hermitian: break;
  }
  throw std::invalid_argument("pauli_matrix: custom Hermitian observable is not a Pauli matrix");
}

ComplexMatrix build_custom_hermitian(std::size_t num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("build_custom_hermitian: qubit count " + std::to_string(num_qubits) + " out of range");
  }
  const std::size_t dim = std::size_t{1} << num_qubits;
  ComplexMatrix h(dim, dim);
  for (std::size_t k = 0; k < dim / 2; ++k) h(k, k) = 1.0;
  return h;
}

ComplexMatrix embedded_operator(const Observable& obs, std::optional<std::size_t> qubit) {
  if (obs.kind == ObservableKind::custom_hermitian) return build_custom_hermitian(obs.num_qubits);
  if (!qubit) throw std::invalid_argument("embedded_operator: Pauli observable needs a qubit");
  if (*qubit >= obs.num_qubits) throw std::out_of_range("embedded_operator: qubit out of range");
  const std::size_t left = std::size_t{1} << *qubit;
  const std::size_t right = std::size_t{1} << (obs.num_qubits - 1 - *qubit);
  return kron(kron(ComplexMatrix::identity(left), pauli_matrix(obs.kind)), ComplexMatrix::identity(right));
}

double expectation(const DensityMatrix& rho, const Observable& obs, std::optional<std::size_t> qubit) {
  const std::size_t n = rho.num_qubits();
  if (obs.num_qubits != n) {
    throw std::invalid_argument("expectation: observable has " + std::to_string(obs.num_qubits) +
                                " qubits, state has " + std::to_string(n));
  }
  const std::size_t dim = rho.dim();

  if (obs.kind == ObservableKind::custom_hermitian) {
    double sum = 0.0;
    for (std::size_t k = 0; k < dim / 2; ++k) sum += rho(k, k).real();
    return sum;
  }

  if (!qubit) throw std::invalid_argument("expectation: Pauli observable needs a qubit");
  if (*qubit >= n) throw std::out_of_range("expectation: qubit out of range");
  const std::size_t bit = qubit_mask(n, *qubit);

  double sum = 0.0;
  switch (obs.kind) {
    case ObservableKind::pauli_z:
      for (std::size_t b = 0; b < dim; ++b) sum += (b & bit) ? -rho(b, b).real() : rho(b, b).real();
      return sum;
    case ObservableKind::pauli_x:
      // Tr(rho X) = 2 Re sum_b rho(b, b|bit) over b with the bit clear.
      for (std::size_t b = 0; b < dim; ++b)
        if (!(b & bit)) sum += rho(b, b | bit).real();
      return 2.0 * sum;
    case ObservableKind::pauli_y:
      // Tr(rho Y) = -2 Im sum_b rho(b, b|bit).
      for (std::size_t b = 0; b < dim; ++b)
        if (!(b & bit)) sum += rho(b, b | bit).imag();
      return -2.0 * sum;
    case ObservableKind::custom_hermitian: break;
  }
  return sum;
}

}  // namespace nrqnn
