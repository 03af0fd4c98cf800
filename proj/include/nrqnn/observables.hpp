#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "nrqnn/linalg.hpp"
#include "nrqnn/state.hpp"

namespace nrqnn {

enum class ObservableKind { pauli_x, pauli_y, pauli_z, custom_hermitian };

/// Config spelling: "pauli_x", "pauli_y", "pauli_z", "hermitian".
std::string_view to_string(ObservableKind kind);
ObservableKind parse_observable_name(std::string_view name);

inline bool is_pauli(ObservableKind kind) { return kind != ObservableKind::custom_hermitian; }

// A Pauli kind denotes the family {P on qubit i, identity elsewhere}; the custom
// kind denotes the single projector onto qubit 0 being |0>.
struct Observable {
  ObservableKind kind;
  std::size_t num_qubits;
};

ComplexMatrix pauli_matrix(ObservableKind kind);

/// 2^n x 2^n diagonal with ones on the first 2^(n-1) entries.
ComplexMatrix build_custom_hermitian(std::size_t num_qubits);

/// Full 2^n x 2^n operator: P on `qubit` for Pauli kinds, H for the custom kind.
ComplexMatrix embedded_operator(const Observable& obs, std::optional<std::size_t> qubit);

/// Tr(rho O). `qubit` is required for Pauli kinds and ignored for the custom kind.
double expectation(const DensityMatrix& rho, const Observable& obs, std::optional<std::size_t> qubit = std::nullopt);

}  // namespace nrqnn
