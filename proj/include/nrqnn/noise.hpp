#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nrqnn/linalg.hpp"

namespace nrqnn {

enum class NoiseKind { amplitude_damping, phase_damping, phase_flip };

std::string_view to_string(NoiseKind kind);

/// Parses the config spelling; std::nullopt for "none". Throws on unknown names.
std::optional<NoiseKind> parse_noise_name(std::string_view name);

/// Single-qubit Kraus channel. Operators are 2x2 and satisfy sum K^dagger K = I.
struct KrausChannel {
  NoiseKind kind;
  double probability;
  std::vector<ComplexMatrix> operators;
};

KrausChannel amplitude_damping(double gamma);
KrausChannel phase_damping(double gamma);
KrausChannel phase_flip(double p);

KrausChannel make_channel(NoiseKind kind, double probability);

/// Largest entry of |sum K^dagger K - I|. Throws on an empty operator list.
double completeness_error(std::span<const ComplexMatrix> operators);

bool validate_cptp(std::span<const ComplexMatrix> operators, double tol);
bool validate_cptp(const KrausChannel& channel, double tol);

}  // namespace nrqnn
