#include "nrqnn/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace nrqnn {

namespace {

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + ": probability " + std::to_string(p) +
                                " outside [0, 1]");
  }
}

}  // namespace

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::amplitude_damping: return "amplitude_damping";
    case NoiseKind::phase_damping: return "phase_damping";
    case NoiseKind::phase_flip: return "phase_flip";
  }
  return "unknown";
}

std::optional<NoiseKind> parse_noise_name(std::string_view name) {
  if (name == "none") return std::nullopt;
  if (name == "amplitude_damping") return NoiseKind::amplitude_damping;
  if (name == "phase_damping") return NoiseKind::phase_damping;
  if (name == "phase_flip") return NoiseKind::phase_flip;
  throw std::invalid_argument("unknown noise type '" + std::string(name) + "'");
}

KrausChannel amplitude_damping(double gamma) {
  require_probability(gamma, "amplitude_damping");
  return {NoiseKind::amplitude_damping,
          gamma,
          {ComplexMatrix{{1.0, 0.0}, {0.0, std::sqrt(1.0 - gamma)}},
           ComplexMatrix{{0.0, std::sqrt(gamma)}, {0.0, 0.0}}}};
}

KrausChannel phase_damping(double gamma) {
  require_probability(gamma, "phase_damping");
  return {NoiseKind::phase_damping,
          gamma,
          {ComplexMatrix{{1.0, 0.0}, {0.0, std::sqrt(1.0 - gamma)}},
           ComplexMatrix{{0.0, 0.0}, {0.0, std::sqrt(gamma)}}}};
}

KrausChannel phase_flip(double p) {
  require_probability(p, "phase_flip");
  const double keep = std::sqrt(1.0 - p);
  const double flip = std::sqrt(p);
  return {NoiseKind::phase_flip,
          p,
          {ComplexMatrix{{keep, 0.0}, {0.0, keep}}, ComplexMatrix{{flip, 0.0}, {0.0, -flip}}}};
}

KrausChannel make_channel(NoiseKind kind, double probability) {
  switch (kind) {
    case NoiseKind::amplitude_damping: return amplitude_damping(probability);
    case NoiseKind::phase_damping: return phase_damping(probability);
    case NoiseKind::phase_flip: return phase_flip(probability);
  }
  throw std::invalid_argument("make_channel: unknown kind");
}

double completeness_error(std::span<const ComplexMatrix> operators) {
  if (operators.empty()) throw std::invalid_argument("Kraus channel has no operators");
  ComplexMatrix sum(2, 2);
  for (const auto& k : operators) {
    if (k.rows() != 2 || k.cols() != 2) throw ShapeError("Kraus operator must be 2x2");
    sum = add(sum, matmul(adjoint(k), k));
  }
  return max_abs_diff(sum, ComplexMatrix::identity(2));
}

bool validate_cptp(std::span<const ComplexMatrix> operators, double tol) {
  if (tol < 0.0) throw std::invalid_argument("validate_cptp: negative tolerance");
  return completeness_error(operators) <= tol;
}

bool validate_cptp(const KrausChannel& channel, double tol) {
  if (!(channel.probability >= 0.0 && channel.probability <= 1.0)) return false;
  return validate_cptp(channel.operators, tol);
}

}  // namespace nrqnn
