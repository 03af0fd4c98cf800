#include "nrqnn/landscape.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace nrqnn {

LandscapeGrid scan(const Ansatz& ansatz, const CostSpec& spec, const std::optional<KrausChannel>& channel,
                   std::size_t axis1, std::size_t axis2, ScanRange range, std::size_t resolution,
                   std::uint64_t base_seed) {
  const std::size_t count = ansatz.parameter_count();
  if (axis1 == axis2) throw std::invalid_argument("scan: axes must differ");
  if (axis1 >= count || axis2 >= count) throw std::out_of_range("scan: axis index out of range");
  if (resolution < 2) throw std::invalid_argument("scan: resolution must be at least 2");
  if (!(range.hi > range.lo)) throw std::invalid_argument("scan: empty range");

  LandscapeGrid grid;
  grid.axis1_index = axis1;
  grid.axis2_index = axis2;
  grid.base_params = random_parameters(ansatz.num_qubits(), ansatz.num_layers(), base_seed);
  grid.fingerprint = fingerprint(ansatz, spec, channel, base_seed, 0, AdamOptions{});
  grid.axis_values.resize(resolution);
  for (std::size_t i = 0; i < resolution; ++i) {
    grid.axis_values[i] = range.lo + (range.hi - range.lo) * static_cast<double>(i) / static_cast<double>(resolution - 1);
  }
  grid.costs.resize(resolution * resolution);

  const NoisyCircuit circuit(ansatz, channel);
  ParameterVector params = grid.base_params;
  for (std::size_t i = 0; i < resolution; ++i) {
    params[axis1] = grid.axis_values[i];
    for (std::size_t j = 0; j < resolution; ++j) {
      params[axis2] = grid.axis_values[j];
      grid.costs[i * resolution + j] = cost(circuit.run(params), spec);
    }
  }
  return grid;
}

double flatness(const LandscapeGrid& grid) {
  if (grid.costs.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(grid.costs.begin(), grid.costs.end());
  return *hi - *lo;
}

void write_csv(std::ostream& out, const LandscapeGrid& grid) {
  out << "axis1,axis2,cost\n";
  char line[96];
  const std::size_t r = grid.resolution();
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", grid.axis_values[i], grid.axis_values[j], grid.at(i, j));
      out << line;
    }
  }
}

}  // namespace nrqnn
