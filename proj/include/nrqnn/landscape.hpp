#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nrqnn/ansatz.hpp"
#include "nrqnn/trainer.hpp"

namespace nrqnn {

inline constexpr std::size_t kDefaultResolution = 50;

struct ScanRange {
  double lo = -std::numbers::pi;
  double hi = std::numbers::pi;
};

/// Cost over a square grid of two parameters, all others held at base_params.
struct LandscapeGrid {
  std::size_t axis1_index = 0;
  std::size_t axis2_index = 1;
  std::vector<double> axis_values;  // shared by both axes, lo..hi inclusive
  std::vector<double> costs;        // costs[i * resolution + j] at (axis_values[i], axis_values[j])
  ParameterVector base_params;
  std::string fingerprint;

  std::size_t resolution() const { return axis_values.size(); }
  double at(std::size_t i, std::size_t j) const { return costs[i * resolution() + j]; }
};

LandscapeGrid scan(const Ansatz& ansatz, const CostSpec& spec, const std::optional<KrausChannel>& channel,
                   std::size_t axis1, std::size_t axis2, ScanRange range, std::size_t resolution,
                   std::uint64_t base_seed);

/// max(costs) - min(costs).
double flatness(const LandscapeGrid& grid);

/// Header `axis1,axis2,cost`, one row per grid point, 17 significant digits.
void write_csv(std::ostream& out, const LandscapeGrid& grid);

}  // namespace nrqnn
