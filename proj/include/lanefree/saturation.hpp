#pragma once

#include <vector>

#include "lanefree/demand.hpp"
#include "lanefree/rng.hpp"

namespace lanefree {

/// One Monte-Carlo packing draw: vehicles are drawn sequentially and placed
/// side-by-side (in draw order, no re-sorting) while the total of physical
/// widths plus one lateral gap between each adjacent pair still fits.
struct PackingSample {
  int n_fit = 0;
  std::vector<double> widths_used;
};

PackingSample pack_street(double street_width, const VehiclePopulation& pop, Rng& rng);

struct LaneCountEstimate {
  double mean = 0.0;    // N', expected side-by-side vehicle count
  double stderr_ = 0.0; // standard error of the Monte-Carlo mean
};

LaneCountEstimate equivalent_lane_count(double street_width, const VehiclePopulation& pop,
                                        long samples, Rng& rng);

/// Eq.-style capacity: 3600 * n_prime / gross_headway, veh/h.
double saturation_flow(double n_prime, double gross_headway_s);

/// Lane-based staircase baseline: full lanes of `lane_width` at 3600/Z veh/h each.
double lane_based_flow(double street_width, double lane_width, double gross_headway_s);

struct SaturationPoint {
  double width = 0.0;
  double narrow_rate = 0.0;
  double n_prime = 0.0;
  double flow_vph = 0.0;
  double stderr_vph = 0.0;
  double lane_based_vph = 0.0;
};

struct SaturationSweepConfig {
  std::vector<double> widths;
  std::vector<double> narrow_rates;
  long samples = 100000;
  double gross_headway_s = 2.0;
  double lane_width = 3.2;
  std::uint64_t seed = 1;
};

/// Full grid sweep. Points are independent; each gets a derived seed so the
/// result does not depend on evaluation order.
std::vector<SaturationPoint> saturation_sweep(const SaturationSweepConfig& cfg,
                                              const VehiclePopulation& base_pop);

}  // namespace lanefree
