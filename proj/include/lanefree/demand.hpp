#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "lanefree/geometry.hpp"
#include "lanefree/rng.hpp"
#include "lanefree/vehicle.hpp"

namespace lanefree {

/// Parameters of the vehicle population. Width follows the truncated normal
/// fit unless the draw is a narrow single-passenger vehicle.
struct VehiclePopulation {
  double width_mean = 1.87;
  double width_sd = 0.14;
  double width_min = 1.2;
  double width_max = 2.8;
  double length_mean = 4.6;
  double length_sd = 0.4;
  double length_min = 3.5;
  double length_max = 6.0;
  double narrow_rate = 0.0;
  double narrow_width = 1.2;
  double narrow_length = 2.5;
  double lateral_gap = 0.1;
  double v_f = 8.3;
  double a_lon_max = 2.5;
  double a_lat_max = 2.5;
};

VehicleSpec sample_vehicle(const VehiclePopulation& pop, Rng& rng);

struct TurnRatios {
  double left = 0.10;
  double straight = 0.75;
  double right = 0.15;
};

struct DemandSpec {
  double nominal_vph = 400.0;  // sum over all approaches
  TurnRatios turn_ratios;
  double beta = 0.5;  // share of each axis's demand from the south/west approach
  std::uint64_t seed = 1;

  /// Arrival rate for one approach, veh/h.
  double approach_rate(Approach a) const;
  void validate() const;
};

struct Arrival {
  double time = 0.0;  // s
  Approach approach = Approach::south;
  Approach destination = Approach::north;
  VehicleSpec vehicle;
};

/// Poisson arrivals per approach with i.i.d. turn movements, merged into one
/// time-sorted stream. Same spec and duration always produce the same list.
std::vector<Arrival> generate_arrivals(const DemandSpec& demand,
                                       const VehiclePopulation& pop, double duration);

void write_arrivals_csv(std::ostream& out, const std::vector<Arrival>& arrivals);
std::vector<Arrival> read_arrivals_csv(std::istream& in, const VehiclePopulation& pop);

}  // namespace lanefree
