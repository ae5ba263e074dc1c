#pragma once

namespace lanefree {

/// Physical and kinematic parameters of one vehicle. `effective_width` is
/// the physical width grown by the minimum lateral gap; all conflict windows
/// and the spatial resolver work with the effective width.
struct VehicleSpec {
  double width = 1.87;            // m, physical
  double effective_width = 1.97;  // m, width + lateral gap
  double length = 4.6;            // m
  double v_f = 8.3;               // m/s free-flow speed
  double a_lon_max = 2.5;         // m/s^2
  double a_lat_max = 2.5;         // m/s^2
};

}  // namespace lanefree
