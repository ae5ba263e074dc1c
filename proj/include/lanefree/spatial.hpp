#pragma once

#include <optional>
#include <vector>

#include "lanefree/interval.hpp"
#include "lanefree/trajectory.hpp"

namespace lanefree {

/// Accumulated lateral constraint windows at one gate (union semantics).
struct SpatialConstraintSet {
  int gate_id = -1;
  std::vector<Interval> windows;
};

/// Rightmost conflict-free alignment: the vehicle's open interval
/// (y - w/2, y + w/2) must avoid every window and stay within [0, w_street].
/// `right_at_low` maps the travel frame onto the shared street frame.
/// Returns nullopt when the gate is fully blocked for this width.
std::optional<double> resolve_alignment(const SpatialConstraintSet& constraints,
                                        double effective_width, bool right_at_low,
                                        double street_width);

/// Applies alignment `y` at gates [from_gate .. n], clamped per street to the
/// feasible band, and refreshes the Dubins box segment when the entry or exit
/// alignment moved. Gates before from_gate are untouched.
void propagate_alignment(Trajectory& traj, std::size_t from_gate, double y,
                         const TrajectoryFactory& factory);

}  // namespace lanefree
