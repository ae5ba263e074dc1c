#include "lanefree/spatial.hpp"

#include <algorithm>
#include <cmath>

namespace lanefree {

std::optional<double> resolve_alignment(const SpatialConstraintSet& constraints,
                                        double effective_width, bool right_at_low,
                                        double street_width) {
  const double half = effective_width / 2.0;
  if (effective_width > street_width) return std::nullopt;
  const std::vector<Interval> blocked = merge_union(constraints.windows);

  auto feasible = [&](double y) {
    if (y - half < -1e-12 || y + half > street_width + 1e-12) return false;
    const Interval body{y - half, y + half};
    for (const Interval& w : blocked) {
      // Open-interval contact: touching a window boundary exactly is allowed.
      if (w.lo < body.hi && body.lo < w.hi) return false;
    }
    return true;
  };

  // Candidates: hug the right curb, or sit flush against a window edge.
  std::vector<double> candidates;
  if (right_at_low) {
    candidates.push_back(half);
    for (const Interval& w : blocked) candidates.push_back(w.hi + half);
    std::sort(candidates.begin(), candidates.end());
  } else {
    candidates.push_back(street_width - half);
    for (const Interval& w : blocked) candidates.push_back(w.lo - half);
    std::sort(candidates.begin(), candidates.end(), std::greater<>());
  }
  for (double y : candidates) {
    if (feasible(y)) return y;
  }
  return std::nullopt;
}

void propagate_alignment(Trajectory& traj, std::size_t from_gate, double y,
                         const TrajectoryFactory& factory) {
  const Layout& layout = *factory.layout;
  const double half = traj.vehicle.effective_width / 2.0;
  for (std::size_t i = from_gate; i < traj.gate_count(); ++i) {
    const double w = layout.gate_width(traj.gate_id(i));
    traj.y[i] = std::clamp(y, half, w - half);
  }
  factory.refresh_box_segment(traj);
}

}  // namespace lanefree
