#pragma once

#include <vector>

#include "lanefree/geometry.hpp"
#include "lanefree/vehicle.hpp"

namespace lanefree {

struct PlanPoint {
  double x = 0.0;
  double y = 0.0;
  double s = 0.0;  // cumulative arclength from the polyline start
};

/// A booked or candidate vehicle trajectory: one (alignment, time) anchor per
/// gate of its movement path. Between gates motion is piecewise linear in
/// time; the intersection-box segment follows the Dubins construction.
struct Trajectory {
  int vehicle_id = -1;
  VehicleSpec vehicle;
  MovementId movement;
  const MovementPath* path = nullptr;
  double t_register = 0.0;  // original registration time, before any deferral

  std::vector<double> y;         // per gate, shared street frame
  std::vector<double> t;         // per gate, crossing time of the front
  std::vector<double> seg_len;   // per segment
  std::vector<double> seg_vmax;  // per segment, already min(v_f, curve limit)
  double turn_radius = 0.0;      // current box-segment radius (inf if straight)

  std::size_t gate_count() const { return path->gate_ids.size(); }
  int gate_id(std::size_t i) const { return path->gate_ids[i]; }
  int entry_index() const { return path->entry_index; }
  int exit_index() const { return path->exit_index; }
  double travel_time() const { return t.back() - t.front(); }

  /// Speed relevant at gate i: the outgoing segment speed, or the incoming
  /// one at the final gate.
  double speed_at_gate(std::size_t i) const;
  /// Same, clamped from below; sets *clamped when the floor was hit.
  double clearance_speed(std::size_t i, double v_floor, bool* clamped = nullptr) const;

  double cum_length(std::size_t gate_index) const;
  double total_length() const { return cum_length(gate_count() - 1); }

  /// Front position along the path at a given time (clamped to the ends).
  double arclength_at_time(double time) const;
  /// Time at which the front reaches a given arclength (clamped).
  double time_at_arclength(double s) const;

  /// Index of this movement's gate i within the trajectory arrays, or -1.
  int index_of_gate(int gate_id) const;
};

/// Builds the plan-view polyline of the box segment (entry anchor to exit
/// anchor). Arcs are flattened at ~2 degree steps; `s` is analytic arclength.
std::vector<PlanPoint> box_polyline(const Layout& layout, const Trajectory& traj);

/// Plan position of a lateral alignment on a gate.
PlanPoint gate_anchor(const Layout& layout, const Gate& gate, double y_lateral);

/// Front plan position and heading (unit vector) at a time, following the
/// gate anchors with linear lateral ramps and the box polyline.
struct Pose {
  double x = 0.0, y = 0.0;
  double hx = 1.0, hy = 0.0;
};
Pose pose_at_time(const Layout& layout, const Trajectory& traj, double time);

struct TrajectoryFactory {
  const Layout* layout = nullptr;
  bool paper_turn_formula = false;

  /// Initializes gate arrays with the per-gate rightmost alignment and
  /// computes the box segment. Times are left zeroed; the temporal planner
  /// fills them.
  Trajectory make(int vehicle_id, const VehicleSpec& vehicle, MovementId movement,
                  double t_register) const;

  /// Recomputes box segment length / radius / speed cap after alignments
  /// changed. Call whenever y[entry] or y[exit] moved.
  void refresh_box_segment(Trajectory& traj) const;

  /// Rightmost feasible alignment for this vehicle on the given street,
  /// ignoring all constraints.
  double unconstrained_alignment(const Trajectory& traj, std::size_t gate_index) const;
};

}  // namespace lanefree
