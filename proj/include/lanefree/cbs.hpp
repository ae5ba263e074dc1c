#pragma once

#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "lanefree/conflict.hpp"
#include "lanefree/spatial.hpp"
#include "lanefree/temporal.hpp"
#include "lanefree/trajectory.hpp"

namespace lanefree {

struct PlannerConfig {
  ConflictParams conflict;
  TemporalPlannerParams temporal;
  double pet_margin = 0.05;     // s, pad on windows entering the planner
  int max_expansions = 5000;
  double spawn_retry = 0.5;     // s, deferral step
  double horizon_slack = 120.0; // s, planning horizon past the simulation end
};

struct PlanStats {
  int expansions = 0;
  int nodes_created = 0;
  int conflicts_branched = 0;
  int spatial_wins = 0;
  int temporal_wins = 0;
  bool deferred = false;
};

/// Constraint-tree node: every trajectory (booked plus the new vehicle) with
/// per-vehicle accumulated constraint lists and the total travel time.
struct SubProblem {
  std::vector<std::shared_ptr<const Trajectory>> trajs;
  std::vector<std::shared_ptr<const std::vector<Conflict>>> constraints;
  double cost = 0.0;
  long id = 0;
};

class CbsPlanner {
 public:
  CbsPlanner(const Layout& layout, const TrajectoryFactory& factory,
             const PlannerConfig& config);

  struct Outcome {
    bool accepted = false;
    std::vector<std::shared_ptr<const Trajectory>> booked;
    PlanStats stats;
  };

  /// Best-first constraint-tree search admitting one new vehicle into the
  /// booked set. Past gate crossings (t <= now) and vehicles inside the box
  /// are immutable; an exhausted tree or expansion cap defers the spawn.
  Outcome plan_new_vehicle(int vehicle_id, const VehicleSpec& vehicle, MovementId movement,
                           double t_register, double now,
                           std::vector<std::shared_ptr<const Trajectory>> booked,
                           double horizon_end, std::span<const Conflict> standing = {});

  /// Unconstrained minimum travel time for a movement and vehicle; the
  /// delay reference. Cached per movement and effective width.
  double freeflow_time(const VehicleSpec& vehicle, MovementId movement);

  const ConflictEngine& engine() const { return engine_; }
  const PlannerConfig& config() const { return config_; }

  /// First gate index that may still be replanned at `now`; one past the end
  /// when the vehicle is fully frozen (inside the box or finished).
  std::size_t first_replannable_gate(const Trajectory& traj, double now) const;

  /// Replans times of gates >= the frozen prefix against the constraint list
  /// (plus standing windows). Alignments are untouched. Returns false when no
  /// feasible profile exists.
  bool temporal_replan(Trajectory& traj, std::span<const Conflict> constraints,
                       std::span<const Conflict> standing, double now,
                       double horizon_end) const;

 private:
  struct SolveResult {
    bool ok = false;
    Trajectory traj;
    bool used_spatial = false;
  };
  SolveResult solve_constrained(const Trajectory& base, const std::vector<Conflict>& constraints,
                                const Conflict& newest, std::span<const Conflict> standing,
                                double now, double horizon_end) const;

  void collect_blocked(const Trajectory& traj, std::span<const Conflict> constraints,
                       std::span<const Conflict> standing, std::size_t first_gate,
                       double horizon_end,
                       std::vector<std::vector<Interval>>& blocked) const;

  const Layout* layout_;
  TrajectoryFactory factory_;
  PlannerConfig config_;
  ConflictEngine engine_;
  std::unordered_map<std::uint64_t, double> freeflow_cache_;
};

}  // namespace lanefree
