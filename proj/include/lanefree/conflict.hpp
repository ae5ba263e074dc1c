#pragma once

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "lanefree/interval.hpp"
#include "lanefree/trajectory.hpp"

namespace lanefree {

enum class ConflictCase : std::uint8_t {
  approach,       // ordinary same-gate window overlap
  perpendicular,  // box case 1
  merge,          // box case 2: opposing origins, same destination
  shared_origin,  // box case 3
  residual,       // box case 4: remaining box-sharing pairs
};

const char* to_string(ConflictCase c);

constexpr int kSignalSource = -1;

/// A blocked window at one gate: the lateral interval psi and the time
/// interval phi during which that part of the gate may not be crossed.
struct Conflict {
  int gate_id = -1;
  Interval psi;
  Interval phi;
  int source = kSignalSource;  // vehicle id, or kSignalSource
  ConflictCase tag = ConflictCase::approach;
  bool speed_clamped = false;  // the l/v term hit the speed floor
};

/// Blocked windows generated by a booked trajectory at one of its gates.
Conflict approach_conflict(const Trajectory& booked, std::size_t gate_index,
                           double g, double v_floor, double street_width);

/// Red signal phase as a full-width blocked window (one per cycle).
Conflict signal_red_conflict(double red_start, double red_end, double street_width,
                             int gate_id);

/// Movement-level case tag; geometry decides later whether a conflict is
/// actually emitted. Both movements are assumed to pass the box.
ConflictCase classify_intersection_pair(MovementId a, MovementId b);

/// A detected violation between two trajectories (or one trajectory and a
/// signal window). Constraint windows are materialized per branch side.
struct PairConflict {
  ConflictCase tag = ConflictCase::approach;
  int vehicle_a = -1;
  int vehicle_b = -1;  // kSignalSource for signal conflicts
  int gate_a = -1;     // gate the constraint lands on when a is constrained
  int gate_b = -1;
  double start_time = 0.0;
};

struct ConflictParams {
  double g = 1.0;            // s, minimum net time gap (PET)
  double v_floor = 0.5;      // m/s floor for l/v terms
  bool merge_psi_own = false;  // alternative case-2 psi reading
  double sample_step = 0.01;   // m, strip sampling along box paths
};

/// Arclength windows (relative to each box-segment start) where the two swept
/// paths overlap inside the intersection box.
struct BoxOverlap {
  Interval s_a;
  Interval s_b;
};

class ConflictEngine {
 public:
  ConflictEngine(const Layout& layout, const ConflictParams& params);

  const ConflictParams& params() const { return params_; }

  /// All pairwise violations plus violations of standing (signal) windows,
  /// sorted by start time. Trajectories must have complete time profiles.
  std::vector<PairConflict> detect(std::span<const Trajectory* const> trajectories,
                                   std::span<const Conflict> standing = {}) const;

  /// Blocked windows the non-constrained party imposes on `constrained`.
  /// Returns nullopt when the pair geometry yields no conflict (e.g. empty
  /// case-1 overlap region).
  std::optional<Conflict> materialize(const PairConflict& pc, int constrained_id,
                                      const Trajectory& a, const Trajectory& b,
                                      std::span<const Conflict> standing = {}) const;

  /// Swept-path overlap inside the box, nullopt when disjoint. Cached.
  std::optional<BoxOverlap> box_overlap(const Trajectory& a, const Trajectory& b) const;

  /// Time the rear bumper clears the exit gate.
  static double box_clear_time(const Trajectory& t);

 private:
  struct SharedGate {
    int gate_id;
    int index_a;
    int index_b;
  };

  bool pair_violates(const Trajectory& a, const Trajectory& b, ConflictCase tag,
                     std::vector<PairConflict>& out) const;
  void ordinary_gate_conflicts(const Trajectory& a, const Trajectory& b,
                               bool skip_shared_exit, std::vector<PairConflict>& out) const;
  bool windows_violate(const Trajectory& a, std::size_t ia, const Trajectory& b,
                       std::size_t ib) const;

  const Layout* layout_;
  ConflictParams params_;
  // shared gates per ordered movement pair, index = a.index()*12 + b.index()
  std::vector<std::vector<SharedGate>> shared_gates_;
  mutable std::unordered_map<std::uint64_t, std::optional<BoxOverlap>> overlap_cache_;
};

}  // namespace lanefree
