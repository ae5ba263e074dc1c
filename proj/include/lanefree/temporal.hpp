#pragma once

#include <vector>

#include "lanefree/interval.hpp"
#include "lanefree/nlp.hpp"

namespace lanefree {

/// Free time windows at a gate: complement of the blocked set on the
/// planning horizon [t_start, t_end). Disjoint and sorted.
std::vector<Interval> free_windows(const std::vector<Interval>& blocked, double t_start,
                                   double t_end);

/// One admissible window per constrained gate.
struct WindowCombination {
  std::vector<std::pair<std::size_t, Interval>> choices;  // (gate index, window)
};

struct TemporalPlannerParams {
  double v_min = 1.0;        // slow-side projection speed; <= 0 means unbounded
  int max_combinations = 64;
  NlpSettings nlp;
};

/// Downstream projection of window choices: a combination survives only if
/// each chosen window intersects the band reached from the previous chosen
/// window at speeds between v_min and the segment caps. Enumeration follows
/// increasing window start times and stops at the cap.
std::vector<WindowCombination> feasible_combinations(
    const TimeProfileProblem& base, const std::vector<std::vector<Interval>>& free_per_gate,
    double v_min, int max_combinations, bool* cap_hit = nullptr);

struct TemporalPlanResult {
  bool feasible = false;
  std::vector<double> t;
  double travel_time = 0.0;
  int combinations_total = 0;
  int combinations_solved = 0;
  bool cap_hit = false;
};

/// Best-of-all-combinations minimum-travel-time profile for a fixed spatial
/// path. `blocked_per_gate` holds the accumulated temporal windows per gate.
TemporalPlanResult plan_temporal(const TimeProfileProblem& base,
                                 const std::vector<std::vector<Interval>>& blocked_per_gate,
                                 double horizon_end, const TemporalPlannerParams& params);

}  // namespace lanefree
