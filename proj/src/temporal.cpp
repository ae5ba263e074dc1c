#include "lanefree/temporal.hpp"

#include <algorithm>
#include <cmath>

namespace lanefree {

std::vector<Interval> free_windows(const std::vector<Interval>& blocked, double t_start,
                                   double t_end) {
  return complement(blocked, t_start, t_end);
}

namespace {

struct ChainState {
  std::size_t gate = 0;   // gate index of the previous chosen window
  Interval window{0, 0};  // previous chosen window ([t_start, t_start] virtually)
};

// Fastest / slowest travel time between gates i < m.
double tau_fast(const TimeProfileProblem& p, std::size_t i, std::size_t m) {
  double tau = 0.0;
  for (std::size_t k = i; k < m; ++k) tau += p.seg_len[k] / p.seg_vmax[k];
  return tau;
}

double tau_slow(const TimeProfileProblem& p, std::size_t i, std::size_t m, double v_min) {
  if (v_min <= 0.0) return std::numeric_limits<double>::infinity();
  double tau = 0.0;
  for (std::size_t k = i; k < m; ++k) tau += p.seg_len[k] / v_min;
  return tau;
}

}  // namespace

std::vector<WindowCombination> feasible_combinations(
    const TimeProfileProblem& base, const std::vector<std::vector<Interval>>& free_per_gate,
    double v_min, int max_combinations, bool* cap_hit) {
  if (cap_hit) *cap_hit = false;
  std::vector<std::size_t> constrained;
  for (std::size_t i = 0; i < free_per_gate.size(); ++i) {
    if (!free_per_gate[i].empty()) constrained.push_back(i);
  }
  std::vector<WindowCombination> out;
  if (constrained.empty()) {
    out.push_back({});
    return out;
  }

  WindowCombination current;
  // Depth-first over constrained gates in path order; windows are already
  // sorted by start, so the earliest-lower-bound combinations come first.
  auto dfs = [&](auto&& self, std::size_t depth, ChainState prev) -> void {
    if (static_cast<int>(out.size()) >= max_combinations) {
      if (cap_hit) *cap_hit = true;
      return;
    }
    if (depth == constrained.size()) {
      out.push_back(current);
      return;
    }
    const std::size_t gate = constrained[depth];
    const double reach_lo = prev.window.lo + tau_fast(base, prev.gate, gate);
    const double reach_hi = prev.window.hi + tau_slow(base, prev.gate, gate, v_min);
    for (const Interval& w : free_per_gate[gate]) {
      const bool intersects = gate == 0 ? w.contains(base.t_start)
                                        : (w.lo < reach_hi && w.hi > reach_lo);
      if (!intersects) continue;
      current.choices.push_back({gate, w});
      self(self, depth + 1, ChainState{gate, w});
      current.choices.pop_back();
      if (static_cast<int>(out.size()) >= max_combinations) return;
    }
  };
  dfs(dfs, 0, ChainState{0, {base.t_start, base.t_start}});
  return out;
}

TemporalPlanResult plan_temporal(const TimeProfileProblem& base,
                                 const std::vector<std::vector<Interval>>& blocked_per_gate,
                                 double horizon_end, const TemporalPlannerParams& params) {
  TemporalPlanResult result;
  const std::size_t n_gates = base.gate_count();

  std::vector<std::vector<Interval>> free_per_gate(n_gates);
  for (std::size_t i = 0; i < n_gates; ++i) {
    if (i < blocked_per_gate.size() && !blocked_per_gate[i].empty()) {
      free_per_gate[i] = free_windows(blocked_per_gate[i], base.t_start, horizon_end);
      if (free_per_gate[i].empty()) return result;  // gate permanently blocked
    }
  }

  bool cap_hit = false;
  std::vector<WindowCombination> combos =
      feasible_combinations(base, free_per_gate, params.v_min, params.max_combinations, &cap_hit);
  result.cap_hit = cap_hit;
  result.combinations_total = static_cast<int>(combos.size());
  if (combos.empty()) return result;

  // Evaluate cheapest-bound first so later combinations can be pruned.
  struct Ranked {
    double bound;
    std::size_t index;
  };
  std::vector<Ranked> order;
  std::vector<TimeProfileProblem> problems;
  problems.reserve(combos.size());
  for (std::size_t ci = 0; ci < combos.size(); ++ci) {
    TimeProfileProblem prob = base;
    for (const auto& [gate, w] : combos[ci].choices) prob.windows[gate] = w;
    order.push_back({travel_time_lower_bound(prob), ci});
    problems.push_back(std::move(prob));
  }
  std::sort(order.begin(), order.end(), [](const Ranked& a, const Ranked& b) {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.index < b.index;
  });

  double best = std::numeric_limits<double>::infinity();
  for (const Ranked& r : order) {
    if (r.bound >= best) continue;
    const TimeProfileProblem& prob = problems[r.index];
    ++result.combinations_solved;

    // Greedy profile is optimal whenever it validates right at the bound.
    std::vector<double> guess = earliest_arrival_guess(prob);
    const double guess_time = guess.back() - guess.front();
    if (guess_time <= r.bound + 1e-9 &&
        validate_profile(prob, guess, params.nlp.tolerance, 1e-4).ok) {
      if (guess_time < best) {
        best = guess_time;
        result.t = guess;
      }
      continue;
    }
    const TimeProfileSolution s = solve_time_profile(prob, params.nlp, &guess);
    if (s.feasible && s.travel_time < best) {
      best = s.travel_time;
      result.t = s.t;
    }
  }
  if (!result.t.empty()) {
    result.feasible = true;
    result.travel_time = best;
  }
  return result;
}

}  // namespace lanefree
