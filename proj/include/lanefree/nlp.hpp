#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "lanefree/interval.hpp"

namespace lanefree {

/// Minimum-travel-time gate-arrival problem: find t_0..t_n with t_0 fixed,
/// per-segment speed caps, a longitudinal acceleration limit on the derived
/// piecewise-constant speeds, and at most one admissible time window per gate
/// (the vehicle must also clear the gate by the window end).
struct TimeProfileProblem {
  double t_start = 0.0;
  std::vector<double> seg_len;   // n segments between n+1 gates
  std::vector<double> seg_vmax;  // min(v_f, curve limit) per segment
  double vehicle_length = 4.6;
  double a_lon_max = 2.5;
  std::optional<double> initial_speed;  // continuity seam when replanning
  std::vector<std::optional<Interval>> windows;  // size n+1, [lo, hi] per gate
  double min_segment_time = 1e-3;

  std::size_t gate_count() const { return seg_len.size() + 1; }
};

struct NlpSettings {
  int max_iterations = 200;
  double tolerance = 1e-6;
  double tie_break_weight = 1e-7;  // prefers late intermediate crossings
};

struct TimeProfileSolution {
  bool feasible = false;
  std::vector<double> t;
  double travel_time = 0.0;
  int iterations = 0;
};

/// Independent feasibility check of a time vector against the problem; kept
/// free of any solver state so it can certify solver output.
struct ProfileCheck {
  bool ok = false;
  double max_time_violation = 0.0;
  double max_deriv_violation = 0.0;
  std::string detail;
};
ProfileCheck validate_profile(const TimeProfileProblem& p, const std::vector<double>& t,
                              double tol_time = 1e-6, double tol_deriv = 1e-4);

/// Accel-smoothed fastest profile pushed up to window lower bounds; used as
/// the warm start and, when it already validates at the lower bound, as the
/// solution without invoking the solver.
std::vector<double> earliest_arrival_guess(const TimeProfileProblem& p);

/// Lower bound on t_n: fastest chained arrival honoring window lower bounds
/// but ignoring acceleration and clearance terms.
double travel_time_lower_bound(const TimeProfileProblem& p);

TimeProfileSolution solve_time_profile(const TimeProfileProblem& p, const NlpSettings& settings,
                                       const std::vector<double>* warm_start = nullptr);

/// Dense convex QP, min 1/2 d'G d + g0'd subject to A d >= b, via the
/// Goldfarb-Idnani dual active-set method. G must be positive definite.
struct QpResult {
  bool feasible = false;
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;  // multipliers per constraint row, 0 if inactive
};
QpResult solve_qp(const Eigen::MatrixXd& G, const Eigen::VectorXd& g0,
                  const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

/// Constraint values and Jacobian of the time-profile problem at x (the free
/// variables t_1..t_n). Exposed for the finite-difference gradient tests.
void profile_constraints(const TimeProfileProblem& p, const Eigen::VectorXd& x,
                         Eigen::VectorXd& c, Eigen::MatrixXd* jac);

}  // namespace lanefree
