#include "lanefree/nlp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lanefree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double capped_vmax(const TimeProfileProblem& p, std::size_t seg) {
  return p.seg_vmax[seg];
}

// Clearance speed index for a gate: outgoing segment, incoming at the last.
std::size_t clearance_segment(const TimeProfileProblem& p, std::size_t gate) {
  return gate < p.seg_len.size() ? gate : p.seg_len.size() - 1;
}

}  // namespace

ProfileCheck validate_profile(const TimeProfileProblem& p, const std::vector<double>& t,
                              double tol_time, double tol_deriv) {
  ProfileCheck r;
  std::ostringstream detail;
  const std::size_t n = p.seg_len.size();
  auto worse_time = [&](double v, const char* what, std::size_t i) {
    if (v > r.max_time_violation) {
      r.max_time_violation = v;
      detail.str("");
      detail << what << " at index " << i;
    }
  };
  if (t.size() != n + 1) {
    r.detail = "wrong profile length";
    return r;
  }
  worse_time(std::abs(t[0] - p.t_start), "start time", 0);

  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = t[i + 1] - t[i];
    worse_time(std::max(0.0, p.min_segment_time - dt), "segment duration", i);
    if (dt <= 0.0) {
      r.detail = detail.str();
      return r;
    }
    v[i] = p.seg_len[i] / dt;
    if (v[i] > capped_vmax(p, i) + tol_deriv) {
      r.max_deriv_violation = std::max(r.max_deriv_violation, v[i] - capped_vmax(p, i));
      detail.str("");
      detail << "speed limit on segment " << i;
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = (v[i + 1] - v[i]) / (t[i + 1] - t[i]);
    if (std::abs(a) > p.a_lon_max + tol_deriv) {
      r.max_deriv_violation = std::max(r.max_deriv_violation, std::abs(a) - p.a_lon_max);
      detail.str("");
      detail << "acceleration on segment " << i;
    }
  }
  if (p.initial_speed) {
    const double a = (v[0] - *p.initial_speed) / (t[1] - t[0]);
    if (std::abs(a) > p.a_lon_max + tol_deriv) {
      r.max_deriv_violation = std::max(r.max_deriv_violation, std::abs(a) - p.a_lon_max);
      detail.str("");
      detail << "acceleration at the replan seam";
    }
  }
  for (std::size_t i = 0; i <= n; ++i) {
    if (!p.windows[i]) continue;
    const Interval& w = *p.windows[i];
    worse_time(std::max(0.0, w.lo - t[i]), "window lower bound", i);
    const double clear = p.vehicle_length / v[clearance_segment(p, i)];
    worse_time(std::max(0.0, t[i] + clear - w.hi), "window clearance", i);
  }
  r.ok = r.max_time_violation <= tol_time && r.max_deriv_violation <= tol_deriv;
  r.detail = detail.str();
  return r;
}

double travel_time_lower_bound(const TimeProfileProblem& p) {
  double t = p.t_start;
  for (std::size_t i = 0; i < p.seg_len.size(); ++i) {
    if (p.windows[i]) t = std::max(t, p.windows[i]->lo);
    t += p.seg_len[i] / capped_vmax(p, i);
  }
  if (p.windows.back()) t = std::max(t, p.windows.back()->lo);
  return t - p.t_start;
}

std::vector<double> earliest_arrival_guess(const TimeProfileProblem& p) {
  const std::size_t n = p.seg_len.size();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = capped_vmax(p, i);
  // Two rounds of forward/backward smoothing against the accel coupling
  // a_i = (v_{i+1} - v_i) * v_i / l_i.
  for (int round = 0; round < 2; ++round) {
    if (p.initial_speed) {
      const double vi = *p.initial_speed;
      u[0] = std::min(u[0], 0.5 * (vi + std::sqrt(vi * vi + 4.0 * p.a_lon_max * p.seg_len[0])));
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      u[i + 1] = std::min(u[i + 1], u[i] + p.a_lon_max * p.seg_len[i] / u[i]);
    }
    for (std::size_t i = n - 1; i-- > 0;) {
      const double next = u[i + 1];
      u[i] = std::min(u[i], 0.5 * (next + std::sqrt(next * next + 4.0 * p.a_lon_max * p.seg_len[i])));
    }
  }
  std::vector<double> t(n + 1);
  t[0] = p.t_start;
  for (std::size_t i = 0; i < n; ++i) {
    t[i + 1] = t[i] + std::max(p.seg_len[i] / u[i], p.min_segment_time);
  }
  // Push to window lower bounds; delaying a gate delays everything after it.
  for (std::size_t i = 1; i <= n; ++i) {
    if (!p.windows[i]) continue;
    const double shift = p.windows[i]->lo - t[i];
    if (shift > 0.0) {
      for (std::size_t j = i; j <= n; ++j) t[j] += shift;
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Goldfarb-Idnani dual active-set QP.
// ---------------------------------------------------------------------------

QpResult solve_qp(const Eigen::MatrixXd& G, const Eigen::VectorXd& g0,
                  const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const auto n = static_cast<int>(G.rows());
  const auto m = static_cast<int>(A.rows());
  QpResult res;
  res.lambda = Eigen::VectorXd::Zero(m);

  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) return res;
  Eigen::VectorXd x = -llt.solve(g0);

  std::vector<int> active;
  Eigen::VectorXd u(0);
  const double tol = 1e-10;

  auto compute_steps = [&](const Eigen::VectorXd& np, Eigen::VectorXd& z, Eigen::VectorXd& r) {
    const Eigen::VectorXd Ginv_np = llt.solve(np);
    const auto k = static_cast<int>(active.size());
    if (k == 0) {
      z = Ginv_np;
      r.resize(0);
      return;
    }
    Eigen::MatrixXd N(n, k);
    for (int j = 0; j < k; ++j) N.col(j) = A.row(active[static_cast<std::size_t>(j)]).transpose();
    const Eigen::MatrixXd GinvN = llt.solve(N);
    const Eigen::MatrixXd S = N.transpose() * GinvN;  // k x k SPD-ish
    Eigen::LDLT<Eigen::MatrixXd> sl(S);
    r = sl.solve(N.transpose() * Ginv_np);
    z = Ginv_np - GinvN * r;
  };

  for (int guard = 0; guard < 50 * (m + 1); ++guard) {
    // Most violated inactive constraint.
    int p = -1;
    double worst = -tol;
    for (int i = 0; i < m; ++i) {
      if (std::find(active.begin(), active.end(), i) != active.end()) continue;
      const double s = A.row(i).dot(x) - b[i];
      if (s < worst) {
        worst = s;
        p = i;
      }
    }
    if (p < 0) {
      res.feasible = true;
      res.x = x;
      for (std::size_t j = 0; j < active.size(); ++j)
        res.lambda[active[j]] = u[static_cast<int>(j)];
      return res;
    }

    const Eigen::VectorXd np = A.row(p).transpose();
    double up = 0.0;
    for (int inner = 0; inner < m + 2; ++inner) {
      Eigen::VectorXd z, r;
      compute_steps(np, z, r);
      const double znorm = z.norm();

      // Dual blocking step among active constraints.
      double t1 = kInf;
      int blocking = -1;
      for (int j = 0; j < static_cast<int>(active.size()); ++j) {
        if (r.size() > j && r[j] > tol) {
          const double ratio = u[j] / r[j];
          if (ratio < t1) {
            t1 = ratio;
            blocking = j;
          }
        }
      }
      double t2 = kInf;
      const double s_p = A.row(p).dot(x) - b[p];
      if (znorm > tol) {
        const double denom = np.dot(z);
        if (denom > tol) t2 = -s_p / denom;
      }
      const double step = std::min(t1, t2);
      if (!std::isfinite(step)) return res;  // infeasible QP

      if (znorm > tol) x += step * z;
      for (int j = 0; j < static_cast<int>(active.size()); ++j) u[j] -= step * r[j];
      up += step;

      if (step == t2 && t2 < kInf) {
        active.push_back(p);
        Eigen::VectorXd u_new(active.size());
        u_new.head(u.size()) = u;
        u_new[static_cast<Eigen::Index>(active.size()) - 1] = up;
        u = u_new;
        break;
      }
      // Drop the blocking constraint and retry.
      if (blocking < 0) return res;
      active.erase(active.begin() + blocking);
      Eigen::VectorXd u_new(active.size());
      for (int j = 0, k = 0; j < u.size(); ++j) {
        if (j != blocking) u_new[k++] = u[j];
      }
      u = u_new;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Time-profile constraints.
// ---------------------------------------------------------------------------

void profile_constraints(const TimeProfileProblem& p, const Eigen::VectorXd& x,
                         Eigen::VectorXd& c, Eigen::MatrixXd* jac) {
  const std::size_t n = p.seg_len.size();
  auto T = [&](std::size_t i) { return i == 0 ? p.t_start : x[static_cast<int>(i) - 1]; };

  std::size_t m = 0;
  m += n;                      // ordering / speed caps
  m += (n >= 2) ? 2 * (n - 1) : 0;  // accel
  if (p.initial_speed) m += 2;
  if (p.windows[0]) m += 1;  // clearance of the fixed start gate
  for (std::size_t i = 1; i <= n; ++i) {
    if (p.windows[i]) m += 2;
  }
  c.resize(static_cast<int>(m));
  if (jac) jac->setZero(static_cast<int>(m), static_cast<int>(n));

  std::vector<double> dt(n), v(n);
  bool degenerate = false;
  for (std::size_t i = 0; i < n; ++i) {
    dt[i] = T(i + 1) - T(i);
    if (dt[i] < 1e-12) {
      dt[i] = 1e-12;
      degenerate = true;
    }
    v[i] = p.seg_len[i] / dt[i];
  }

  int row = 0;
  auto add_dt_grad = [&](int r, std::size_t seg, double coeff) {
    // d(dt_seg)/dt_k: -coeff at gate seg, +coeff at gate seg+1 (variables only)
    if (!jac) return;
    if (seg >= 1) (*jac)(r, static_cast<int>(seg) - 1) -= coeff;
    (*jac)(r, static_cast<int>(seg)) += coeff;
  };

  // 1) dt_i >= max(l_i / vmax_i, min_segment_time)
  for (std::size_t i = 0; i < n; ++i) {
    const double bound = std::max(p.seg_len[i] / capped_vmax(p, i), p.min_segment_time);
    c[row] = (T(i + 1) - T(i)) - bound;
    add_dt_grad(row, i, 1.0);
    ++row;
  }

  // 2) |(v_{i+1} - v_i)/dt_i| <= a_max
  auto dv_ddt = [&](std::size_t seg) { return -p.seg_len[seg] / (dt[seg] * dt[seg]); };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double e = (v[i + 1] - v[i]) / dt[i];
    for (int sign : {+1, -1}) {
      c[row] = p.a_lon_max - sign * e;
      if (jac) {
        // de/ddt_{i+1} and de/ddt_i, chained to the time variables.
        const double de_ddt_ip1 = dv_ddt(i + 1) / dt[i];
        const double de_ddt_i = (-dv_ddt(i) * dt[i] - (v[i + 1] - v[i])) / (dt[i] * dt[i]);
        add_dt_grad(row, i + 1, -sign * de_ddt_ip1);
        add_dt_grad(row, i, -sign * de_ddt_i);
      }
      ++row;
    }
  }
  if (p.initial_speed) {
    const double e = (v[0] - *p.initial_speed) / dt[0];
    for (int sign : {+1, -1}) {
      c[row] = p.a_lon_max - sign * e;
      if (jac) {
        const double de_ddt_0 = (dv_ddt(0) * dt[0] - (v[0] - *p.initial_speed)) / (dt[0] * dt[0]);
        add_dt_grad(row, 0, -sign * de_ddt_0);
      }
      ++row;
    }
  }

  // 3) windows: t_i >= lo and t_i + l_veh/v_seg <= hi (linear via dt).
  if (p.windows[0]) {
    const double clear_coeff = p.vehicle_length / p.seg_len[0];
    c[row] = p.windows[0]->hi - p.t_start - clear_coeff * dt[0];
    add_dt_grad(row, 0, -clear_coeff);
    ++row;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    if (!p.windows[i]) continue;
    const Interval& w = *p.windows[i];
    c[row] = T(i) - w.lo;
    if (jac) (*jac)(row, static_cast<int>(i) - 1) = 1.0;
    ++row;
    const std::size_t seg = clearance_segment(p, i);
    const double clear_coeff = p.vehicle_length / p.seg_len[seg];
    c[row] = w.hi - T(i) - clear_coeff * dt[seg];
    if (jac) {
      (*jac)(row, static_cast<int>(i) - 1) = -1.0;
      add_dt_grad(row, seg, -clear_coeff);
    }
    ++row;
  }

  if (degenerate) {
    // Keep the merit function finite but strongly repelled.
    for (int i = 0; i < c.size(); ++i) c[i] = std::min(c[i], 1e6);
  }
}

// ---------------------------------------------------------------------------
// SQP driver.
// ---------------------------------------------------------------------------

TimeProfileSolution solve_time_profile(const TimeProfileProblem& p, const NlpSettings& settings,
                                       const std::vector<double>* warm_start) {
  TimeProfileSolution sol;
  const std::size_t n = p.seg_len.size();
  if (n == 0) return sol;
  if (p.windows.size() != n + 1) throw std::invalid_argument("windows size mismatch");
  if (p.windows[0]) {
    const Interval& w = *p.windows[0];
    const double v0 = capped_vmax(p, 0);
    if (p.t_start < w.lo || p.t_start + p.vehicle_length / v0 > w.hi) return sol;
  }

  std::vector<double> guess = warm_start ? *warm_start : earliest_arrival_guess(p);
  Eigen::VectorXd x(static_cast<int>(n));
  for (std::size_t i = 1; i <= n; ++i) x[static_cast<int>(i) - 1] = guess[i];

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<int>(n));
  grad[static_cast<int>(n) - 1] = 1.0;
  for (int i = 0; i + 1 < static_cast<int>(n); ++i) grad[i] = -settings.tie_break_weight;

  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(static_cast<int>(n), static_cast<int>(n));
  Eigen::VectorXd c;
  Eigen::MatrixXd J;
  profile_constraints(p, x, c, &J);

  auto viol = [](const Eigen::VectorXd& cc) { return std::max(0.0, -cc.minCoeff()); };
  auto merit = [&](const Eigen::VectorXd& xx, double rho) {
    Eigen::VectorXd cc;
    profile_constraints(p, xx, cc, nullptr);
    double pen = 0.0;
    for (int i = 0; i < cc.size(); ++i) pen += std::max(0.0, -cc[i]);
    return grad.dot(xx) + rho * pen;
  };

  double rho = 1.0;
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(c.size());

  for (int iter = 0; iter < settings.max_iterations; ++iter) {
    sol.iterations = iter + 1;
    QpResult qp = solve_qp(B, grad, J, -c);
    Eigen::VectorXd d;
    if (qp.feasible) {
      d = qp.x;
      lambda = qp.lambda;
    } else {
      // Elastic relaxation: slack on every constraint with a linear penalty.
      const int m = static_cast<int>(c.size());
      const int nn = static_cast<int>(n);
      Eigen::MatrixXd Ge = Eigen::MatrixXd::Zero(nn + m, nn + m);
      Ge.topLeftCorner(nn, nn) = B;
      Ge.bottomRightCorner(m, m) = 1e-6 * Eigen::MatrixXd::Identity(m, m);
      Eigen::VectorXd ge = Eigen::VectorXd::Zero(nn + m);
      ge.head(nn) = grad;
      ge.tail(m).setConstant(1e4);
      Eigen::MatrixXd Ae = Eigen::MatrixXd::Zero(2 * m, nn + m);
      Ae.topLeftCorner(m, nn) = J;
      Ae.topRightCorner(m, m) = Eigen::MatrixXd::Identity(m, m);
      Ae.bottomRightCorner(m, m) = Eigen::MatrixXd::Identity(m, m);
      Eigen::VectorXd be = Eigen::VectorXd::Zero(2 * m);
      be.head(m) = -c;
      QpResult qe = solve_qp(Ge, ge, Ae, be);
      if (!qe.feasible) break;
      d = qe.x.head(nn);
      lambda = qe.lambda.head(c.size());
    }

    const double step_norm = d.lpNorm<Eigen::Infinity>();
    if (step_norm < 1e-10 && viol(c) <= 0.1 * settings.tolerance) {
      break;  // stationary and feasible
    }

    rho = std::max({rho, 1.5 * lambda.lpNorm<Eigen::Infinity>() + 1.0});
    const double m0 = merit(x, rho);
    double pen0 = 0.0;
    for (int i = 0; i < c.size(); ++i) pen0 += std::max(0.0, -c[i]);
    const double descent = grad.dot(d) - rho * pen0;

    double alpha = 1.0;
    Eigen::VectorXd x_new = x + d;
    for (int ls = 0; ls < 30; ++ls) {
      if (merit(x_new, rho) <= m0 + 0.1 * alpha * descent || alpha < 1e-12) break;
      alpha *= 0.5;
      x_new = x + alpha * d;
    }

    Eigen::VectorXd c_new;
    Eigen::MatrixXd J_new;
    profile_constraints(p, x_new, c_new, &J_new);

    // Damped BFGS on the Lagrangian gradient.
    Eigen::VectorXd gl_old = grad - J.transpose() * lambda;
    Eigen::VectorXd gl_new = grad - J_new.transpose() * lambda;
    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd yv = gl_new - gl_old;
    const double sBs = s.dot(B * s);
    const double sy = s.dot(yv);
    if (s.norm() > 1e-14 && sBs > 1e-14) {
      double theta = 1.0;
      if (sy < 0.2 * sBs) theta = 0.8 * sBs / (sBs - sy);
      Eigen::VectorXd r = theta * yv + (1.0 - theta) * (B * s);
      const double sr = s.dot(r);
      if (sr > 1e-12) {
        B -= (B * s) * (s.transpose() * B) / sBs;
        B += r * r.transpose() / sr;
      }
    }
    x = x_new;
    c = c_new;
    J = J_new;

    if (step_norm * alpha < 1e-11 && viol(c) <= 0.1 * settings.tolerance) break;
  }

  std::vector<double> t(n + 1);
  t[0] = p.t_start;
  for (std::size_t i = 1; i <= n; ++i) t[i] = x[static_cast<int>(i) - 1];
  const ProfileCheck check = validate_profile(p, t, settings.tolerance, 1e-4);
  if (!check.ok) return sol;
  sol.feasible = true;
  sol.t = std::move(t);
  sol.travel_time = sol.t.back() - sol.t.front();
  return sol;
}

}  // namespace lanefree
