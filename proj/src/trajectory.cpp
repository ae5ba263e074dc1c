#include "lanefree/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lanefree {

double Trajectory::speed_at_gate(std::size_t i) const {
  const std::size_t n = seg_len.size();
  const std::size_t seg = std::min(i, n - 1);
  const double dt = t[seg + 1] - t[seg];
  if (dt <= 0.0) return std::numeric_limits<double>::infinity();
  return seg_len[seg] / dt;
}

double Trajectory::clearance_speed(std::size_t i, double v_floor, bool* clamped) const {
  const double v = speed_at_gate(i);
  if (clamped) *clamped = v < v_floor;
  return std::max(v, v_floor);
}

double Trajectory::cum_length(std::size_t gate_index) const {
  double s = 0.0;
  for (std::size_t i = 0; i < gate_index; ++i) s += seg_len[i];
  return s;
}

double Trajectory::arclength_at_time(double time) const {
  if (time <= t.front()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (time <= t[i + 1]) {
      const double dt = t[i + 1] - t[i];
      const double frac = dt > 0.0 ? (time - t[i]) / dt : 1.0;
      return s + frac * seg_len[i];
    }
    s += seg_len[i];
  }
  return s;
}

double Trajectory::time_at_arclength(double s) const {
  if (s <= 0.0) return t.front();
  double acc = 0.0;
  for (std::size_t i = 0; i < seg_len.size(); ++i) {
    if (s <= acc + seg_len[i]) {
      const double frac = seg_len[i] > 0.0 ? (s - acc) / seg_len[i] : 1.0;
      return t[i] + frac * (t[i + 1] - t[i]);
    }
    acc += seg_len[i];
  }
  return t.back();
}

int Trajectory::index_of_gate(int gid) const {
  const auto& ids = path->gate_ids;
  auto it = std::find(ids.begin(), ids.end(), gid);
  return it == ids.end() ? -1 : static_cast<int>(it - ids.begin());
}

PlanPoint gate_anchor(const Layout& layout, const Gate& gate, double y_lateral) {
  const double offset = y_lateral - layout.street_width(gate.leg.axis) / 2.0;
  if (gate.leg.axis == StreetAxis::ns) return {offset, gate.plan_coord, 0.0};
  return {gate.plan_coord, offset, 0.0};
}

namespace {

struct Vec2 {
  double x, y;
};

Vec2 travel_direction(Approach origin_like) {
  switch (origin_like) {
    case Approach::south: return {0.0, 1.0};
    case Approach::north: return {0.0, -1.0};
    case Approach::west: return {1.0, 0.0};
    case Approach::east: return {-1.0, 0.0};
  }
  return {0.0, 0.0};
}

void append_arc(std::vector<PlanPoint>& pts, Vec2 start, Vec2 h_in, double radius,
                bool left_turn, double s0) {
  // Quarter arc from `start` heading h_in, sweeping 90 degrees.
  const Vec2 n = left_turn ? Vec2{-h_in.y, h_in.x} : Vec2{h_in.y, -h_in.x};
  const Vec2 center{start.x + radius * n.x, start.y + radius * n.y};
  const double phi0 = std::atan2(start.y - center.y, start.x - center.x);
  const int steps = 45;
  for (int k = 1; k <= steps; ++k) {
    const double sweep = (M_PI / 2.0) * k / steps;
    const double phi = left_turn ? phi0 + sweep : phi0 - sweep;
    pts.push_back({center.x + radius * std::cos(phi), center.y + radius * std::sin(phi),
                   s0 + radius * sweep});
  }
}

}  // namespace

std::vector<PlanPoint> box_polyline(const Layout& layout, const Trajectory& traj) {
  const MovementPath& p = *traj.path;
  const Gate& entry = layout.gate(p.gate_ids[static_cast<std::size_t>(p.entry_index)]);
  const Gate& exit = layout.gate(p.gate_ids[static_cast<std::size_t>(p.exit_index)]);
  const PlanPoint e = gate_anchor(layout, entry, traj.y[static_cast<std::size_t>(p.entry_index)]);
  const PlanPoint x = gate_anchor(layout, exit, traj.y[static_cast<std::size_t>(p.exit_index)]);

  std::vector<PlanPoint> pts;
  pts.push_back({e.x, e.y, 0.0});
  if (traj.movement.turn == Turn::straight) {
    pts.push_back({x.x, x.y, std::hypot(x.x - e.x, x.y - e.y)});
    return pts;
  }

  const auto [a, b] = layout.turn_offsets(traj.movement,
                                          traj.y[static_cast<std::size_t>(p.entry_index)],
                                          traj.y[static_cast<std::size_t>(p.exit_index)]);
  const double r = std::min(a, b);
  const bool left = traj.movement.turn == Turn::left;
  const Vec2 h_in = travel_direction(traj.movement.origin);
  const Vec2 h_out =
      travel_direction(static_cast<Approach>((static_cast<int>(traj.movement.destination()) + 2) % 4));

  if (a >= b) {
    // Straight lead-in on the entry leg, then the arc.
    const double lead = a - b;
    Vec2 arc_start{e.x + lead * h_in.x, e.y + lead * h_in.y};
    if (lead > 0.0) pts.push_back({arc_start.x, arc_start.y, lead});
    append_arc(pts, arc_start, h_in, r, left, lead);
  } else {
    append_arc(pts, {e.x, e.y}, h_in, r, left, 0.0);
    const double tail = b - a;
    const PlanPoint& last = pts.back();
    pts.push_back({last.x + tail * h_out.x, last.y + tail * h_out.y, last.s + tail});
  }
  // Snap the numeric end onto the exact exit anchor.
  pts.back().x = x.x;
  pts.back().y = x.y;
  return pts;
}

Pose pose_at_time(const Layout& layout, const Trajectory& traj, double time) {
  const MovementPath& p = *traj.path;
  const std::size_t n_seg = traj.seg_len.size();
  std::size_t seg = 0;
  while (seg + 1 < n_seg && time > traj.t[seg + 1]) ++seg;
  const double dt = traj.t[seg + 1] - traj.t[seg];
  double frac = dt > 0.0 ? (time - traj.t[seg]) / dt : 1.0;
  frac = std::clamp(frac, 0.0, 1.0);

  if (static_cast<int>(seg) == p.entry_index) {
    const auto line = box_polyline(layout, traj);
    const double target = frac * line.back().s;
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
      if (target <= line[i + 1].s) {
        const double ds = line[i + 1].s - line[i].s;
        const double f = ds > 0.0 ? (target - line[i].s) / ds : 1.0;
        Pose pose;
        pose.x = line[i].x + f * (line[i + 1].x - line[i].x);
        pose.y = line[i].y + f * (line[i + 1].y - line[i].y);
        const double hn = std::hypot(line[i + 1].x - line[i].x, line[i + 1].y - line[i].y);
        if (hn > 0.0) {
          pose.hx = (line[i + 1].x - line[i].x) / hn;
          pose.hy = (line[i + 1].y - line[i].y) / hn;
        }
        return pose;
      }
    }
  }
  const PlanPoint a = gate_anchor(layout, layout.gate(p.gate_ids[seg]), traj.y[seg]);
  const PlanPoint b = gate_anchor(layout, layout.gate(p.gate_ids[seg + 1]), traj.y[seg + 1]);
  Pose pose;
  pose.x = a.x + frac * (b.x - a.x);
  pose.y = a.y + frac * (b.y - a.y);
  const double hn = std::hypot(b.x - a.x, b.y - a.y);
  if (hn > 0.0) {
    pose.hx = (b.x - a.x) / hn;
    pose.hy = (b.y - a.y) / hn;
  }
  return pose;
}

Trajectory TrajectoryFactory::make(int vehicle_id, const VehicleSpec& vehicle,
                                   MovementId movement, double t_register) const {
  Trajectory traj;
  traj.vehicle_id = vehicle_id;
  traj.vehicle = vehicle;
  traj.movement = movement;
  traj.path = &layout->path(movement);
  traj.t_register = t_register;
  const std::size_t n = traj.path->gate_ids.size();
  traj.y.resize(n);
  traj.t.assign(n, 0.0);
  traj.seg_len = traj.path->fixed_seg_len;
  traj.seg_vmax.assign(n - 1, vehicle.v_f);
  for (std::size_t i = 0; i < n; ++i) traj.y[i] = unconstrained_alignment(traj, i);
  refresh_box_segment(traj);
  return traj;
}

void TrajectoryFactory::refresh_box_segment(Trajectory& traj) const {
  const auto ei = static_cast<std::size_t>(traj.entry_index());
  const auto xi = static_cast<std::size_t>(traj.exit_index());
  if (traj.movement.turn == Turn::straight) {
    const double longitudinal = 2.0 * layout->box_edge(street_of(traj.movement.origin));
    traj.seg_len[ei] = std::hypot(longitudinal, traj.y[xi] - traj.y[ei]);
    traj.turn_radius = std::numeric_limits<double>::infinity();
    traj.seg_vmax[ei] = traj.vehicle.v_f;
    return;
  }
  const DubinsResult d = layout->box_segment(traj.movement, traj.y[ei], traj.y[xi]);
  traj.seg_len[ei] = d.length;
  traj.turn_radius = d.radius;
  traj.seg_vmax[ei] = std::min(
      traj.vehicle.v_f, turn_speed_limit(d.radius, traj.vehicle.a_lat_max, paper_turn_formula));
}

double TrajectoryFactory::unconstrained_alignment(const Trajectory& traj,
                                                  std::size_t gate_index) const {
  const MovementPath& p = *traj.path;
  const Gate& g = layout->gate(p.gate_ids[gate_index]);
  const double half = traj.vehicle.effective_width / 2.0;
  const Approach heading = layout->heading_at(p, gate_index);
  return Layout::right_at_low_end(heading) ? half : g.width - half;
}

}  // namespace lanefree
