#include "lanefree/conflict.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lanefree {

const char* to_string(ConflictCase c) {
  switch (c) {
    case ConflictCase::approach: return "approach";
    case ConflictCase::perpendicular: return "perpendicular";
    case ConflictCase::merge: return "merge";
    case ConflictCase::shared_origin: return "shared-origin";
    case ConflictCase::residual: return "residual";
  }
  return "?";
}

Conflict approach_conflict(const Trajectory& booked, std::size_t gate_index, double g,
                           double v_floor, double street_width) {
  Conflict c;
  c.gate_id = booked.gate_id(gate_index);
  const double half = booked.vehicle.effective_width / 2.0;
  c.psi = Interval{booked.y[gate_index] - half, booked.y[gate_index] + half}
              .clamped(0.0, street_width);
  const double v = booked.clearance_speed(gate_index, v_floor, &c.speed_clamped);
  c.phi = {booked.t[gate_index] - g, booked.t[gate_index] + booked.vehicle.length / v + g};
  c.source = booked.vehicle_id;
  c.tag = ConflictCase::approach;
  return c;
}

Conflict signal_red_conflict(double red_start, double red_end, double street_width,
                             int gate_id) {
  if (!(red_start < red_end)) throw std::invalid_argument("red window must have start < end");
  Conflict c;
  c.gate_id = gate_id;
  c.psi = {0.0, street_width};
  c.phi = {red_start, red_end};
  c.source = kSignalSource;
  c.tag = ConflictCase::approach;
  return c;
}

ConflictCase classify_intersection_pair(MovementId a, MovementId b) {
  if (a.origin == b.origin) return ConflictCase::shared_origin;
  if (street_of(a.origin) != street_of(b.origin)) return ConflictCase::perpendicular;
  if (a.destination() == b.destination()) return ConflictCase::merge;
  return ConflictCase::residual;
}

namespace {

double dist2_point_seg(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double qx = ax + t * dx - px, qy = ay + t * dy - py;
  return qx * qx + qy * qy;
}

double dist2_seg_seg(double ax, double ay, double bx, double by, double cx, double cy,
                     double dx, double dy) {
  // Segments intersect -> distance 0.
  auto orient = [](double ox, double oy, double px, double py, double qx, double qy) {
    return (px - ox) * (qy - oy) - (py - oy) * (qx - ox);
  };
  const double o1 = orient(ax, ay, bx, by, cx, cy);
  const double o2 = orient(ax, ay, bx, by, dx, dy);
  const double o3 = orient(cx, cy, dx, dy, ax, ay);
  const double o4 = orient(cx, cy, dx, dy, bx, by);
  if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) return 0.0;
  double best = dist2_point_seg(ax, ay, cx, cy, dx, dy);
  best = std::min(best, dist2_point_seg(bx, by, cx, cy, dx, dy));
  best = std::min(best, dist2_point_seg(cx, cy, ax, ay, bx, by));
  best = std::min(best, dist2_point_seg(dx, dy, ax, ay, bx, by));
  return best;
}

/// Arclength interval of `line` where the perpendicular strip of half-width
/// `half_a` comes within `half_b` of `other`; empty optional when nowhere.
std::optional<Interval> strip_overlap(const std::vector<PlanPoint>& line, double half_a,
                                      const std::vector<PlanPoint>& other, double half_b,
                                      double step) {
  const double total = line.back().s;
  bool any = false;
  double lo = 0.0, hi = 0.0;
  std::size_t seg = 0;
  const int n_samples = std::max(2, static_cast<int>(std::ceil(total / step)) + 1);
  for (int k = 0; k < n_samples; ++k) {
    const double s = std::min(total, k * step);
    while (seg + 2 < line.size() && s > line[seg + 1].s) ++seg;
    const double ds = line[seg + 1].s - line[seg].s;
    const double f = ds > 0.0 ? (s - line[seg].s) / ds : 0.0;
    const double px = line[seg].x + f * (line[seg + 1].x - line[seg].x);
    const double py = line[seg].y + f * (line[seg + 1].y - line[seg].y);
    double tx = line[seg + 1].x - line[seg].x, ty = line[seg + 1].y - line[seg].y;
    const double tn = std::hypot(tx, ty);
    if (tn > 0.0) { tx /= tn; ty /= tn; }
    const double nx = -ty * half_a, ny = tx * half_a;
    const double lim2 = half_b * half_b;
    bool touch = false;
    for (std::size_t j = 0; j + 1 < other.size() && !touch; ++j) {
      touch = dist2_seg_seg(px - nx, py - ny, px + nx, py + ny, other[j].x, other[j].y,
                            other[j + 1].x, other[j + 1].y) < lim2;
    }
    if (touch) {
      if (!any) lo = s;
      hi = s;
      any = true;
    }
  }
  if (!any) return std::nullopt;
  // One conservative step outward for the sampling quantization.
  return Interval{std::max(0.0, lo - step), std::min(total, hi + step)};
}

std::uint64_t overlap_key(const Trajectory& a, const Trajectory& b) {
  auto q = [](double y) {
    return static_cast<std::uint64_t>(std::lround(std::clamp(y, 0.0, 16.0) * 1000.0)) & 0x3fff;
  };
  const auto ea = static_cast<std::size_t>(a.entry_index());
  const auto xa = static_cast<std::size_t>(a.exit_index());
  const auto eb = static_cast<std::size_t>(b.entry_index());
  const auto xb = static_cast<std::size_t>(b.exit_index());
  std::uint64_t key = (static_cast<std::uint64_t>(a.movement.index()) << 4) |
                      static_cast<std::uint64_t>(b.movement.index());
  key = (key << 14) | q(a.y[ea]);
  key = (key << 14) | q(a.y[xa]);
  key = (key << 14) | q(b.y[eb]);
  key = (key << 14) | q(b.y[xb]);
  // Effective widths shift the overlap too; fold them in coarsely.
  key ^= static_cast<std::uint64_t>(std::lround(a.vehicle.effective_width * 100.0)) << 57;
  key ^= static_cast<std::uint64_t>(std::lround(b.vehicle.effective_width * 100.0)) << 49;
  return key;
}

struct RegionTimes {
  double t_in;
  double t_out;
};

RegionTimes region_occupancy(const Trajectory& t, const Interval& s_box) {
  const double s0 = t.cum_length(static_cast<std::size_t>(t.entry_index()));
  return {t.time_at_arclength(s0 + s_box.lo),
          t.time_at_arclength(s0 + s_box.hi + t.vehicle.length)};
}

}  // namespace

ConflictEngine::ConflictEngine(const Layout& layout, const ConflictParams& params)
    : layout_(&layout), params_(params), shared_gates_(144) {
  for (int ma = 0; ma < 12; ++ma) {
    for (int mb = 0; mb < 12; ++mb) {
      const auto& pa = layout.paths()[static_cast<std::size_t>(ma)];
      const auto& pb = layout.paths()[static_cast<std::size_t>(mb)];
      auto& shared = shared_gates_[static_cast<std::size_t>(ma * 12 + mb)];
      for (std::size_t ia = 0; ia < pa.gate_ids.size(); ++ia) {
        for (std::size_t ib = 0; ib < pb.gate_ids.size(); ++ib) {
          if (pa.gate_ids[ia] == pb.gate_ids[ib]) {
            shared.push_back({pa.gate_ids[ia], static_cast<int>(ia), static_cast<int>(ib)});
          }
        }
      }
    }
  }
}

double ConflictEngine::box_clear_time(const Trajectory& t) {
  return t.time_at_arclength(t.cum_length(static_cast<std::size_t>(t.exit_index())) +
                             t.vehicle.length);
}

std::optional<BoxOverlap> ConflictEngine::box_overlap(const Trajectory& a,
                                                      const Trajectory& b) const {
  const std::uint64_t key = overlap_key(a, b);
  if (auto it = overlap_cache_.find(key); it != overlap_cache_.end()) return it->second;

  const auto line_a = box_polyline(*layout_, a);
  const auto line_b = box_polyline(*layout_, b);
  const double half_a = a.vehicle.effective_width / 2.0;
  const double half_b = b.vehicle.effective_width / 2.0;
  const auto sa = strip_overlap(line_a, half_a, line_b, half_b, params_.sample_step);
  const auto sb = strip_overlap(line_b, half_b, line_a, half_a, params_.sample_step);

  std::optional<BoxOverlap> result;
  if (sa && sb) result = BoxOverlap{*sa, *sb};
  if (overlap_cache_.size() > 200000) overlap_cache_.clear();
  overlap_cache_.emplace(key, result);
  return result;
}

bool ConflictEngine::windows_violate(const Trajectory& a, std::size_t ia, const Trajectory& b,
                                     std::size_t ib) const {
  const double half_sum = (a.vehicle.effective_width + b.vehicle.effective_width) / 2.0;
  if (!(std::abs(a.y[ia] - b.y[ib]) < half_sum)) return false;
  const double va = a.clearance_speed(ia, params_.v_floor);
  const double vb = b.clearance_speed(ib, params_.v_floor);
  const Interval blocked_a{a.t[ia] - params_.g, a.t[ia] + a.vehicle.length / va + params_.g};
  const Interval occupancy_b{b.t[ib], b.t[ib] + b.vehicle.length / vb};
  return blocked_a.overlaps_open(occupancy_b);
}

void ConflictEngine::ordinary_gate_conflicts(const Trajectory& a, const Trajectory& b,
                                             bool skip_shared_exit,
                                             std::vector<PairConflict>& out) const {
  const auto& shared =
      shared_gates_[static_cast<std::size_t>(a.movement.index() * 12 + b.movement.index())];
  const int exit_gate = a.gate_id(static_cast<std::size_t>(a.exit_index()));
  for (const SharedGate& sg : shared) {
    if (skip_shared_exit && sg.gate_id == exit_gate) continue;
    const auto ia = static_cast<std::size_t>(sg.index_a);
    const auto ib = static_cast<std::size_t>(sg.index_b);
    if (windows_violate(a, ia, b, ib)) {
      out.push_back({ConflictCase::approach, a.vehicle_id, b.vehicle_id, sg.gate_id, sg.gate_id,
                     std::min(a.t[ia], b.t[ib])});
    }
  }
}

bool ConflictEngine::pair_violates(const Trajectory& a, const Trajectory& b, ConflictCase tag,
                                   std::vector<PairConflict>& out) const {
  const auto ea = static_cast<std::size_t>(a.entry_index());
  const auto eb = static_cast<std::size_t>(b.entry_index());
  switch (tag) {
    case ConflictCase::approach:
      return false;
    case ConflictCase::perpendicular: {
      const auto ov = box_overlap(a, b);
      if (!ov) return false;
      const RegionTimes ra = region_occupancy(a, ov->s_a);
      const RegionTimes rb = region_occupancy(b, ov->s_b);
      const bool separated =
          rb.t_in >= ra.t_out + params_.g || ra.t_in >= rb.t_out + params_.g;
      if (separated) return false;
      out.push_back({tag, a.vehicle_id, b.vehicle_id, a.gate_id(ea), b.gate_id(eb),
                     std::min(ra.t_in, rb.t_in)});
      return true;
    }
    case ConflictCase::merge: {
      const auto xa = static_cast<std::size_t>(a.exit_index());
      const auto xb = static_cast<std::size_t>(b.exit_index());
      // b passes strictly on its own origin side of a, or they conflict.
      const bool b_high = leg_of(b.movement.origin).sign > 0;
      const double edge_a = b_high ? a.y[xa] + a.vehicle.effective_width / 2.0
                                   : a.y[xa] - a.vehicle.effective_width / 2.0;
      const double edge_b = b_high ? b.y[xb] - b.vehicle.effective_width / 2.0
                                   : b.y[xb] + b.vehicle.effective_width / 2.0;
      const bool spatial = b_high ? edge_b < edge_a : edge_b > edge_a;
      if (!spatial) return false;
      const double va = a.clearance_speed(xa, params_.v_floor);
      const double vb = b.clearance_speed(xb, params_.v_floor);
      const Interval blocked_a{a.t[xa] - params_.g,
                               a.t[xa] + a.vehicle.length / va + params_.g};
      const Interval occupancy_b{b.t[xb], b.t[xb] + b.vehicle.length / vb};
      if (!blocked_a.overlaps_open(occupancy_b)) return false;
      const int gate = a.gate_id(xa);
      out.push_back({tag, a.vehicle_id, b.vehicle_id, gate, gate, std::min(a.t[xa], b.t[xb])});
      return true;
    }
    case ConflictCase::shared_origin:
    case ConflictCase::residual: {
      if (!box_overlap(a, b)) return false;
      const bool a_first =
          a.t[ea] < b.t[eb] || (a.t[ea] == b.t[eb] && a.vehicle_id < b.vehicle_id);
      const Trajectory& first = a_first ? a : b;
      const Trajectory& second = a_first ? b : a;
      const double second_entry = second.t[static_cast<std::size_t>(second.entry_index())];
      if (!(second_entry < box_clear_time(first) + params_.g)) return false;
      out.push_back({tag, a.vehicle_id, b.vehicle_id, a.gate_id(ea), b.gate_id(eb),
                     std::min(a.t[ea], b.t[eb])});
      return true;
    }
  }
  return false;
}

std::vector<PairConflict> ConflictEngine::detect(
    std::span<const Trajectory* const> trajectories, std::span<const Conflict> standing) const {
  std::vector<PairConflict> out;
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const Trajectory& a = *trajectories[i];
    for (std::size_t j = i + 1; j < trajectories.size(); ++j) {
      const Trajectory& b = *trajectories[j];
      // Vehicles far apart in time cannot interact.
      const double margin = params_.g + 60.0;
      if (a.t.front() > b.t.back() + margin || b.t.front() > a.t.back() + margin) continue;
      const ConflictCase tag = classify_intersection_pair(a.movement, b.movement);
      ordinary_gate_conflicts(a, b, tag == ConflictCase::merge, out);
      pair_violates(a, b, tag, out);
    }
    for (const Conflict& s : standing) {
      const int idx = a.index_of_gate(s.gate_id);
      if (idx < 0) continue;
      const auto ia = static_cast<std::size_t>(idx);
      const double half = a.vehicle.effective_width / 2.0;
      if (!s.psi.overlaps_open({a.y[ia] - half, a.y[ia] + half})) continue;
      const double va = a.clearance_speed(ia, params_.v_floor);
      if (!s.phi.overlaps_open({a.t[ia], a.t[ia] + a.vehicle.length / va})) continue;
      out.push_back({ConflictCase::approach, a.vehicle_id, kSignalSource, s.gate_id, s.gate_id,
                     std::max(s.phi.lo, a.t[ia])});
    }
  }
  std::sort(out.begin(), out.end(), [](const PairConflict& x, const PairConflict& y) {
    if (x.start_time != y.start_time) return x.start_time < y.start_time;
    if (x.vehicle_a != y.vehicle_a) return x.vehicle_a < y.vehicle_a;
    if (x.vehicle_b != y.vehicle_b) return x.vehicle_b < y.vehicle_b;
    return x.gate_a < y.gate_a;
  });
  return out;
}

std::optional<Conflict> ConflictEngine::materialize(const PairConflict& pc, int constrained_id,
                                                    const Trajectory& a, const Trajectory& b,
                                                    std::span<const Conflict> standing) const {
  if (pc.vehicle_b == kSignalSource) {
    // Signal windows are standing constraints; hand back the matching one.
    for (const Conflict& s : standing) {
      if (s.gate_id == pc.gate_a && s.phi.contains(pc.start_time)) return s;
    }
    return std::nullopt;
  }
  const bool a_constrained = a.vehicle_id == constrained_id;
  const Trajectory& ego = a_constrained ? a : b;
  const Trajectory& other = a_constrained ? b : a;
  const int ego_gate = a_constrained ? pc.gate_a : pc.gate_b;
  const double g = params_.g;

  switch (pc.tag) {
    case ConflictCase::approach: {
      const int io = other.index_of_gate(ego_gate);
      if (io < 0) return std::nullopt;
      Conflict c = approach_conflict(other, static_cast<std::size_t>(io), g, params_.v_floor,
                                     layout_->gate_width(ego_gate));
      return c;
    }
    case ConflictCase::perpendicular: {
      const auto ov = a_constrained ? box_overlap(a, b) : box_overlap(b, a);
      if (!ov) return std::nullopt;
      const Interval& s_ego = ov->s_a;
      const Interval& s_other = ov->s_b;
      const RegionTimes occ = region_occupancy(other, s_other);
      const auto ee = static_cast<std::size_t>(ego.entry_index());
      const auto ex = static_cast<std::size_t>(ego.exit_index());
      double v2 = ego.seg_vmax[ee];
      const double dt = ego.t[ex] - ego.t[ee];
      if (dt > 0.0) v2 = ego.seg_len[ee] / dt;
      v2 = std::max(v2, params_.v_floor);
      Conflict c;
      c.gate_id = ego.gate_id(ee);
      const double half = ego.vehicle.effective_width / 2.0;
      c.psi = Interval{ego.y[ee] - half, ego.y[ee] + half}
                  .clamped(0.0, layout_->gate_width(c.gate_id));
      c.phi = {occ.t_in - g - s_ego.hi / v2, occ.t_out + g - s_ego.lo / v2};
      c.source = other.vehicle_id;
      c.tag = pc.tag;
      return c;
    }
    case ConflictCase::merge: {
      const auto xo = static_cast<std::size_t>(other.exit_index());
      const double w_street = layout_->gate_width(ego_gate);
      const double half_o = other.vehicle.effective_width / 2.0;
      Conflict c;
      c.gate_id = ego_gate;
      if (params_.merge_psi_own) {
        const auto xe = static_cast<std::size_t>(ego.exit_index());
        const double half_e = ego.vehicle.effective_width / 2.0;
        c.psi = Interval{ego.y[xe] - half_e, ego.y[xe] + half_e}.clamped(0.0, w_street);
      } else {
        const bool ego_high = leg_of(ego.movement.origin).sign > 0;
        c.psi = ego_high ? Interval{0.0, other.y[xo] + half_o}
                         : Interval{other.y[xo] - half_o, w_street};
        c.psi = c.psi.clamped(0.0, w_street);
      }
      const double vo = other.clearance_speed(xo, params_.v_floor, &c.speed_clamped);
      c.phi = {other.t[xo] - g, other.t[xo] + other.vehicle.length / vo + g};
      c.source = other.vehicle_id;
      c.tag = pc.tag;
      return c;
    }
    case ConflictCase::shared_origin: {
      const auto eo = static_cast<std::size_t>(other.entry_index());
      const auto ee = static_cast<std::size_t>(ego.entry_index());
      const double w_street = layout_->gate_width(ego_gate);
      const double half_o = other.vehicle.effective_width / 2.0;
      Conflict c;
      c.gate_id = ego_gate;
      const bool ego_below = ego.y[ee] < other.y[eo];
      c.psi = ego_below ? Interval{other.y[eo] - half_o, w_street}
                        : Interval{0.0, other.y[eo] + half_o};
      c.psi = c.psi.clamped(0.0, w_street);
      c.phi = {other.t[eo] - g, box_clear_time(other) + g};
      c.source = other.vehicle_id;
      c.tag = pc.tag;
      return c;
    }
    case ConflictCase::residual: {
      const auto eo = static_cast<std::size_t>(other.entry_index());
      const auto ee = static_cast<std::size_t>(ego.entry_index());
      Conflict c;
      c.gate_id = ego.gate_id(ee);
      const double half = ego.vehicle.effective_width / 2.0;
      c.psi = Interval{ego.y[ee] - half, ego.y[ee] + half}
                  .clamped(0.0, layout_->gate_width(c.gate_id));
      c.phi = {other.t[eo] - g, box_clear_time(other) + g};
      c.source = other.vehicle_id;
      c.tag = pc.tag;
      return c;
    }
  }
  return std::nullopt;
}

}  // namespace lanefree
