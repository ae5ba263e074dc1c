#include "lanefree/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lanefree {

namespace {
constexpr double kTol = 1e-9;
}

const char* to_string(Approach a) {
  switch (a) {
    case Approach::south: return "south";
    case Approach::west: return "west";
    case Approach::north: return "north";
    case Approach::east: return "east";
  }
  return "?";
}

const char* to_string(Turn t) {
  switch (t) {
    case Turn::left: return "left";
    case Turn::straight: return "straight";
    case Turn::right: return "right";
  }
  return "?";
}

std::optional<Approach> approach_from_string(const std::string& s) {
  for (int i = 0; i < 4; ++i) {
    auto a = static_cast<Approach>(i);
    if (s == to_string(a)) return a;
  }
  return std::nullopt;
}

std::optional<Turn> turn_from_string(const std::string& s) {
  for (int i = 0; i < 3; ++i) {
    auto t = static_cast<Turn>(i);
    if (s == to_string(t)) return t;
  }
  return std::nullopt;
}

Approach destination_of(Approach origin, Turn turn) {
  // Compass order south, west, north, east is counterclockwise, so a left
  // turn advances one step and a right turn three.
  const int step = turn == Turn::left ? 1 : turn == Turn::straight ? 2 : 3;
  return static_cast<Approach>((static_cast<int>(origin) + step) % 4);
}

std::optional<Turn> turn_between(Approach origin, Approach destination) {
  const int d = (static_cast<int>(destination) - static_cast<int>(origin) + 4) % 4;
  if (d == 1) return Turn::left;
  if (d == 2) return Turn::straight;
  if (d == 3) return Turn::right;
  return std::nullopt;
}

Leg leg_of(Approach a) {
  switch (a) {
    case Approach::south: return {StreetAxis::ns, -1};
    case Approach::north: return {StreetAxis::ns, +1};
    case Approach::west: return {StreetAxis::ew, -1};
    case Approach::east: return {StreetAxis::ew, +1};
  }
  return {};
}

StreetAxis street_of(Approach a) { return leg_of(a).axis; }

void IntersectionConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (!(street_width_ns > 0.0) || !(street_width_ew > 0.0)) fail("street width must be > 0");
  if (curb_radius < 0.0) fail("curb radius must be >= 0");
  if (!(gate_spacing > 0.0)) fail("gate spacing must be > 0");
  if (!(near_gate_spacing > 0.0)) fail("near gate spacing must be > 0");
  if (near_gate_spacing > gate_spacing + kTol) fail("near gate spacing must not exceed gate spacing");
  if (approach_length + kTol < gate_spacing) fail("approach length must be >= gate spacing");
  if (near_gate_spacing > approach_length + kTol || near_gate_spacing > exit_length + kTol)
    fail("near gate spacing must fit within approach and exit lengths");
  if (!(approach_length > 0.0) || !(exit_length > 0.0))
    fail("intersection box footprint overlaps the first gate");
}

DubinsResult dubins_turn(double entry_offset, double exit_offset, Turn) {
  if (!(entry_offset > 0.0) || !(exit_offset > 0.0))
    throw std::invalid_argument("dubins offsets must be > 0");
  const double r = std::min(entry_offset, exit_offset);
  return {r * M_PI / 2.0 + std::abs(entry_offset - exit_offset), r};
}

double turn_speed_limit(double radius, double a_lat_max, bool paper_formula) {
  if (std::isinf(radius)) return std::numeric_limits<double>::infinity();
  if (!(radius > 0.0) || a_lat_max < 0.0)
    throw std::invalid_argument("turn_speed_limit needs radius > 0, a_lat >= 0");
  return paper_formula ? std::sqrt(a_lat_max / radius) : std::sqrt(a_lat_max * radius);
}

bool Layout::right_at_low_end(Approach heading) {
  // Shared lateral frames start at the west curb (ns street) and south curb
  // (ew street); keeping right under right-hand traffic maps to the low end
  // for southbound and eastbound travel.
  return heading == Approach::north || heading == Approach::west;
}

Approach Layout::heading_at(const MovementPath& p, std::size_t gate_index) const {
  if (static_cast<int>(gate_index) <= p.entry_index) return p.movement.origin;
  // Past the box the vehicle travels like one that originated opposite the
  // destination leg.
  return static_cast<Approach>((static_cast<int>(p.movement.destination()) + 2) % 4);
}

std::pair<double, double> Layout::turn_offsets(MovementId m, double y_entry,
                                               double y_exit) const {
  const Leg lo = leg_of(m.origin);
  const Leg ld = leg_of(m.destination());
  const double wo = street_width(lo.axis);
  const double wd = street_width(ld.axis);
  // Corner of the (infinite) entry and exit gate lines.
  const double corner_on_origin_lat = ld.sign * box_edge(ld.axis) + wo / 2.0;
  const double corner_on_dest_lat = lo.sign * box_edge(lo.axis) + wd / 2.0;
  const double a = std::abs(y_entry - corner_on_origin_lat);
  const double b = std::abs(y_exit - corner_on_dest_lat);
  return {std::max(a, kTol), std::max(b, kTol)};
}

DubinsResult Layout::box_segment(MovementId m, double y_entry, double y_exit) const {
  if (m.turn == Turn::straight) {
    return {2.0 * box_edge(street_of(m.origin)), std::numeric_limits<double>::infinity()};
  }
  const auto [a, b] = turn_offsets(m, y_entry, y_exit);
  return dubins_turn(a, b, m.turn);
}

namespace {

// Station pattern for one planning length L: box-edge gate, near gate, then
// regular gates every `spacing` counted down from the registration gate at L.
void add_pattern(std::vector<double>& stations, double length, double spacing, double near) {
  stations.push_back(0.0);
  stations.push_back(near);
  for (double d = length; d > near + kTol; d -= spacing) stations.push_back(d);
}

std::vector<double> leg_stations(const IntersectionConfig& c) {
  std::vector<double> s;
  add_pattern(s, c.approach_length, c.gate_spacing, c.near_gate_spacing);
  add_pattern(s, c.exit_length, c.gate_spacing, c.near_gate_spacing);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end(),
                      [](double a, double b) { return std::abs(a - b) < kTol; }),
          s.end());
  return s;
}

}  // namespace

Layout Layout::build(const IntersectionConfig& config) {
  config.validate();
  Layout layout;
  layout.config_ = config;

  const std::vector<double> stations = leg_stations(config);
  const std::array<Leg, 4> legs = {leg_of(Approach::south), leg_of(Approach::north),
                                   leg_of(Approach::west), leg_of(Approach::east)};

  // gate_at[leg order][station index] -> id
  std::array<std::vector<int>, 4> ids_per_leg;
  for (std::size_t li = 0; li < legs.size(); ++li) {
    const Leg leg = legs[li];
    for (double st : stations) {
      Gate g;
      g.id = static_cast<int>(layout.gates_.size());
      g.leg = leg;
      g.station = st;
      g.plan_coord = leg.sign * (layout.box_edge(leg.axis) + st);
      g.width = layout.street_width(leg.axis);
      layout.gates_.push_back(g);
      ids_per_leg[li].push_back(g.id);
    }
  }

  auto leg_index = [&](Leg leg) {
    for (std::size_t i = 0; i < legs.size(); ++i)
      if (legs[i] == leg) return i;
    throw std::logic_error("unknown leg");
  };

  for (int ai = 0; ai < 4; ++ai) {
    for (int ti = 0; ti < 3; ++ti) {
      MovementId m{static_cast<Approach>(ai), static_cast<Turn>(ti)};
      MovementPath p;
      p.movement = m;
      const auto& origin_ids = ids_per_leg[leg_index(leg_of(m.origin))];
      const auto& dest_ids = ids_per_leg[leg_index(leg_of(m.destination()))];
      // Approach: stations within approach_length, farthest first.
      for (auto it = origin_ids.rbegin(); it != origin_ids.rend(); ++it) {
        if (layout.gate(*it).station <= config.approach_length + kTol)
          p.gate_ids.push_back(*it);
      }
      p.entry_index = static_cast<int>(p.gate_ids.size()) - 1;
      p.exit_index = p.entry_index + 1;
      for (int id : dest_ids) {
        if (layout.gate(id).station <= config.exit_length + kTol) p.gate_ids.push_back(id);
      }
      p.fixed_seg_len.assign(p.gate_ids.size() - 1, 0.0);
      for (std::size_t i = 0; i + 1 < p.gate_ids.size(); ++i) {
        if (static_cast<int>(i) == p.entry_index) continue;  // box segment, per trajectory
        p.fixed_seg_len[i] = std::abs(layout.gate(p.gate_ids[i + 1]).station -
                                      layout.gate(p.gate_ids[i]).station);
      }
      layout.paths_[static_cast<std::size_t>(m.index())] = std::move(p);
    }
  }
  return layout;
}

}  // namespace lanefree
