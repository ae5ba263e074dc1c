#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace lanefree {

enum class Approach : std::uint8_t { south = 0, west = 1, north = 2, east = 3 };
enum class Turn : std::uint8_t { left = 0, straight = 1, right = 2 };
enum class StreetAxis : std::uint8_t { ns = 0, ew = 1 };

const char* to_string(Approach a);
const char* to_string(Turn t);
std::optional<Approach> approach_from_string(const std::string& s);
std::optional<Turn> turn_from_string(const std::string& s);

/// The leg a movement exits through, given where it came from and the turn.
Approach destination_of(Approach origin, Turn turn);
/// Turn required to go origin -> destination; nullopt for U-turns.
std::optional<Turn> turn_between(Approach origin, Approach destination);

struct MovementId {
  Approach origin = Approach::south;
  Turn turn = Turn::straight;

  Approach destination() const { return destination_of(origin, turn); }
  int index() const { return static_cast<int>(origin) * 3 + static_cast<int>(turn); }
  bool operator==(const MovementId&) const = default;
};

/// One leg of the intersection: a street axis plus which side of the box.
struct Leg {
  StreetAxis axis = StreetAxis::ns;
  int sign = -1;  // -1: negative plan coordinate side (south / west), +1: positive

  bool operator==(const Leg&) const = default;
};

Leg leg_of(Approach a);
StreetAxis street_of(Approach a);

/// Cross-section line of a street at which trajectories are anchored.
/// `station` is the distance from the intersection-box edge gate of its leg
/// (0 for the entry/exit gate on the box footprint boundary).
struct Gate {
  int id = -1;
  Leg leg;
  double station = 0.0;   // m from the box-edge gate, >= 0
  double plan_coord = 0.0;  // signed plan coordinate along the street axis
  double width = 0.0;     // m, equals the street's width
};

/// Intersection configuration: two perpendicular streets crossing at the
/// origin, curb returns of `curb_radius`, gates per the spacing rules.
struct IntersectionConfig {
  double street_width_ns = 6.0;   // m, lateral extent of the north-south street
  double street_width_ew = 6.0;   // m
  double curb_radius = 3.0;       // m
  double approach_length = 100.0; // m, registration gate -> box-edge gate
  double exit_length = 100.0;     // m, box-edge gate -> last downstream gate
  double gate_spacing = 10.0;     // m
  double near_gate_spacing = 5.0; // m, box-edge gate -> nearest approach gate

  void validate() const;  // throws std::invalid_argument on violation
};

/// Static description of one movement: the ordered gates it crosses plus the
/// fixed segment lengths outside the intersection box. The box segment length
/// depends on the trajectory's entry/exit alignment (Dubins path for turns)
/// and is computed per trajectory.
struct MovementPath {
  MovementId movement;
  std::vector<int> gate_ids;      // travel order
  int entry_index = -1;           // index into gate_ids of the box-edge entry gate
  int exit_index = -1;            // entry_index + 1
  std::vector<double> fixed_seg_len;  // size gate_ids.size()-1; box segment slot holds 0
};

struct DubinsResult {
  double length = 0.0;
  double radius = std::numeric_limits<double>::infinity();
};

/// Max-radius tangent arc between two perpendicular gate lines with a straight
/// remainder on the longer leg. Offsets are measured from the inner gate-line
/// corner along each gate line.
DubinsResult dubins_turn(double entry_offset, double exit_offset, Turn direction);

/// Curve speed limit from lateral acceleration. `paper_formula` selects the
/// literal sqrt(a/r) variant instead of the physical sqrt(a*r).
double turn_speed_limit(double radius, double a_lat_max, bool paper_formula = false);

class Layout {
 public:
  static Layout build(const IntersectionConfig& config);

  const IntersectionConfig& config() const { return config_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const Gate& gate(int id) const { return gates_[static_cast<std::size_t>(id)]; }
  const MovementPath& path(MovementId m) const { return paths_[static_cast<std::size_t>(m.index())]; }
  const std::array<MovementPath, 12>& paths() const { return paths_; }

  double street_width(StreetAxis axis) const {
    return axis == StreetAxis::ns ? config_.street_width_ns : config_.street_width_ew;
  }
  /// Width of the street a gate belongs to.
  double gate_width(int id) const { return gate(id).width; }
  /// Half-extent of the box footprint along `axis` (travel direction of that
  /// street), i.e. plan distance from center to that street's box-edge gates.
  double box_edge(StreetAxis axis) const {
    return 0.5 * street_width(cross(axis)) + config_.curb_radius;
  }
  static StreetAxis cross(StreetAxis axis) {
    return axis == StreetAxis::ns ? StreetAxis::ew : StreetAxis::ns;
  }

  /// Heading of a movement at a given gate index (origin heading before the
  /// box, destination heading from the exit gate on).
  Approach heading_at(const MovementPath& p, std::size_t gate_index) const;

  /// True if the rightmost lateral position for this heading on this street
  /// sits at the low end of the shared [0, w] frame.
  static bool right_at_low_end(Approach heading);

  /// Intersection-box segment for a given entry/exit alignment: length and
  /// turn radius (infinite radius and straight crossing for straights).
  DubinsResult box_segment(MovementId m, double y_entry, double y_exit) const;

  /// Offsets from the inner gate-line corner, used by box_segment and tests.
  std::pair<double, double> turn_offsets(MovementId m, double y_entry, double y_exit) const;

 private:
  IntersectionConfig config_;
  std::vector<Gate> gates_;
  std::array<MovementPath, 12> paths_{};
};

}  // namespace lanefree
