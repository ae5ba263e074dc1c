#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace lanefree {

/// Closed interval [lo, hi] on the real line. Used for both lateral (spatial)
/// windows on a gate and temporal blocking windows.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool valid() const { return lo <= hi; }
  bool contains(double x) const { return lo <= x && x <= hi; }

  /// Open-interval overlap: intervals sharing only an endpoint do not overlap.
  bool overlaps_open(const Interval& other) const {
    return lo < other.hi && other.lo < hi;
  }

  Interval clamped(double bound_lo, double bound_hi) const {
    return {std::max(lo, bound_lo), std::min(hi, bound_hi)};
  }
};

inline bool operator==(const Interval& a, const Interval& b) {
  return a.lo == b.lo && a.hi == b.hi;
}

/// Union of a set of intervals as a sorted, disjoint list. Touching intervals
/// are merged (closed-set union).
inline std::vector<Interval> merge_union(std::vector<Interval> windows) {
  std::erase_if(windows, [](const Interval& w) { return !w.valid(); });
  std::sort(windows.begin(), windows.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const Interval& w : windows) {
    if (!merged.empty() && w.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, w.hi);
    } else {
      merged.push_back(w);
    }
  }
  return merged;
}

/// Complement of the union of `blocked` within [range_lo, range_hi).
/// Zero-length pieces are dropped.
inline std::vector<Interval> complement(const std::vector<Interval>& blocked,
                                        double range_lo, double range_hi) {
  std::vector<Interval> free;
  double cursor = range_lo;
  for (const Interval& b : merge_union(blocked)) {
    if (b.hi <= range_lo || b.lo >= range_hi) continue;
    const double lo = std::max(b.lo, range_lo);
    if (lo > cursor) free.push_back({cursor, lo});
    cursor = std::max(cursor, std::min(b.hi, range_hi));
  }
  if (cursor < range_hi) free.push_back({cursor, range_hi});
  return free;
}

}  // namespace lanefree
