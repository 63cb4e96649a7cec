#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace rrb {

struct Interval {
  double lo;
  double hi;
  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of disjoint closed subintervals of [0, 1], kept sorted.
///
/// Overlapping or touching intervals are merged on construction, so two
/// sets covering the same points compare equal.
class IntervalSet {
 public:
  /// Endpoint comparison tolerance.
  static constexpr double kTolerance = 1e-12;

  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> intervals);
  explicit IntervalSet(std::vector<Interval> intervals);

  static IntervalSet unit() { return IntervalSet{{0.0, 1.0}}; }

  std::span<const Interval> intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }

  double measure() const;
  bool contains(double x) const;

  IntervalSet subtract(const IntervalSet& other) const;
  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet unite(const IntervalSet& other) const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  void normalize();
  std::vector<Interval> intervals_;
};

inline IntervalSet interval_subtract(const IntervalSet& a, const IntervalSet& b) {
  return a.subtract(b);
}
inline double interval_measure(const IntervalSet& a) { return a.measure(); }
inline bool interval_contains(const IntervalSet& a, double x) { return a.contains(x); }

}  // namespace rrb
