#include "rrb/core/interval_set.hpp"

#include <algorithm>
#include <string>

#include "rrb/core/error.hpp"

namespace rrb {

IntervalSet::IntervalSet(std::initializer_list<Interval> intervals)
    : intervals_(intervals) {
  normalize();
}

IntervalSet::IntervalSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  normalize();
}

void IntervalSet::normalize() {
  for (auto& iv : intervals_) {
    if (!(iv.lo <= iv.hi)) {
      throw InvalidArgument("interval with lo > hi: [" + std::to_string(iv.lo) + ", " +
                            std::to_string(iv.hi) + "]");
    }
    iv.lo = std::clamp(iv.lo, 0.0, 1.0);
    iv.hi = std::clamp(iv.hi, 0.0, 1.0);
  }
  std::sort(intervals_.begin(), intervals_.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  merged.reserve(intervals_.size());
  for (const auto& iv : intervals_) {
    if (!merged.empty() && iv.lo <= merged.back().hi + kTolerance) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  intervals_ = std::move(merged);
}

double IntervalSet::measure() const {
  double total = 0.0;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

bool IntervalSet::contains(double x) const {
  // First interval whose upper end is not left of x.
  auto it = std::lower_bound(intervals_.begin(), intervals_.end(), x,
                             [](const Interval& iv, double v) { return iv.hi + kTolerance < v; });
  return it != intervals_.end() && it->lo - kTolerance <= x;
}

IntervalSet IntervalSet::subtract(const IntervalSet& other) const {
  std::vector<Interval> out;
  auto cut = other.intervals_.begin();
  for (const auto& iv : intervals_) {
    double lo = iv.lo;
    while (cut != other.intervals_.end() && cut->hi < lo) ++cut;
    auto c = cut;
    for (; c != other.intervals_.end() && c->lo <= iv.hi; ++c) {
      if (c->lo > lo) out.push_back({lo, c->lo});
      lo = std::max(lo, c->hi);
      if (lo >= iv.hi) break;
    }
    if (lo < iv.hi) out.push_back({lo, iv.hi});
  }
  // Zero-length remnants carry no measure.
  std::erase_if(out, [](const Interval& iv) { return iv.length() <= kTolerance; });
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  return subtract(subtract(other));
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Interval> all(intervals_);
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  return IntervalSet(std::move(all));
}

}  // namespace rrb
