#include "rrb/bounds/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rrb/core/error.hpp"

namespace rrb::bounds {

namespace {

constexpr double kSlopeTolerance = 1e-9;

bool in_band(double v, double lo, double hi, bool lo_inclusive, bool hi_inclusive) {
  const bool above = lo_inclusive ? v >= lo : v > lo;
  const bool below = hi_inclusive ? v <= hi : v < hi;
  return above && below;
}

}  // namespace

void BoundInstance::validate() const {
  if (points.size() < 2) throw InvalidArgument("instance needs at least two breakpoints");
  if (points.front().x != 0.0 || points.back().x != 1.0) {
    throw InvalidArgument("breakpoints must span [0, 1]");
  }
  double lowest = points.front().v;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].v < 0.0) throw InvalidArgument("v must be non-negative");
    lowest = std::min(lowest, points[i].v);
    if (i == 0) continue;
    const double dx = points[i].x - points[i - 1].x;
    if (!(dx > 0.0)) throw InvalidArgument("breakpoints must be strictly increasing");
    const double slope = std::abs(points[i].v - points[i - 1].v) / dx;
    if (slope > lipschitz * (1.0 + kSlopeTolerance)) {
      throw InvalidArgument("slope exceeds the Lipschitz constant");
    }
  }
  if (lowest != 0.0) throw InvalidArgument("minimum of v must be 0");
  if (!(lipschitz > 0.0)) throw InvalidArgument("lipschitz must be positive");
  int exponent = 0;
  if (!(epsilon > 0.0 && epsilon < 1.0) || std::frexp(epsilon, &exponent) != 0.5) {
    throw InvalidArgument("epsilon must be 2^-D with D >= 1");
  }
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
}

int BoundInstance::depth() const {
  int exponent = 0;
  std::frexp(epsilon, &exponent);
  return 1 - exponent;
}

double BoundInstance::value_at(double x) const {
  auto it = std::upper_bound(points.begin(), points.end(), x,
                             [](double v, const Breakpoint& b) { return v < b.x; });
  if (it == points.begin()) return points.front().v;
  if (it == points.end()) return points.back().v;
  const auto& right = *it;
  const auto& left = *(it - 1);
  const double w = (x - left.x) / (right.x - left.x);
  return left.v + w * (right.v - left.v);
}

IntervalSet level_set(const BoundInstance& inst, double lo, double hi, bool lo_inclusive,
                      bool hi_inclusive) {
  std::vector<Interval> pieces;
  for (std::size_t i = 1; i < inst.points.size(); ++i) {
    const auto& a = inst.points[i - 1];
    const auto& b = inst.points[i];
    if (a.v == b.v) {
      if (in_band(a.v, lo, hi, lo_inclusive, hi_inclusive)) pieces.push_back({a.x, b.x});
      continue;
    }
    // x(v) on this piece; endpoint inclusivity has zero measure here.
    auto x_of = [&](double v) { return a.x + (v - a.v) * (b.x - a.x) / (b.v - a.v); };
    double x_lo = x_of(lo);
    double x_hi = x_of(hi);
    if (x_lo > x_hi) std::swap(x_lo, x_hi);
    x_lo = std::max(x_lo, a.x);
    x_hi = std::min(x_hi, b.x);
    if (x_hi > x_lo) pieces.push_back({x_lo, x_hi});
  }
  return IntervalSet(std::move(pieces));
}

double level_set_measure(const BoundInstance& inst, int t) {
  if (t < 1 || t > inst.depth()) {
    throw InvalidArgument("level set index t must lie in [1, D]");
  }
  return level_set(inst, std::ldexp(1.0, -t), std::ldexp(1.0, -(t - 1))).measure();
}

double weighted_level_sum(const BoundInstance& inst) {
  const int D = inst.depth();
  double sum = 0.0;
  for (int t = 1; t <= D; ++t) sum += level_set_measure(inst, t) * std::ldexp(1.0, -3 * (D - t));
  return sum;
}

double lower_bound(const BoundInstance& inst) {
  inst.validate();
  const double eps = inst.epsilon;
  return std::log(1.0 / inst.delta) / (80.0 * eps * eps * eps / inst.lipschitz) *
         weighted_level_sum(inst);
}

double upper_bound(const BoundInstance& inst) {
  inst.validate();
  const double eps = inst.epsilon;
  return std::ldexp(1.0, 15) * inst.lipschitz *
         (static_cast<double>(inst.depth()) + std::log(1.0 / inst.delta)) / (eps * eps * eps) *
         weighted_level_sum(inst);
}

double trivial_bound(double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  return epsilon * epsilon;
}

std::uint64_t covering_number(const BoundInstance& inst, double r) {
  const auto band = level_set(inst, r, 2.0 * r);
  const double diameter = r / 8.0;
  std::uint64_t count = 0;
  for (const auto& iv : band.intervals()) {
    // Relative slack absorbs rounding in the level-set endpoints.
    count += static_cast<std::uint64_t>(std::max(1.0, std::ceil(iv.length() / diameter - 1e-9)));
  }
  return count;
}

ZoomingFit zooming_fit(const BoundInstance& inst, std::span<const double> r_grid) {
  std::vector<double> rs(r_grid.begin(), r_grid.end());
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  if (rs.size() < 3) throw InvalidArgument("zooming fit needs at least three distinct radii");
  std::vector<double> xs, ys;
  for (double r : rs) {
    if (!(r > 0.0 && r < 0.5)) throw InvalidArgument("radii must lie in (0, 1/2)");
    const auto n = covering_number(inst, r);
    if (n == 0) throw InvalidArgument("empty level set X_r; grid is degenerate for this instance");
    xs.push_back(std::log(1.0 / r));
    ys.push_back(std::log(static_cast<double>(n)));
  }
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = m * sxx - sx * sx;
  const double beta = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - beta * sx) / m;
  return {beta, std::exp(intercept)};
}

BoundInstance parse_instance(std::istream& in, const std::string& source_name) {
  BoundInstance inst;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double x = 0.0, v = 0.0;
    if (!(fields >> x)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError(source_name + ":" + std::to_string(line_no) + ": expected \"x v\"");
    }
    if (!(fields >> v)) {
      throw ParseError(source_name + ":" + std::to_string(line_no) + ": missing v value");
    }
    std::string rest;
    if (fields >> rest) {
      throw ParseError(source_name + ":" + std::to_string(line_no) + ": trailing input");
    }
    inst.points.push_back({x, v});
  }
  if (inst.points.size() < 2) {
    throw ParseError(source_name + ": need at least two breakpoints");
  }
  return inst;
}

BoundInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open instance file");
  return parse_instance(in, path);
}

}  // namespace rrb::bounds
