#include "rrb/core/trace.hpp"

#include <cstdio>
#include <ostream>

namespace rrb {

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::budget_exhausted: return "budget_exhausted";
    case StopReason::max_steps: return "max_steps";
    case StopReason::callback: return "callback";
    case StopReason::converged: return "converged";
  }
  return "unknown";
}

void write_step_csv(std::ostream& out, std::span<const StepRecord> trace, bool header) {
  if (header) out << "step,direction,accepted,incumbent_value,cumulative_samples\n";
  char buf[64];
  for (const auto& r : trace) {
    out << r.step << ',';
    for (std::size_t i = 0; i < r.direction.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", r.direction[i]);
      out << (i ? " " : "") << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", r.incumbent_value);
    out << ',' << (r.accepted ? 1 : 0) << ',' << buf << ',' << r.cumulative_samples << '\n';
  }
}

}  // namespace rrb
