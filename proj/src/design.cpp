#include "wpt/design.hpp"

#include <cmath>
#include <sstream>

#include "wpt/circuit.hpp"
#include "wpt/error.hpp"

namespace wpt {
namespace {

SpiralCoild candidate(const DesignConstraints& c, int turns) {
  SpiralCoild coil;
  coil.inner_diameter = c.inner_diameter;
  coil.outer_diameter = consistent_outer_diameter(c.inner_diameter, turns, c.trace_width, c.spacing);
  coil.turns = turns;
  coil.trace_width = c.trace_width;
  coil.turn_spacing = c.spacing;
  coil.trace_thickness = c.trace_thickness;
  coil.resistivity = c.resistivity;
  return coil;
}

[[noreturn]] void unreachable(const DesignConstraints& c, double closest, int turns) {
  std::ostringstream msg;
  msg << "target " << c.target_inductance << " H not reachable within " << c.tolerance
      << " relative; closest is " << closest << " H at " << turns << " turns";
  throw UnreachableTarget(msg.str(), closest, turns);
}

}  // namespace

SpiralCoild design_coil_for_inductance(const DesignConstraints& c) {
  if (c.turns_min < 1 || c.turns_max < c.turns_min) throw DomainError("turns range must satisfy 1 <= min <= max");
  if (c.turns_max - c.turns_min >= 10000) throw DomainError("turns range exceeds 10^4 candidates");
  detail::require_positive(c.target_inductance, "target inductance");
  detail::require_positive(c.tolerance, "tolerance");
  detail::require_positive(c.inner_diameter, "inner diameter");
  detail::require_positive(c.trace_width, "trace width");
  if (c.spacing < 0) throw DomainError("spacing must be non-negative");

  // L grows with the turn count, so the range endpoints bound what is reachable.
  const double low = self_inductance(candidate(c, c.turns_min));
  const double high = self_inductance(candidate(c, c.turns_max));
  if (c.target_inductance < low * (1 - c.tolerance)) unreachable(c, low, c.turns_min);
  if (c.target_inductance > high * (1 + c.tolerance)) unreachable(c, high, c.turns_max);

  int best_turns = c.turns_min;
  double best_L = low;
  double best_err = std::abs(low - c.target_inductance);
  for (int n = c.turns_min + 1; n <= c.turns_max; ++n) {
    const double L = self_inductance(candidate(c, n));
    const double err = std::abs(L - c.target_inductance);
    // Equidistant within rounding counts as a tie; keep the smaller count.
    if (err < best_err - 1e-12 * c.target_inductance) {
      best_turns = n;
      best_L = L;
      best_err = err;
    }
  }
  if (best_err > c.tolerance * c.target_inductance) unreachable(c, best_L, best_turns);
  return candidate(c, best_turns);
}

ResonantPair design_resonant_pair(const SpiralCoild& tx, const SpiralCoild& rx, double f0) {
  detail::require_positive(f0, "f0");
  return {resonant_capacitor(self_inductance(tx), f0), resonant_capacitor(self_inductance(rx), f0)};
}

}  // namespace wpt
