#pragma once

#include "wpt/coil_model.hpp"
#include "wpt/constants.hpp"

namespace wpt {

struct DesignConstraints {
  double inner_diameter{};  // m
  double trace_width{};     // m
  double spacing{};         // m
  int turns_min{1};
  int turns_max{20};
  double target_inductance{};  // H
  double tolerance{0.01};      // relative
  double trace_thickness{kDefaultTraceThickness};
  double resistivity{kCopperResistivity};
};

/// Exhaustive search over integer turn counts; the outer diameter follows
/// from the winding. Ties go to the smaller turn count. Throws
/// UnreachableTarget, carrying the closest achievable inductance, when no
/// candidate lands within tolerance.
SpiralCoild design_coil_for_inductance(const DesignConstraints& constraints);

struct ResonantPair {
  double C1;
  double C2;
};

/// Capacitors that tune both coils to f0.
ResonantPair design_resonant_pair(const SpiralCoild& tx, const SpiralCoild& rx, double f0);

}  // namespace wpt
