#pragma once

#include "wpt/circuit.hpp"
#include "wpt/coil_model.hpp"

namespace wpt::test {

inline SpiralCoild transmitter() { return {10e-3, 45.2e-3, 8, 0.8e-3, 1.4e-3}; }
inline SpiralCoild receiver() { return {10e-3, 36.4e-3, 6, 0.8e-3, 1.4e-3}; }

inline SpiralCoild consistent_coil(double d_in, int turns, double width, double spacing) {
  return {d_in, consistent_outer_diameter(d_in, turns, width, spacing), turns, width, spacing};
}

/// Reference link component values, series-parallel compensation.
inline CircuitParamsd reference_circuit(double frequency, double r1 = 0.5, double r2 = 0.5) {
  CircuitParamsd p;
  p.topology = Topology::SP;
  p.C1 = 1.8e-9;
  p.C2 = 3.6e-9;
  p.R1 = r1;
  p.R2 = r2;
  p.R_load = 10;
  p.source_peak_to_peak = 19.6;
  p.frequency = frequency;
  return p;
}

}  // namespace wpt::test
