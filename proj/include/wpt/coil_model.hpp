#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "wpt/constants.hpp"
#include "wpt/error.hpp"

namespace wpt {

/// Circular printed spiral. All lengths in metres.
template <typename Scalar>
struct SpiralCoil {
  Scalar inner_diameter{};
  Scalar outer_diameter{};
  int turns{1};
  Scalar trace_width{};
  Scalar turn_spacing{};
  Scalar trace_thickness{Scalar(kDefaultTraceThickness)};
  Scalar resistivity{Scalar(kCopperResistivity)};

  /// Radial distance between the centre lines of adjacent turns.
  Scalar pitch() const { return trace_width + turn_spacing; }

  friend bool operator==(const SpiralCoil&, const SpiralCoil&) = default;
};

using SpiralCoild = SpiralCoil<double>;

/// One circular current filament in the plane z = axial_position.
template <typename Scalar>
struct Filament {
  Scalar radius;
  Scalar axial_position;
};

/// Concentric filaments standing in for a spiral. Every filament carries
/// `current_weight` times the coil terminal current (1 / subdivisions per turn),
/// so sums over the set stay normalised to the terminal current.
template <typename Scalar>
struct FilamentSet {
  std::vector<Filament<Scalar>> filaments;
  Scalar current_weight{1};

  std::size_t size() const { return filaments.size(); }
};

/// Throws InvalidGeometry when the hard invariants of a coil are broken.
template <typename Scalar>
void validate(const SpiralCoil<Scalar>& coil) {
  std::string problems;
  auto add = [&](const char* msg) {
    if (!problems.empty()) problems += "; ";
    problems += msg;
  };
  if (!(coil.inner_diameter > 0)) add("inner_diameter must be positive");
  if (!(coil.outer_diameter > coil.inner_diameter)) add("outer_diameter must exceed inner_diameter");
  if (coil.turns < 1) add("turns must be at least 1");
  if (!(coil.trace_width > 0)) add("trace_width must be positive");
  if (!(coil.turn_spacing >= 0)) add("turn_spacing must be non-negative");
  if (!(coil.trace_thickness > 0)) add("trace_thickness must be positive");
  if (!(coil.resistivity > 0)) add("resistivity must be positive");
  if (!problems.empty()) throw InvalidGeometry(problems);
}

/// Outer diameter implied by the inner diameter, turn count and pitch.
template <typename Scalar>
Scalar consistent_outer_diameter(Scalar inner_diameter, int turns, Scalar trace_width,
                                 Scalar turn_spacing) {
  return inner_diameter + Scalar(2 * turns) * (trace_width + turn_spacing);
}

/// Relative deviation of the stated outer diameter from the one implied by
/// the winding. Arbitrary coils need not satisfy the rule, so this is a
/// diagnostic only.
template <typename Scalar>
Scalar geometric_mismatch(const SpiralCoil<Scalar>& coil) {
  const Scalar implied = consistent_outer_diameter(coil.inner_diameter, coil.turns,
                                                   coil.trace_width, coil.turn_spacing);
  return std::abs(coil.outer_diameter - implied) / coil.outer_diameter;
}

template <typename Scalar>
bool is_geometrically_consistent(const SpiralCoil<Scalar>& coil, Scalar tolerance = Scalar(0.01)) {
  return geometric_mismatch(coil) <= tolerance;
}

/// (d_out - d_in) / (d_out + d_in).
template <typename Scalar>
Scalar fill_factor(const SpiralCoil<Scalar>& coil) {
  if (!(coil.outer_diameter > coil.inner_diameter) || !(coil.inner_diameter > 0)) {
    throw InvalidGeometry("fill factor needs outer_diameter > inner_diameter > 0");
  }
  return (coil.outer_diameter - coil.inner_diameter) /
         (coil.outer_diameter + coil.inner_diameter);
}

template <typename Scalar>
Scalar average_diameter(const SpiralCoil<Scalar>& coil) {
  return (coil.outer_diameter + coil.inner_diameter) / Scalar(2);
}

/// Current-sheet self-inductance of a circular planar spiral:
///
///   L = mu n^2 d_avg / 2 * (ln(2.46 / gamma) + 0.20 gamma^2)
///
/// `permeability` is exposed so the formula can be evaluated in any
/// consistent length unit (H per that unit); the result is always henries.
template <typename Scalar>
Scalar self_inductance(const SpiralCoil<Scalar>& coil, Scalar permeability = mu0<Scalar>) {
  if (coil.turns < 1) throw InvalidGeometry("turns must be at least 1");
  const Scalar gamma = fill_factor(coil);
  if (!(gamma > 0 && gamma < 1)) throw InvalidGeometry("fill factor outside (0, 1)");
  const Scalar n = Scalar(coil.turns);
  return permeability * n * n * average_diameter(coil) / Scalar(2) *
         (std::log(Scalar(2.46) / gamma) + Scalar(0.20) * gamma * gamma);
}

/// Turn i sits on its centre line, r_i = d_in/2 + (i + 1/2)(w + s). With more
/// than one subdivision the trace width of each turn is split into equal
/// strips and one filament is placed at the centre of each strip.
template <typename Scalar>
FilamentSet<Scalar> to_filaments(const SpiralCoil<Scalar>& coil, int subdivisions_per_turn = 1,
                                 Scalar axial_position = Scalar(0)) {
  if (subdivisions_per_turn < 1) throw DomainError("subdivisions_per_turn must be at least 1");
  if (coil.turns < 1) throw InvalidGeometry("turns must be at least 1");
  if (!(coil.inner_diameter > 0) || !(coil.trace_width > 0) || coil.turn_spacing < 0) {
    throw InvalidGeometry("filament decomposition needs positive inner diameter and trace width");
  }

  FilamentSet<Scalar> set;
  set.current_weight = Scalar(1) / Scalar(subdivisions_per_turn);
  set.filaments.reserve(static_cast<std::size_t>(coil.turns) * subdivisions_per_turn);
  const Scalar strip = coil.trace_width / Scalar(subdivisions_per_turn);
  for (int turn = 0; turn < coil.turns; ++turn) {
    const Scalar centre = coil.inner_diameter / 2 + (Scalar(turn) + Scalar(0.5)) * coil.pitch();
    const Scalar edge = centre - coil.trace_width / 2;
    for (int j = 0; j < subdivisions_per_turn; ++j) {
      set.filaments.push_back({edge + (Scalar(j) + Scalar(0.5)) * strip, axial_position});
    }
  }
  return set;
}

/// Trace length as the sum of the per-turn circumferences.
template <typename Scalar>
Scalar conductor_length(const SpiralCoil<Scalar>& coil) {
  const auto set = to_filaments(coil, 1);
  Scalar sum = 0;
  for (const auto& f : set.filaments) sum += f.radius;
  return Scalar(2) * pi<Scalar> * sum;
}

/// Skin depth of a non-magnetic conductor.
template <typename Scalar>
Scalar skin_depth(Scalar resistivity, Scalar frequency) {
  detail::require_positive(frequency, "frequency");
  return std::sqrt(resistivity / (pi<Scalar> * frequency * mu0<Scalar>));
}

/// DC resistance with a one-dimensional skin-effect clamp: current flows
/// within one skin depth of the top and bottom faces, so the conducting
/// thickness is min(t, 2 delta). Proximity effect is ignored.
template <typename Scalar>
Scalar series_resistance(const SpiralCoil<Scalar>& coil, Scalar frequency) {
  if (frequency < 0) throw DomainError("frequency must be non-negative");
  if (!(coil.trace_width > 0) || !(coil.trace_thickness > 0)) {
    throw InvalidGeometry("trace cross-section must be positive");
  }
  Scalar thickness = coil.trace_thickness;
  if (frequency > 0) {
    thickness = std::min(thickness, Scalar(2) * skin_depth(coil.resistivity, frequency));
  }
  return coil.resistivity * conductor_length(coil) / (coil.trace_width * thickness);
}

}  // namespace wpt
