#pragma once

#include <numbers>

namespace wpt {

/// Vacuum permeability in H/m (pre-2019 exact definition, 4*pi*1e-7).
template <typename Scalar>
inline constexpr Scalar mu0 = Scalar(4) * std::numbers::pi_v<Scalar> * Scalar(1e-7);

template <typename Scalar>
inline constexpr Scalar pi = std::numbers::pi_v<Scalar>;

/// Annealed copper at room temperature, ohm-metre.
inline constexpr double kCopperResistivity = 1.68e-8;

/// 1 oz/ft^2 PCB foil.
inline constexpr double kDefaultTraceThickness = 35e-6;

}  // namespace wpt
