#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include "wpt/constants.hpp"
#include "wpt/error.hpp"
#include "wpt/magnetics.hpp"

namespace wpt {

/// Capacitor placement, primary side first. S: capacitor in series with the
/// coil, P: capacitor across the coil.
enum class Topology { SS, SP, PS, PP };

inline constexpr bool primary_is_series(Topology t) { return t == Topology::SS || t == Topology::SP; }
inline constexpr bool secondary_is_series(Topology t) { return t == Topology::SS || t == Topology::PS; }

inline std::string_view to_string(Topology t) {
  switch (t) {
    case Topology::SS: return "SS";
    case Topology::SP: return "SP";
    case Topology::PS: return "PS";
    case Topology::PP: return "PP";
  }
  return "?";
}

inline std::optional<Topology> parse_topology(std::string_view s) {
  if (s == "SS") return Topology::SS;
  if (s == "SP") return Topology::SP;
  if (s == "PS") return Topology::PS;
  if (s == "PP") return Topology::PP;
  return std::nullopt;
}

template <typename Scalar>
struct CircuitParams {
  Topology topology{Topology::SP};
  Scalar C1{};  // primary compensation (F)
  Scalar C2{};  // secondary compensation (F)
  Scalar R1{};  // primary coil ESR (ohm)
  Scalar R2{};  // secondary coil ESR (ohm)
  Scalar R_load{};
  Scalar source_peak_to_peak{};
  Scalar frequency{};
  Scalar source_resistance{0};  // generator output resistance, ideal source by default

  Scalar source_peak() const { return source_peak_to_peak / Scalar(2); }
  Scalar omega() const { return Scalar(2) * pi<Scalar> * frequency; }
};

using CircuitParamsd = CircuitParams<double>;

/// Peak phasors at one frequency. I1 / I2 are the coil currents,
/// I_source the current leaving the generator. Powers are averages.
template <typename Scalar>
struct PhasorSolution {
  using Complex = std::complex<Scalar>;
  Complex I1;
  Complex I2;
  Complex I_source;
  Complex V_out;
  Scalar P_in{};   // active power into the link at the generator terminals
  Scalar P_load{};
  Scalar P_loss{};  // coil ESR dissipation
  Scalar efficiency{};
};

using PhasorSolutiond = PhasorSolution<double>;

template <typename Scalar>
Scalar resonant_frequency(Scalar L, Scalar C) {
  detail::require_positive(L, "inductance");
  detail::require_positive(C, "capacitance");
  return Scalar(1) / (Scalar(2) * pi<Scalar> * std::sqrt(L * C));
}

template <typename Scalar>
Scalar resonant_capacitor(Scalar L, Scalar f0) {
  detail::require_positive(L, "inductance");
  detail::require_positive(f0, "frequency");
  const Scalar w = Scalar(2) * pi<Scalar> * f0;
  return Scalar(1) / (w * w * L);
}

template <typename Scalar>
void validate(const CircuitParams<Scalar>& p) {
  std::string problems;
  auto check = [&](bool ok, const char* msg) {
    if (ok) return;
    if (!problems.empty()) problems += "; ";
    problems += msg;
  };
  check(p.C1 > 0, "C1 must be positive");
  check(p.C2 > 0, "C2 must be positive");
  check(p.R1 >= 0, "R1 must be non-negative");
  check(p.R2 >= 0, "R2 must be non-negative");
  check(p.R_load > 0, "R_load must be positive");
  check(p.source_peak_to_peak >= 0, "source amplitude must be non-negative");
  check(p.frequency > 0, "frequency must be positive");
  check(p.source_resistance >= 0, "source resistance must be non-negative");
  if (!problems.empty()) throw DomainError(problems);
}

/// Two-mesh solution of the compensated link.
///
/// With I1, I2 the clockwise coil currents:
///
///   Z1 I1 + jwM I2 = V_drive
///   jwM I1 + Z2 I2 = 0
///
/// Series primary: Z1 = Rs + R1 + jwL1 + 1/(jwC1), V_drive = Vs.
/// Parallel primary: the generator and C1 are replaced by their Thevenin
/// equivalent seen by the coil. Series secondary: Z2 = R2 + jwL2 + 1/(jwC2)
/// + R_load and V_out = -I2 R_load. Parallel secondary: Z2 = R2 + jwL2 + Zp
/// with Zp = C2 || R_load and V_out = -I2 Zp.
template <typename Scalar>
PhasorSolution<Scalar> solve_phasor(const CircuitParams<Scalar>& p, const CouplingLink<Scalar>& link) {
  using Complex = std::complex<Scalar>;
  validate(p);
  detail::require_positive(link.L1, "L1");
  detail::require_positive(link.L2, "L2");
  if (link.M < 0) throw DomainError("mutual inductance must be non-negative");

  const Scalar w = p.omega();
  const Complex j(0, 1);
  const Complex Vs(p.source_peak(), 0);
  const Complex zc1 = Scalar(1) / (j * w * p.C1);
  const Complex zc2 = Scalar(1) / (j * w * p.C2);
  const Complex zm = j * w * link.M;

  Complex z1 = p.R1 + j * w * link.L1;
  Complex v_drive = Vs;
  if (primary_is_series(p.topology)) {
    z1 += p.source_resistance + zc1;
  } else {
    v_drive = Vs * zc1 / (p.source_resistance + zc1);
    z1 += p.source_resistance * zc1 / (p.source_resistance + zc1);
  }

  Complex z2 = p.R2 + j * w * link.L2;
  Complex z_out;  // impedance across which V_out appears, carrying -I2
  if (secondary_is_series(p.topology)) {
    z2 += zc2 + p.R_load;
    z_out = p.R_load;
  } else {
    z_out = p.R_load * zc2 / (p.R_load + zc2);
    z2 += z_out;
  }

  const Complex det = z1 * z2 - zm * zm;
  if (det == Complex(0)) throw SingularityError("mesh system is singular");

  PhasorSolution<Scalar> s;
  s.I1 = v_drive * z2 / det;
  s.I2 = -zm * v_drive / det;
  s.V_out = -s.I2 * z_out;
  if (primary_is_series(p.topology)) {
    s.I_source = s.I1;
  } else {
    // KCL at the top of C1: I_src = I1 + (Vs - Rs I_src) jwC1
    const Complex yc1 = j * w * p.C1;
    s.I_source = (s.I1 + Vs * yc1) / (Scalar(1) + p.source_resistance * yc1);
  }

  const Scalar rs_loss = Scalar(0.5) * std::norm(s.I_source) * p.source_resistance;
  s.P_in = Scalar(0.5) * std::real(Vs * std::conj(s.I_source)) - rs_loss;
  s.P_load = Scalar(0.5) * std::norm(s.V_out) / p.R_load;
  s.P_loss = Scalar(0.5) * (std::norm(s.I1) * p.R1 + std::norm(s.I2) * p.R2);
  s.efficiency = s.P_in > 0 ? s.P_load / s.P_in : Scalar(0);
  return s;
}

template <typename Scalar>
CircuitParams<Scalar> at_frequency(CircuitParams<Scalar> p, Scalar f) {
  p.frequency = f;
  return p;
}

/// |V_out / V_s| at frequency f.
template <typename Scalar>
Scalar transfer_function(const CircuitParams<Scalar>& params, const CouplingLink<Scalar>& link, Scalar f) {
  detail::require_positive(f, "frequency");
  const auto p = at_frequency(params, f);
  const auto s = solve_phasor(p, link);
  const Scalar vin = p.source_peak();
  if (!(vin > 0)) throw DomainError("transfer function needs a non-zero source");
  return std::abs(s.V_out) / vin;
}

/// V_s / I_source at frequency f, reflected secondary included.
template <typename Scalar>
std::complex<Scalar> input_impedance(const CircuitParams<Scalar>& params, const CouplingLink<Scalar>& link,
                                     Scalar f) {
  detail::require_positive(f, "frequency");
  auto p = at_frequency(params, f);
  // Impedance is amplitude independent; use a unit source so a zero
  // amplitude in the config still yields an answer.
  p.source_peak_to_peak = 2;
  const auto s = solve_phasor(p, link);
  if (s.I_source == std::complex<Scalar>(0)) throw SingularityError("input current is zero");
  return std::complex<Scalar>(p.source_peak(), 0) / s.I_source;
}

}  // namespace wpt
