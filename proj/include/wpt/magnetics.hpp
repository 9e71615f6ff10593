#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "wpt/coil_model.hpp"
#include "wpt/constants.hpp"
#include "wpt/elliptic.hpp"
#include "wpt/error.hpp"

namespace wpt {

/// Electrical description of a magnetically coupled coil pair.
template <typename Scalar>
struct CouplingLink {
  Scalar L1;
  Scalar L2;
  Scalar M;
  Scalar k;
};

using CouplingLinkd = CouplingLink<double>;

/// k = M / sqrt(L1 L2); throws UnphysicalCoupling when k >= 1.
template <typename Scalar>
Scalar coupling_coefficient(Scalar M, Scalar L1, Scalar L2) {
  detail::require_positive(L1, "L1");
  detail::require_positive(L2, "L2");
  if (M < 0) throw DomainError("mutual inductance must be non-negative");
  const Scalar k = M / std::sqrt(L1 * L2);
  if (!(k < 1)) throw UnphysicalCoupling("coupling coefficient k = " + std::to_string(k) + " >= 1");
  return k;
}

template <typename Scalar>
CouplingLink<Scalar> make_link(Scalar L1, Scalar L2, Scalar M) {
  return {L1, L2, M, coupling_coefficient(M, L1, L2)};
}

/// Mutual inductance of two coaxial circular filaments (Maxwell):
///
///   M = mu0 sqrt(ab) [(2/kappa - kappa) K - (2/kappa) E],
///   kappa^2 = 4ab / ((a + b)^2 + d^2).
template <typename Scalar>
Scalar mutual_inductance_loops(Scalar radius_a, Scalar radius_b, Scalar axial_gap) {
  detail::require_positive(radius_a, "radius_a");
  detail::require_positive(radius_b, "radius_b");
  const Scalar d = std::abs(axial_gap);
  if (d == 0 && radius_a == radius_b) {
    throw SingularityError("coincident identical filaments have unbounded mutual inductance");
  }
  const Scalar sum = radius_a + radius_b;
  const Scalar m = Scalar(4) * radius_a * radius_b / (sum * sum + d * d);
  const auto [K, E] = elliptic_KE(m);
  const Scalar kappa = std::sqrt(m);
  return mu0<Scalar> * std::sqrt(radius_a * radius_b) *
         ((Scalar(2) / kappa - kappa) * K - (Scalar(2) / kappa) * E);
}

/// Filament-pair sum over two coaxial filament sets. Axial positions of
/// the sets are taken as given.
template <typename Scalar>
Scalar mutual_inductance(const FilamentSet<Scalar>& a, const FilamentSet<Scalar>& b) {
  Scalar total = 0;
  for (const auto& fa : a.filaments) {
    for (const auto& fb : b.filaments) {
      total += mutual_inductance_loops(fa.radius, fb.radius, fb.axial_position - fa.axial_position);
    }
  }
  return total * a.current_weight * b.current_weight;
}

/// Mutual inductance of two coaxial planar spirals whose planes are `gap`
/// apart.
template <typename Scalar>
Scalar mutual_inductance_coils(const SpiralCoil<Scalar>& tx, const SpiralCoil<Scalar>& rx,
                               Scalar gap, int subdivisions = 1) {
  if (!(gap > 0)) throw DomainError("gap must be positive");
  return mutual_inductance(to_filaments(tx, subdivisions, Scalar(0)),
                           to_filaments(rx, subdivisions, gap));
}

/// Straight-segment discretisation of a filament set, reusable across many
/// field evaluations.
template <typename Scalar>
class SegmentModel {
public:
  using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

  struct Segment {
    Vec3 start;
    Vec3 end;
    Scalar weight;  // fraction of the terminal current
    Scalar length;
  };

  SegmentModel(const FilamentSet<Scalar>& set, int segments_per_filament = 360) {
    if (segments_per_filament < 3) throw DomainError("need at least 3 segments per filament");
    segments_.reserve(set.size() * segments_per_filament);
    for (const auto& f : set.filaments) {
      auto vertex = [&](int i) {
        const Scalar theta = Scalar(2) * pi<Scalar> * Scalar(i) / Scalar(segments_per_filament);
        return Vec3(f.radius * std::cos(theta), f.radius * std::sin(theta), f.axial_position);
      };
      for (int i = 0; i < segments_per_filament; ++i) {
        const Vec3 s = vertex(i);
        const Vec3 e = vertex(i + 1);
        segments_.push_back({s, e, set.current_weight, (e - s).norm()});
      }
    }
  }

  const std::vector<Segment>& segments() const { return segments_; }

  /// True when `point` is closer to some segment than that segment's length.
  bool too_close(const Vec3& point) const {
    for (const auto& seg : segments_) {
      const Vec3 dir = seg.end - seg.start;
      const Scalar t = std::clamp((point - seg.start).dot(dir) / dir.squaredNorm(), Scalar(0), Scalar(1));
      if ((point - (seg.start + t * dir)).norm() < seg.length) return true;
    }
    return false;
  }

  /// Flux density at `point`, exact for the polygonal current path.
  Vec3 field(const Vec3& point, Scalar current) const {
    if (too_close(point)) throw SingularityError("field point lies within the conductor guard distance");
    return field_unchecked(point, current);
  }

  Vec3 field_unchecked(const Vec3& point, Scalar current) const {
    Vec3 B = Vec3::Zero();
    if (current == 0) return B;
    for (const auto& seg : segments_) {
      const Vec3 r1 = point - seg.start;
      const Vec3 r2 = point - seg.end;
      const Scalar n1 = r1.norm();
      const Scalar n2 = r2.norm();
      const Scalar denom = n1 * n2 * (n1 * n2 + r1.dot(r2));
      B += (seg.weight * (n1 + n2) / denom) * r1.cross(r2);
    }
    return B * (mu0<Scalar> / (Scalar(4) * pi<Scalar>) * current);
  }

private:
  std::vector<Segment> segments_;
};

/// Biot-Savart flux density (T) of `current` flowing in every turn.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> biot_savart_field(const FilamentSet<Scalar>& filaments, Scalar current,
                                              const Eigen::Matrix<Scalar, 3, 1>& point,
                                              int segments_per_filament = 360) {
  return SegmentModel<Scalar>(filaments, segments_per_filament).field(point, current);
}

/// Rectangular sampling grid on the x-z half plane through the coil axis.
template <typename Scalar>
struct GridSpec {
  Scalar x_min, x_max;
  int nx;
  Scalar z_min, z_max;
  int nz;
  int segments_per_filament = 360;
  int subdivisions = 1;
};

template <typename Scalar>
struct FieldSample {
  Scalar x;
  Scalar z;
  Eigen::Matrix<Scalar, 3, 1> B;
  bool valid;
};

/// Row-major (z outer, x inner) field samples. Points inside the conductor
/// guard are kept with NaN components and `valid == false`.
template <typename Scalar>
struct FieldGrid {
  int nx{};
  int nz{};
  std::vector<FieldSample<Scalar>> samples;
  std::size_t dropped{};

  const FieldSample<Scalar>& at(int ix, int iz) const { return samples[iz * nx + ix]; }
};

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> magnetic_field_strength(const Eigen::Matrix<Scalar, 3, 1>& B) {
  return B / mu0<Scalar>;
}

namespace detail {

template <typename Scalar>
Scalar grid_coordinate(Scalar lo, Scalar hi, int n, int i) {
  return n == 1 ? lo : lo + (hi - lo) * Scalar(i) / Scalar(n - 1);
}

}  // namespace detail

template <typename Scalar>
FieldGrid<Scalar> field_map(const SpiralCoil<Scalar>& coil, Scalar current, const GridSpec<Scalar>& spec) {
  if (spec.nx < 1 || spec.nz < 1) throw DomainError("grid needs at least one point per axis");
  if (spec.x_max < spec.x_min || spec.z_max < spec.z_min) throw DomainError("grid ranges must be ordered");
  if (!std::isfinite(current)) throw DomainError("current must be finite");

  const SegmentModel<Scalar> model(to_filaments(coil, spec.subdivisions), spec.segments_per_filament);
  FieldGrid<Scalar> grid;
  grid.nx = spec.nx;
  grid.nz = spec.nz;
  grid.samples.reserve(static_cast<std::size_t>(spec.nx) * spec.nz);
  const Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();
  for (int iz = 0; iz < spec.nz; ++iz) {
    const Scalar z = detail::grid_coordinate(spec.z_min, spec.z_max, spec.nz, iz);
    for (int ix = 0; ix < spec.nx; ++ix) {
      const Scalar x = detail::grid_coordinate(spec.x_min, spec.x_max, spec.nx, ix);
      const Eigen::Matrix<Scalar, 3, 1> p(x, 0, z);
      if (model.too_close(p)) {
        grid.samples.push_back({x, z, Eigen::Matrix<Scalar, 3, 1>::Constant(nan), false});
        ++grid.dropped;
      } else {
        grid.samples.push_back({x, z, model.field_unchecked(p, current), true});
      }
    }
  }
  return grid;
}

/// Phasor EMF induced in the secondary, j omega M I1.
template <typename Scalar>
std::complex<Scalar> induced_voltage_phasor(Scalar M, Scalar omega, std::complex<Scalar> I1) {
  if (omega < 0) throw DomainError("angular frequency must be non-negative");
  return std::complex<Scalar>(0, omega * M) * I1;
}

/// Reluctance of a uniform air gap, l_g / (mu0 A_g). Only meaningful for
/// gaps that are short next to the cross-section.
template <typename Scalar>
Scalar air_gap_reluctance(Scalar gap_length, Scalar gap_area) {
  detail::require_positive(gap_length, "gap_length");
  detail::require_positive(gap_area, "gap_area");
  return gap_length / (mu0<Scalar> * gap_area);
}

}  // namespace wpt
