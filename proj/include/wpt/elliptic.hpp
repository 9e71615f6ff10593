#pragma once

#include <cmath>
#include <limits>

#include "wpt/constants.hpp"
#include "wpt/error.hpp"

namespace wpt {

template <typename Scalar>
struct EllipticKE {
  Scalar K;
  Scalar E;
};

/// Complete elliptic integrals of the first and second kind by the
/// arithmetic-geometric mean.
///
/// Takes the *parameter* m = k^2, not the modulus k.
template <typename Scalar>
EllipticKE<Scalar> elliptic_KE(Scalar m) {
  if (!(m >= 0) || !(m < 1)) throw DomainError("elliptic parameter m must lie in [0, 1)");

  Scalar a = 1;
  Scalar b = std::sqrt(Scalar(1) - m);
  Scalar c = std::sqrt(m);
  // E = K (1 - sum_n 2^(n-1) c_n^2)
  Scalar weight = Scalar(0.5);
  Scalar sum = weight * c * c;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  for (int it = 0; it < 64 && std::abs(c) > eps * a; ++it) {
    const Scalar an = (a + b) / 2;
    c = (a - b) / 2;
    b = std::sqrt(a * b);
    a = an;
    weight *= 2;
    sum += weight * c * c;
  }
  const Scalar K = pi<Scalar> / (Scalar(2) * a);
  return {K, K * (Scalar(1) - sum)};
}

}  // namespace wpt
