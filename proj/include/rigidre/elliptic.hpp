// Copyright 2026 The rigidre Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Jacobi elliptic functions sn, cn, dn for a real argument and parameter
// m = k^2 in [0, 1], and the complete elliptic integral K(m).
//
// Evaluation follows the descending Landen (AGM) scheme: run the AGM of
// (1, sqrt(1 - m)) until the transformed modulus c_n is negligible, scale
// the argument by 2^n a_n and unwind the amplitude
//   phi_{n-1} = (phi_n + asin(c_n sin(phi_n) / a_n)) / 2.

#include <array>
#include <cmath>
#include <numbers>

#include "rigidre/errors.hpp"

namespace rigidre::elliptic {

inline constexpr double kLandenTol = 1e-14;
// Parameters this close to 1 use the hyperbolic limit directly.
inline constexpr double kSeparatrixTol = 1e-10;

template <typename Real>
struct JacobiTriple {
  Real sn;
  Real cn;
  Real dn;
};

/// K(m) = ∫_0^{π/2} dθ / sqrt(1 - m sin²θ) = π / (2 AGM(1, sqrt(1 - m))).
template <typename Real>
Real complete_K(Real k2) {
  if (!(k2 >= Real(0)) || !(k2 < Real(1))) throw ModulusOutOfRange(static_cast<double>(k2));
  Real a = 1;
  Real b = std::sqrt(1 - k2);
  for (int i = 0; i < 64 && std::abs(a - b) > Real(kLandenTol) * a; ++i) {
    const Real an = (a + b) / 2;
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi_v<Real> / (a + b);
}

namespace detail {

// Amplitude phi with sn = sin(phi), cn = cos(phi), for 0 <= m < 1 and
// |u| not much larger than 2K.
template <typename Real>
Real landen_amplitude(Real u, Real k2) {
  std::array<Real, 32> a{};
  std::array<Real, 32> c{};
  a[0] = 1;
  Real b = std::sqrt(1 - k2);
  c[0] = std::sqrt(k2);
  int n = 0;
  while (std::abs(c[n]) > Real(kLandenTol) && n + 1 < static_cast<int>(a.size())) {
    a[n + 1] = (a[n] + b) / 2;
    c[n + 1] = (a[n] - b) / 2;
    b = std::sqrt(a[n] * b);
    ++n;
  }
  Real phi = std::ldexp(a[n] * u, n);
  for (int i = n; i > 0; --i) {
    phi = (phi + std::asin(c[i] * std::sin(phi) / a[i])) / 2;
  }
  return phi;
}

}  // namespace detail

/// Jacobi amplitude am(u | m), continuous and increasing in u;
/// am(u + 4K) = am(u) + 2π. Requires 0 <= m < 1.
template <typename Real>
Real amplitude(Real u, Real k2) {
  if (!(k2 >= Real(0)) || !(k2 < Real(1))) throw ModulusOutOfRange(static_cast<double>(k2));
  if (k2 == Real(0)) return u;
  const Real period = 4 * complete_K(k2);
  const Real turns = std::round(u / period);
  const Real reduced = u - turns * period;
  return detail::landen_amplitude(reduced, k2) + turns * 2 * std::numbers::pi_v<Real>;
}

/// (sn, cn, dn)(u | m) for 0 <= m <= 1.
template <typename Real>
JacobiTriple<Real> jacobi(Real u, Real k2) {
  if (!(k2 >= Real(0)) || !(k2 <= Real(1))) throw ModulusOutOfRange(static_cast<double>(k2));
  if (k2 == Real(0)) return {std::sin(u), std::cos(u), Real(1)};
  if (Real(1) - k2 < Real(kSeparatrixTol)) {
    const Real sech = 1 / std::cosh(u);
    return {std::tanh(u), sech, sech};
  }
  const Real period = 4 * complete_K(k2);
  const Real reduced = u - std::round(u / period) * period;
  const Real phi = detail::landen_amplitude(reduced, k2);
  const Real sn = std::sin(phi);
  return {sn, std::cos(phi), std::sqrt(1 - k2 * sn * sn)};
}

}  // namespace rigidre::elliptic
