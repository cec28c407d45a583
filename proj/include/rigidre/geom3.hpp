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

// Rotation algebra in three dimensions: SO(3), the hat-map onto so(3),
// z-x-z Euler angles (R = D(phi) C(theta) B(psi)) and a small symmetric
// eigen-solver for inertia tensors.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rigidre/errors.hpp"

namespace rigidre::geom3 {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

inline constexpr double kAntiSymmetryTol = 1e-10;
inline constexpr double kBodyRateAntiSymmetryTol = 1e-8;
inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kRotationTol = 1e-12;
inline constexpr double kJacobiOffDiagonalTol = 1e-14;
inline constexpr double kEigenGapTol = 1e-9;
// Below this sin(theta) the Euler decomposition is treated as gimbal locked.
inline constexpr double kGimbalSinTol = 1e-12;

/// Element of SO(3). Construction from an arbitrary matrix is checked.
template <typename Scalar>
class Rotation {
 public:
  Rotation() : m_(Mat3<Scalar>::Identity()) {}

  static Rotation identity() { return Rotation(); }

  /// Throws NotARotation unless RᵀR = E and det R = +1 within `tol`.
  static Rotation from_matrix(const Mat3<Scalar>& m, double tol = kRotationTol) {
    const double ortho = static_cast<double>((m.transpose() * m - Mat3<Scalar>::Identity()).cwiseAbs().maxCoeff());
    const double det = static_cast<double>(m.determinant());
    if (!(ortho <= tol) || !(std::abs(det - 1.0) <= tol)) {
      throw NotARotation("matrix is not in SO(3): orthogonality residual " + std::to_string(ortho) +
                         ", det " + std::to_string(det));
    }
    return Rotation(m);
  }

  /// Wraps a matrix already known to be a rotation (products, exponentials).
  static Rotation unchecked(const Mat3<Scalar>& m) { return Rotation(m); }

  const Mat3<Scalar>& matrix() const { return m_; }
  Rotation inverse() const { return Rotation(m_.transpose()); }

  Rotation operator*(const Rotation& other) const { return Rotation(m_ * other.m_); }
  Vec3<Scalar> operator*(const Vec3<Scalar>& v) const { return m_ * v; }

 private:
  explicit Rotation(const Mat3<Scalar>& m) : m_(m) {}
  Mat3<Scalar> m_;
};

template <typename Scalar>
struct EulerAngles {
  Scalar phi{0};
  Scalar theta{0};
  Scalar psi{0};
};

template <typename Scalar>
struct EulerRates {
  Scalar phidot{0};
  Scalar thetadot{0};
  Scalar psidot{0};
};

template <typename Scalar>
Mat3<Scalar> hat(const Vec3<Scalar>& v) {
  Mat3<Scalar> a;
  a << Scalar(0), -v.z(), v.y(),
       v.z(), Scalar(0), -v.x(),
       -v.y(), v.x(), Scalar(0);
  return a;
}

template <typename Scalar>
double anti_symmetry_residual(const Mat3<Scalar>& a) {
  return static_cast<double>((a + a.transpose()).cwiseAbs().maxCoeff());
}

/// Inverse of hat. Throws NotAntiSymmetric when |A + Aᵀ|_max exceeds `tol`.
template <typename Scalar>
Vec3<Scalar> vee(const Mat3<Scalar>& a, double tol = kAntiSymmetryTol) {
  const double residual = anti_symmetry_residual(a);
  if (!(residual <= tol)) throw NotAntiSymmetric(residual);
  return Vec3<Scalar>((a(2, 1) - a(1, 2)) / 2, (a(0, 2) - a(2, 0)) / 2, (a(1, 0) - a(0, 1)) / 2);
}

/// exp(hat(v)): rotation by |v| about v/|v|.
template <typename Scalar>
Rotation<Scalar> rodrigues(const Vec3<Scalar>& v) {
  using std::cos;
  using std::sin;
  const Scalar theta2 = v.squaredNorm();
  const Mat3<Scalar> k = hat(v);
  Scalar a;  // sin(t)/t
  Scalar b;  // (1 - cos(t))/t^2
  if (theta2 < Scalar(1e-8)) {
    a = Scalar(1) - theta2 / 6 + theta2 * theta2 / 120;
    b = Scalar(0.5) - theta2 / 24 + theta2 * theta2 / 720;
  } else {
    const Scalar theta = std::sqrt(theta2);
    a = sin(theta) / theta;
    // 2 sin^2(t/2) avoids cancellation in 1 - cos(t).
    const Scalar s = sin(theta / 2);
    b = 2 * s * s / theta2;
  }
  return Rotation<Scalar>::unchecked(Mat3<Scalar>::Identity() + a * k + b * k * k);
}

/// Rotation vector of R (inverse of rodrigues on angles in [0, pi]).
template <typename Scalar>
Vec3<Scalar> log_map(const Rotation<Scalar>& rot) {
  const Mat3<Scalar>& r = rot.matrix();
  const Scalar cos_theta = std::clamp<Scalar>((r.trace() - 1) / 2, Scalar(-1), Scalar(1));
  const Vec3<Scalar> w((r(2, 1) - r(1, 2)) / 2, (r(0, 2) - r(2, 0)) / 2, (r(1, 0) - r(0, 1)) / 2);
  const Scalar sin_theta = w.norm();
  const Scalar theta = std::atan2(sin_theta, cos_theta);
  if (theta < Scalar(1e-6)) {
    return w * (Scalar(1) + theta * theta / 6);
  }
  if (std::numbers::pi_v<Scalar> - theta > Scalar(1e-6)) {
    return w * (theta / sin_theta);
  }
  // Near pi the anti-symmetric part vanishes; read the axis from R + E.
  const Mat3<Scalar> s = (r + r.transpose()) / 2 + Mat3<Scalar>::Identity();
  Eigen::Index col = 0;
  s.colwise().norm().maxCoeff(&col);
  Vec3<Scalar> axis = s.col(col).normalized();
  if (axis.dot(w) < 0) axis = -axis;
  return axis * theta;
}

/// Nearest rotation to `m` (polar factor).
template <typename Scalar>
Rotation<Scalar> orthonormalize(const Mat3<Scalar>& m) {
  Eigen::JacobiSVD<Mat3<Scalar>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3<Scalar> u = svd.matrixU();
  const Mat3<Scalar> v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0) u.col(2) = -u.col(2);
  return Rotation<Scalar>::unchecked(u * v.transpose());
}

template <typename Scalar>
Mat3<Scalar> rotation_z(Scalar angle) {
  using std::cos;
  using std::sin;
  Mat3<Scalar> m;
  m << cos(angle), -sin(angle), Scalar(0),
       sin(angle), cos(angle), Scalar(0),
       Scalar(0), Scalar(0), Scalar(1);
  return m;
}

template <typename Scalar>
Mat3<Scalar> rotation_x(Scalar angle) {
  using std::cos;
  using std::sin;
  Mat3<Scalar> m;
  m << Scalar(1), Scalar(0), Scalar(0),
       Scalar(0), cos(angle), -sin(angle),
       Scalar(0), sin(angle), cos(angle);
  return m;
}

/// R = D(phi) C(theta) B(psi), D and B about z, C about x.
template <typename Scalar>
Rotation<Scalar> euler_to_rotation(const EulerAngles<Scalar>& a) {
  return Rotation<Scalar>::unchecked(rotation_z(a.phi) * rotation_x(a.theta) * rotation_z(a.psi));
}

namespace detail {
template <typename Scalar>
Scalar wrap_angle(Scalar a) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  if (a <= -pi) a += 2 * pi;
  if (a > pi) a -= 2 * pi;
  return a;
}
}  // namespace detail

/// Inverse of euler_to_rotation. theta in [0, pi]; phi, psi in (-pi, pi].
/// With sin(theta) = 0 the spin is folded into phi and psi = 0.
template <typename Scalar>
EulerAngles<Scalar> rotation_to_euler(const Rotation<Scalar>& rot, double gimbal_tol = kGimbalSinTol) {
  const Mat3<Scalar>& r = rot.matrix();
  const Scalar sin_theta = std::hypot(r(0, 2), r(1, 2));
  const Scalar sin_theta_row = std::hypot(r(2, 0), r(2, 1));
  EulerAngles<Scalar> out;
  out.theta = std::atan2((sin_theta + sin_theta_row) / 2, r(2, 2));
  if (static_cast<double>(std::max(sin_theta, sin_theta_row)) <= gimbal_tol) {
    out.psi = Scalar(0);
    out.phi = detail::wrap_angle(std::atan2(r(1, 0), r(0, 0)));
    out.theta = r(2, 2) > 0 ? Scalar(0) : std::numbers::pi_v<Scalar>;
    return out;
  }
  out.phi = detail::wrap_angle(std::atan2(r(0, 2), -r(1, 2)));
  out.psi = detail::wrap_angle(std::atan2(r(2, 0), r(2, 1)));
  return out;
}

/// Omega = vee(Rᵀ Rdot).
template <typename Scalar>
Vec3<Scalar> body_angular_velocity(const Rotation<Scalar>& r, const Mat3<Scalar>& rdot,
                                   double tol = kBodyRateAntiSymmetryTol) {
  return vee(Mat3<Scalar>(r.matrix().transpose() * rdot), tol);
}

/// Spatial angular velocity ω = R Ω.
template <typename Scalar>
Vec3<Scalar> spatial_angular_velocity(const Rotation<Scalar>& r, const Vec3<Scalar>& body_omega) {
  return r * body_omega;
}

/// Body angular velocity from Euler angles and their rates.
template <typename Scalar>
Vec3<Scalar> euler_kinematics(const EulerAngles<Scalar>& a, const EulerRates<Scalar>& d) {
  using std::cos;
  using std::sin;
  return Vec3<Scalar>(d.phidot * sin(a.theta) * sin(a.psi) + d.thetadot * cos(a.psi),
                      d.phidot * sin(a.theta) * cos(a.psi) - d.thetadot * sin(a.psi),
                      d.phidot * cos(a.theta) + d.psidot);
}

template <typename Scalar>
struct SymmetricEigen {
  Vec3<Scalar> values;     // ascending
  Rotation<Scalar> frame;  // columns are the eigenvectors
};

namespace detail {

// Completes `u` (unit) to an orthonormal pair spanning u⊥, built by
// Gram-Schmidt from the coordinate axes.
template <typename Scalar>
std::array<Vec3<Scalar>, 2> complement_from_axes(const Vec3<Scalar>& u) {
  std::array<Vec3<Scalar>, 2> basis;
  int found = 0;
  int first_axis = -1;
  for (int a = 0; a < 3 && found == 0; ++a) {
    const Vec3<Scalar> e = Vec3<Scalar>::Unit(a);
    const Vec3<Scalar> w = e - e.dot(u) * u;
    if (w.squaredNorm() >= Scalar(0.5)) {
      basis[0] = w.normalized();
      first_axis = a;
      found = 1;
    }
  }
  Vec3<Scalar> best = Vec3<Scalar>::Zero();
  for (int a = 0; a < 3; ++a) {
    if (a == first_axis) continue;
    const Vec3<Scalar> e = Vec3<Scalar>::Unit(a);
    const Vec3<Scalar> w = e - e.dot(u) * u - e.dot(basis[0]) * basis[0];
    if (w.squaredNorm() > best.squaredNorm()) best = w;
  }
  basis[1] = best.normalized();
  return basis;
}

template <typename Scalar>
void fix_sign(Mat3<Scalar>& v, int col) {
  Eigen::Index idx = 0;
  v.col(col).cwiseAbs().maxCoeff(&idx);
  if (v(idx, col) < 0) v.col(col) = -v.col(col);
}

}  // namespace detail

/// Eigen-decomposition of a symmetric 3×3 matrix by cyclic Jacobi rotations.
/// Eigenvalues ascend; degenerate eigenspaces get a deterministic basis built
/// from the coordinate axes and the frame is made right-handed.
template <typename Scalar>
SymmetricEigen<Scalar> symmetric_eigen3(const Mat3<Scalar>& m, double tol = kSymmetryTol) {
  const Scalar scale = std::max<Scalar>(Scalar(1), m.cwiseAbs().maxCoeff());
  const double residual = static_cast<double>((m - m.transpose()).cwiseAbs().maxCoeff());
  if (!(residual <= tol * static_cast<double>(scale))) throw NotSymmetric(residual);

  Mat3<Scalar> a = (m + m.transpose()) / 2;
  Mat3<Scalar> v = Mat3<Scalar>::Identity();
  const Scalar norm = std::max<Scalar>(a.norm(), std::numeric_limits<Scalar>::min());
  constexpr std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  for (int sweep = 0; sweep < 64; ++sweep) {
    const Scalar off = std::sqrt(a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2));
    if (off <= Scalar(kJacobiOffDiagonalTol) * norm) break;
    for (const auto& [p, q] : pairs) {
      if (a(p, q) == Scalar(0)) continue;
      const Scalar theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
      const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) / (std::abs(theta) + std::sqrt(theta * theta + 1));
      const Scalar c = 1 / std::sqrt(t * t + 1);
      const Scalar s = t * c;
      Mat3<Scalar> j = Mat3<Scalar>::Identity();
      j(p, p) = c;
      j(q, q) = c;
      j(p, q) = s;
      j(q, p) = -s;
      a = j.transpose() * a * j;
      v = v * j;
    }
  }

  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int l, int r) { return a(l, l) < a(r, r); });
  Vec3<Scalar> values;
  Mat3<Scalar> frame;
  for (int k = 0; k < 3; ++k) {
    values(k) = a(order[k], order[k]);
    frame.col(k) = v.col(order[k]);
  }

  const Scalar gap = Scalar(kEigenGapTol) * std::max<Scalar>(values.cwiseAbs().maxCoeff(), std::numeric_limits<Scalar>::min());
  const bool low_pair = values(1) - values(0) <= gap;
  const bool high_pair = values(2) - values(1) <= gap;
  if (low_pair && high_pair) {
    frame.setIdentity();
  } else if (low_pair) {
    detail::fix_sign(frame, 2);
    const auto basis = detail::complement_from_axes<Scalar>(frame.col(2));
    frame.col(0) = basis[0];
    frame.col(1) = basis[1];
  } else if (high_pair) {
    detail::fix_sign(frame, 0);
    const auto basis = detail::complement_from_axes<Scalar>(frame.col(0));
    frame.col(1) = basis[0];
    frame.col(2) = basis[1];
  } else {
    for (int k = 0; k < 3; ++k) detail::fix_sign(frame, k);
  }
  if (frame.determinant() < 0) frame.col(2) = -frame.col(2);
  return {values, Rotation<Scalar>::unchecked(frame)};
}

}  // namespace rigidre::geom3
