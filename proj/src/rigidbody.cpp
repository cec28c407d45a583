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

#include "rigidre/rigidbody.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rigidre/elliptic.hpp"

namespace rigidre::rigidbody {

InertiaTensor inertia_tensor(std::span<const double> masses, std::span<const Vec3> positions) {
  if (masses.size() != positions.size()) throw ConfigInvalid("mass and position counts differ");
  InertiaTensor out;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    const Vec3& q = positions[i];
    out.matrix += masses[i] * (q.squaredNorm() * Mat3::Identity() - q * q.transpose());
  }
  return out;
}

InertiaTensor inertia_tensor(const dynamics::Configuration& c) {
  std::vector<double> masses;
  std::vector<Vec3> positions;
  for (const auto& b : c.bodies) {
    masses.push_back(b.mass);
    positions.push_back(b.position);
  }
  return inertia_tensor(masses, positions);
}

PrincipalFrame principal_frame(const InertiaTensor& inertia, std::span<const Vec3> positions) {
  const auto eig = geom3::symmetric_eigen3<double>(inertia.matrix);
  PrincipalFrame out;
  out.moments = eig.values;
  out.frame = eig.frame;
  out.positions.reserve(positions.size());
  for (const Vec3& q : positions) out.positions.push_back(eig.frame.matrix().transpose() * q);
  return out;
}

FirstIntegrals first_integrals(const EulerFlowState& s) {
  const Vec3 c = s.moments.cwiseProduct(s.omega);
  return {s.omega.dot(c), c.squaredNorm()};
}

Vec3 euler_rhs(const EulerFlowState& s) {
  const Vec3& i = s.moments;
  const Vec3& w = s.omega;
  if (!(i.minCoeff() > 0.0)) throw ZeroInertiaAxis();
  return Vec3((i.y() - i.z()) * w.y() * w.z() / i.x(),
              (i.z() - i.x()) * w.z() * w.x() / i.y(),
              (i.x() - i.y()) * w.x() * w.y() / i.z());
}

OmegaPath integrate_euler(const EulerFlowState& s, double dt, int steps) {
  if (!(dt > 0.0)) throw ConfigInvalid("dt must be positive");
  if (steps < 1) throw ConfigInvalid("steps must be at least 1");
  if (!(s.moments.minCoeff() > 0.0)) throw ZeroInertiaAxis();
  OmegaPath path;
  path.dt = dt;
  path.samples.reserve(static_cast<std::size_t>(steps) + 1);
  path.samples.push_back(s.omega);
  auto f = [&](const Vec3& w) { return euler_rhs({w, s.moments}); };
  Vec3 w = s.omega;
  for (int n = 0; n < steps; ++n) {
    const Vec3 k1 = f(w);
    const Vec3 k2 = f(w + dt / 2 * k1);
    const Vec3 k3 = f(w + dt / 2 * k2);
    const Vec3 k4 = f(w + dt * k3);
    w += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    path.samples.push_back(w);
  }
  return path;
}

namespace {

void require_asymmetric(const Vec3& m, const ClassifyTolerances& tol) {
  const double gap = tol.eigen_gap * m.cwiseAbs().maxCoeff();
  if (!(m.x() > gap) || !(m.y() - m.x() > gap) || !(m.z() - m.y() > gap)) throw NotAsymmetric();
}

void require_interior(double twoK, double C2, const Vec3& m, const ClassifyTolerances& tol) {
  const double band = tol.boundary * twoK * m.z();
  if (!(C2 - twoK * m.x() > band) || !(twoK * m.z() - C2 > band)) throw BoundaryCase();
}

double raw_k2(double twoK, double C2, const Vec3& m) {
  return (m.y() - m.x()) * (twoK * m.z() - C2) / ((m.z() - m.y()) * (C2 - twoK * m.x()));
}

// Separatrix amplitudes of (sech, tanh, sech).
Vec3 separatrix_amplitudes(double twoK, const Vec3& m) {
  return Vec3(std::sqrt(twoK * (m.z() - m.y()) / (m.x() * (m.z() - m.x()))),
              std::sqrt(twoK / m.y()),
              std::sqrt(twoK * (m.y() - m.x()) / (m.z() * (m.z() - m.x()))));
}

// Amplitudes of (cn, sn, dn) for k² < 1.
Vec3 inner_amplitudes(double twoK, double C2, const Vec3& m) {
  return Vec3(std::sqrt((twoK * m.z() - C2) / (m.x() * (m.z() - m.x()))),
              std::sqrt((twoK * m.z() - C2) / (m.y() * (m.z() - m.y()))),
              std::sqrt((C2 - twoK * m.x()) / (m.z() * (m.z() - m.x()))));
}

// Amplitudes of (dn, sn, cn) for k² > 1, in the argument k τ.
Vec3 outer_amplitudes(double twoK, double C2, const Vec3& m) {
  return Vec3(std::sqrt((twoK * m.z() - C2) / (m.x() * (m.z() - m.x()))),
              std::sqrt((C2 - twoK * m.x()) / (m.y() * (m.y() - m.x()))),
              std::sqrt((C2 - twoK * m.x()) / (m.z() * (m.z() - m.x()))));
}

// Inverts the Jacobi amplitude on [-2K, 2K] by bisection.
double inverse_amplitude(double phi, double k2) {
  const double half_period = 2.0 * elliptic::complete_K(k2);
  double lo = -half_period;
  double hi = half_period;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * half_period; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (elliptic::amplitude(mid, k2) < phi) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

int sign_of(double v) { return v < 0.0 ? -1 : 1; }

}  // namespace

double modulus_k2(double twoK, double C2, const Vec3& moments, const ClassifyTolerances& tol) {
  require_asymmetric(moments, tol);
  require_interior(twoK, C2, moments, tol);
  return raw_k2(twoK, C2, moments);
}

std::string_view to_string(MotionTag tag) {
  switch (tag) {
    case MotionTag::SphericalTop: return "SphericalTop";
    case MotionTag::DegenerateAxis: return "DegenerateAxis";
    case MotionTag::SymmetricTop: return "SymmetricTop";
    case MotionTag::AsymBoundaryX: return "AsymBoundaryX";
    case MotionTag::AsymBoundaryZ: return "AsymBoundaryZ";
    case MotionTag::AsymSeparatrixFixed: return "AsymSeparatrixFixed";
    case MotionTag::AsymGeneric: return "AsymGeneric";
    case MotionTag::AsymSeparatrix: return "AsymSeparatrix";
  }
  return "Unknown";
}

MotionClass classify(double twoK, double C2, const Vec3& moments, const Vec3& omega,
                     const ClassifyTolerances& tol) {
  const Vec3& m = moments;
  const double gap = tol.eigen_gap * m.cwiseAbs().maxCoeff();
  if (m.z() - m.x() <= gap) return {MotionTag::SphericalTop, 0.0};
  if (m.x() <= gap) return {MotionTag::DegenerateAxis, 0.0};
  if (m.y() - m.x() <= gap || m.z() - m.y() <= gap) return {MotionTag::SymmetricTop, 0.0};
  const double band = tol.boundary * twoK * m.z();
  if (std::abs(C2 - twoK * m.x()) <= band) return {MotionTag::AsymBoundaryX, 0.0};
  if (std::abs(C2 - twoK * m.z()) <= band) return {MotionTag::AsymBoundaryZ, 0.0};
  const double k2 = raw_k2(twoK, C2, m);
  if (std::abs(k2 - 1.0) < tol.separatrix) {
    const bool fixed = std::abs(twoK - m.y() * omega.y() * omega.y()) <= tol.boundary * twoK;
    return {fixed ? MotionTag::AsymSeparatrixFixed : MotionTag::AsymSeparatrix, 1.0};
  }
  return {MotionTag::AsymGeneric, k2};
}

double tau_rate(double twoK, double C2, const Vec3& m) {
  return std::sqrt((m.z() - m.y()) * (C2 - twoK * m.x()) / (m.x() * m.y() * m.z()));
}

Vec3 closed_form_omega(double tau, double twoK, double C2, const Vec3& moments, BranchSigns branch,
                       const ClassifyTolerances& tol) {
  require_asymmetric(moments, tol);
  require_interior(twoK, C2, moments, tol);
  const double k2 = raw_k2(twoK, C2, moments);
  const double sx = branch.x < 0 ? -1.0 : 1.0;
  const double sz = branch.z < 0 ? -1.0 : 1.0;
  if (std::abs(k2 - 1.0) < tol.separatrix) {
    const Vec3 amp = separatrix_amplitudes(twoK, moments);
    const double sech = 1.0 / std::cosh(tau);
    return Vec3(sx * amp.x() * sech, sx * sz * amp.y() * std::tanh(tau), sz * amp.z() * sech);
  }
  if (k2 < 1.0) {
    const Vec3 amp = inner_amplitudes(twoK, C2, moments);
    const auto j = elliptic::jacobi(tau, k2);
    return Vec3(sx * amp.x() * j.cn, sx * sz * amp.y() * j.sn, sz * amp.z() * j.dn);
  }
  // k² > 1: dn rides on x and cn on z, with modulus 1/k² and argument k τ.
  const Vec3 amp = outer_amplitudes(twoK, C2, moments);
  const auto j = elliptic::jacobi(std::sqrt(k2) * tau, 1.0 / k2);
  return Vec3(sx * amp.x() * j.dn, sx * sz * amp.y() * j.sn, sz * amp.z() * j.cn);
}

EulerSolution::EulerSolution(const Vec3& moments, const Vec3& omega0, const ClassifyTolerances& tol)
    : moments_(moments), omega0_(omega0), tol_(tol) {
  integrals_ = first_integrals({omega0, moments});
  motion_ = classify(integrals_.twoK, integrals_.C2, moments, omega0, tol);
  const double twoK = integrals_.twoK;
  const double C2 = integrals_.C2;
  switch (motion_.tag) {
    case MotionTag::DegenerateAxis:
      throw ZeroInertiaAxis();
    case MotionTag::SymmetricTop: {
      const double gap = tol.eigen_gap * moments.cwiseAbs().maxCoeff();
      unique_axis_ = (moments.y() - moments.x() <= gap) ? 2 : 0;
      const double equal = moments(1);
      precession_ = (moments(unique_axis_) - equal) * omega0(unique_axis_) / equal;
      break;
    }
    case MotionTag::AsymGeneric: {
      rate_ = tau_rate(twoK, C2, moments);
      if (motion_.k2 < 1.0) {
        const Vec3 amp = inner_amplitudes(twoK, C2, moments);
        branch_ = {1, sign_of(omega0.z())};
        const double phi = std::atan2(branch_.z * omega0.y() / amp.y(), omega0.x() / amp.x());
        tau0_ = inverse_amplitude(phi, motion_.k2);
      } else {
        const Vec3 amp = outer_amplitudes(twoK, C2, moments);
        branch_ = {sign_of(omega0.x()), 1};
        const double phi = std::atan2(branch_.x * omega0.y() / amp.y(), omega0.z() / amp.z());
        tau0_ = inverse_amplitude(phi, 1.0 / motion_.k2) / std::sqrt(motion_.k2);
      }
      break;
    }
    case MotionTag::AsymSeparatrix: {
      rate_ = tau_rate(twoK, C2, moments);
      const Vec3 amp = separatrix_amplitudes(twoK, moments);
      branch_ = {sign_of(omega0.x()), sign_of(omega0.z())};
      const double tanh_part = branch_.x * branch_.z * omega0.y() / amp.y();
      const double sech_part = branch_.x * omega0.x() / amp.x();
      tau0_ = std::asinh(tanh_part / sech_part);
      break;
    }
    default:
      break;
  }
}

double EulerSolution::tau(double t) const {
  switch (motion_.tag) {
    case MotionTag::AsymGeneric:
    case MotionTag::AsymSeparatrix:
      return tau0_ + rate_ * t;
    default:
      return t;
  }
}

Vec3 EulerSolution::omega(double t) const {
  switch (motion_.tag) {
    case MotionTag::SymmetricTop: {
      const Vec3 axis = Vec3::Unit(unique_axis_);
      return geom3::rodrigues<double>(precession_ * t * axis) * omega0_;
    }
    case MotionTag::AsymGeneric:
    case MotionTag::AsymSeparatrix:
      return closed_form_omega(tau(t), integrals_.twoK, integrals_.C2, moments_, branch_, tol_);
    default:
      return omega0_;
  }
}

namespace {

// Cubic Lagrange interpolation of the samples at fractional index x.
Vec3 interpolate(const OmegaPath& path, double x) {
  const std::size_t n = path.size();
  if (n < 4) {
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(x), n - 2);
    const double f = x - static_cast<double>(i);
    return (1.0 - f) * path.samples[i] + f * path.samples[i + 1];
  }
  const auto base = static_cast<std::ptrdiff_t>(std::floor(x)) - 1;
  const std::size_t s = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(base, 0, static_cast<std::ptrdiff_t>(n) - 4));
  Vec3 out = Vec3::Zero();
  for (std::size_t a = 0; a < 4; ++a) {
    double w = 1.0;
    for (std::size_t b = 0; b < 4; ++b) {
      if (a == b) continue;
      w *= (x - static_cast<double>(s + b)) / static_cast<double>(static_cast<std::ptrdiff_t>(a) - static_cast<std::ptrdiff_t>(b));
    }
    out += w * path.samples[s + a];
  }
  return out;
}

}  // namespace

std::vector<Rotation> reconstruct_rotation(const OmegaPath& omega, const Rotation& r0) {
  std::vector<Rotation> out;
  out.reserve(omega.size());
  out.push_back(r0);
  if (omega.size() < 2) return out;
  const double h = omega.dt;
  const double offset = std::sqrt(3.0) / 6.0;
  for (std::size_t n = 0; n + 1 < omega.size(); ++n) {
    const double x = static_cast<double>(n);
    const Vec3 w1 = interpolate(omega, x + 0.5 - offset);
    const Vec3 w2 = interpolate(omega, x + 0.5 + offset);
    const Vec3 increment = (h / 2) * (w1 + w2) + (std::sqrt(3.0) / 12.0) * h * h * w1.cross(w2);
    const Mat3 next = out.back().matrix() * geom3::rodrigues<double>(increment).matrix();
    out.push_back(geom3::orthonormalize<double>(next));
  }
  return out;
}

dynamics::Trajectory rebuild_trajectory(std::span<const Rotation> rotations, const OmegaPath& omega,
                                        const dynamics::Configuration& body_frame) {
  if (rotations.size() != omega.size()) throw ConfigInvalid("rotation and omega paths differ in length");
  dynamics::Trajectory traj;
  traj.times.reserve(rotations.size());
  traj.states.reserve(rotations.size());
  for (std::size_t k = 0; k < rotations.size(); ++k) {
    dynamics::Configuration state = body_frame;
    const Mat3& r = rotations[k].matrix();
    for (auto& b : state.bodies) {
      const Vec3 q = b.position;
      b.position = r * q;
      b.velocity = r * omega.samples[k].cross(q);
    }
    traj.times.push_back(omega.time(k));
    traj.states.push_back(std::move(state));
  }
  return traj;
}

DegenerateAxisMotion degenerate_axis_motion(const PrincipalFrame& principal, double angular_momentum,
                                            const Rotation& r0, double dt, int steps, int spin_axis) {
  const Vec3& m = principal.moments;
  if (!(m.x() <= 1e-9 * m.cwiseAbs().maxCoeff())) {
    throw DegenerateInertia("bodies are not on a common axis (smallest moment is nonzero)");
  }
  if (spin_axis != 1 && spin_axis != 2) throw ConfigInvalid("spin axis must be orthogonal to the body line");
  if (!(dt > 0.0) || steps < 1) throw ConfigInvalid("dt must be positive and steps at least 1");
  DegenerateAxisMotion out;
  out.rate = angular_momentum / m(spin_axis);
  const Vec3 omega = out.rate * Vec3::Unit(spin_axis);
  out.omega.dt = dt;
  out.omega.samples.assign(static_cast<std::size_t>(steps) + 1, omega);
  out.rotations.reserve(out.omega.size());
  for (std::size_t k = 0; k < out.omega.size(); ++k) {
    out.rotations.push_back(r0 * geom3::rodrigues<double>(omega * out.omega.time(k)));
  }
  return out;
}

}  // namespace rigidre::rigidbody
