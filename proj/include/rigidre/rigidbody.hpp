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

// Rotating-frame reduction of a rigid configuration. Bodies are fixed in a
// frame that rotates by R(t), q = R Q, with body angular velocity
// Ω = vee(Rᵀ Ṙ). In principal axes (I_x ≤ I_y ≤ I_z) Ω obeys the torque-free
// Euler equations, whose solutions are written in Jacobi elliptic functions
// of the rescaled time τ.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "rigidre/dynamics.hpp"
#include "rigidre/geom3.hpp"

namespace rigidre::rigidbody {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Rotation = geom3::Rotation<double>;

struct InertiaTensor {
  Mat3 matrix{Mat3::Zero()};
};

/// I = Σ m_i (|Q_i|² E - Q_i Q_iᵀ).
InertiaTensor inertia_tensor(std::span<const double> masses, std::span<const Vec3> positions);
InertiaTensor inertia_tensor(const dynamics::Configuration& c);

struct PrincipalFrame {
  Vec3 moments{Vec3::Zero()};  // ascending
  Rotation frame;              // principal coordinates -> original coordinates
  std::vector<Vec3> positions; // Q_i in principal coordinates
};

PrincipalFrame principal_frame(const InertiaTensor& inertia, std::span<const Vec3> positions);

struct EulerFlowState {
  Vec3 omega{Vec3::Zero()};    // body frame, principal axes
  Vec3 moments{Vec3::Zero()};  // I_x, I_y, I_z
};

struct FirstIntegrals {
  double twoK{0.0};  // Σ I_α Ω_α²
  double C2{0.0};    // Σ I_α² Ω_α²
};

FirstIntegrals first_integrals(const EulerFlowState& s);

/// Ω̇ from I_x Ω̇_x = (I_y - I_z) Ω_y Ω_z and cyclic. Throws ZeroInertiaAxis.
Vec3 euler_rhs(const EulerFlowState& s);

/// Uniformly sampled body angular velocity, sample i at time i*dt.
struct OmegaPath {
  double dt{0.0};
  std::vector<Vec3> samples;

  std::size_t size() const { return samples.size(); }
  double time(std::size_t i) const { return static_cast<double>(i) * dt; }
};

/// RK4 flow of the Euler equations; steps + 1 samples.
OmegaPath integrate_euler(const EulerFlowState& s, double dt, int steps);

struct ClassifyTolerances {
  double eigen_gap{1e-9};   // relative to max I
  double boundary{1e-10};   // relative to 2K I_z
  double separatrix{1e-9};  // |k² - 1|
};

/// k² = (I_y - I_x)(2K I_z - |C|²) / ((I_z - I_y)(|C|² - 2K I_x)).
/// Throws NotAsymmetric or BoundaryCase outside the open interior.
double modulus_k2(double twoK, double C2, const Vec3& moments, const ClassifyTolerances& tol = {});

enum class MotionTag {
  SphericalTop,
  DegenerateAxis,
  SymmetricTop,
  AsymBoundaryX,
  AsymBoundaryZ,
  AsymSeparatrixFixed,
  AsymGeneric,
  AsymSeparatrix,
};

std::string_view to_string(MotionTag tag);

struct MotionClass {
  MotionTag tag{MotionTag::SphericalTop};
  double k2{0.0};  // meaningful for the asymmetric interior tags only
};

MotionClass classify(double twoK, double C2, const Vec3& moments, const Vec3& omega,
                     const ClassifyTolerances& tol = {});

/// Selects one of the symmetric solution branches. The solution reads
/// (s_x a cn, s_x s_z b sn, s_z c dn) for k² < 1, with the roles of x and z
/// exchanged when k² > 1.
struct BranchSigns {
  int x{1};
  int z{1};
};

/// dτ/dt = sqrt((I_z - I_y)(|C|² - 2K I_x) / (I_x I_y I_z)).
double tau_rate(double twoK, double C2, const Vec3& moments);

/// Closed-form Ω(τ) anchored at Ω_y = 0 for τ = 0. k² = 1 uses the
/// tanh/sech separatrix solution; k² > 1 swaps the x and z roles so the
/// elliptic functions are only evaluated for k² < 1.
Vec3 closed_form_omega(double tau, double twoK, double C2, const Vec3& moments, BranchSigns branch = {},
                       const ClassifyTolerances& tol = {});

/// Solution of the Euler equations through a given initial Ω, for every
/// motion class with positive moments.
class EulerSolution {
 public:
  EulerSolution(const Vec3& moments, const Vec3& omega0, const ClassifyTolerances& tol = {});

  Vec3 omega(double t) const;
  /// Rescaled time τ(t) for the asymmetric interior classes, t otherwise.
  double tau(double t) const;
  const MotionClass& motion() const { return motion_; }
  FirstIntegrals integrals() const { return integrals_; }
  BranchSigns branch() const { return branch_; }
  double tau_offset() const { return tau0_; }

 private:
  Vec3 moments_;
  Vec3 omega0_;
  ClassifyTolerances tol_;
  MotionClass motion_;
  FirstIntegrals integrals_;
  BranchSigns branch_;
  double tau0_{0.0};
  double rate_{1.0};
  // Symmetric top: unique axis and precession rate.
  int unique_axis_{2};
  double precession_{0.0};
};

/// Solves Ṙ = R hat(Ω(t)) by fourth-order Magnus steps with the samples
/// interpolated by cubics; each step is re-orthonormalized.
std::vector<Rotation> reconstruct_rotation(const OmegaPath& omega, const Rotation& r0);

/// q_i(t) = R(t) Q_i and q̇_i = R(Ω × Q_i). `body_frame` supplies masses,
/// space and potential and holds Q_i as its positions.
dynamics::Trajectory rebuild_trajectory(std::span<const Rotation> rotations, const OmegaPath& omega,
                                        const dynamics::Configuration& body_frame);

/// Spatial motion of a configuration whose bodies all lie on the zero-moment
/// principal axis: uniform rotation with rate |c| / I about the principal
/// axis `spin_axis` (1 or 2) orthogonal to the line of bodies.
struct DegenerateAxisMotion {
  OmegaPath omega;
  std::vector<Rotation> rotations;
  double rate{0.0};
};

DegenerateAxisMotion degenerate_axis_motion(const PrincipalFrame& principal, double angular_momentum,
                                            const Rotation& r0, double dt, int steps, int spin_axis = 2);

}  // namespace rigidre::rigidbody
