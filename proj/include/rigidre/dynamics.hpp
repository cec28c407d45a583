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

// N-body system on spheres |q_i| = r_i (constrained by Lagrange multipliers)
// or in flat R³. The Lagrangian is L = K + U, so forces are +∂U/∂q and the
// conserved energy is K - U. Pair sums run over ordered pairs i ≠ j, so every
// unordered pair enters potentials and gradients twice.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

#include "rigidre/errors.hpp"

namespace rigidre::dynamics {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class Space { sphere, flat };
enum class PotentialKind { cotangent, newtonian };

// Reject a sphere pair when 1 - (q_i·q_j / r_i r_j)^2 falls below this.
inline constexpr double kSphereSingularGuard = 1e-12;
// Reject a pair closer than this distance.
inline constexpr double kFlatSingularGuard = 1e-9;
inline constexpr double kConstraintTol = 1e-9;

struct Body {
  double mass{1.0};
  Vec3 position{Vec3::Zero()};
  Vec3 velocity{Vec3::Zero()};
};

struct Configuration {
  std::vector<Body> bodies;
  Space space{Space::sphere};
  PotentialKind potential{PotentialKind::cotangent};
  /// Sphere radii r_i; empty means r_i = 1 for every body.
  std::vector<double> radii;

  std::size_t size() const { return bodies.size(); }
  double radius(std::size_t i) const { return radii.empty() ? 1.0 : radii.at(i); }
};

/// Throws ConfigInvalid when a body or sphere constraint invariant fails.
void validate(const Configuration& c, double tol = kConstraintTol);

struct PotentialValue {
  double value{0.0};
  std::vector<Vec3> gradients;
};

/// U = Σ_{i≠j} m_i m_j cot d_ij on the unit sphere.
PotentialValue cotangent_potential(const Configuration& c, double guard = kSphereSingularGuard);
/// U = Σ_{i≠j} m_i m_j / |q_i - q_j|.
PotentialValue newtonian_potential(const Configuration& c, double guard = kFlatSingularGuard);
/// Dispatches on c.potential.
PotentialValue potential(const Configuration& c);

/// Σ_i q_i × ∂U/∂q_i, which vanishes for an SO(3)-invariant potential.
Vec3 so3_invariance_residual(const Configuration& c);

/// Multiplier that keeps d²/dt² |q|² = 0:
/// λ = -(m |q̇|² + q·∂U/∂q) / (2 r²).
double lagrange_multiplier(const Body& b, double radius, const Vec3& grad);

/// q̈_i for every body.
std::vector<Vec3> acceleration(const Configuration& c);

struct ConservedSet {
  double kinetic{0.0};
  double potential{0.0};
  double total{0.0};  // kinetic - potential
  Vec3 angular_momentum{Vec3::Zero()};
};

ConservedSet conserved(const Configuration& c);

struct Trajectory {
  std::vector<double> times;
  std::vector<Configuration> states;

  std::size_t size() const { return times.size(); }
};

struct IntegrationResult {
  Trajectory trajectory;
  /// Set when a singular pair stopped the run; the trajectory is partial.
  std::optional<SingularPair> abort;
};

/// Fixed-step RK4 on the constrained vector field. On spheres positions are
/// renormalized to r_i and velocities projected tangent after every step.
IntegrationResult integrate(const Configuration& c, double dt, int steps);

/// Applies a rotation to every position and velocity.
Configuration rotated(const Configuration& c, const Mat3& r);

}  // namespace rigidre::dynamics
