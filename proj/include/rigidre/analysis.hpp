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

// Checks that connect rigid motions with relative equilibria: detectors for
// both, the per-body coefficient vectors obtained by reducing the
// rotating-frame torque balance to the monomials
// Ω_xΩ_y, Ω_yΩ_z, Ω_zΩ_x, Ω_y² and 1, rank tests on those monomials, and a
// one-dimensional relative-equilibrium finder.

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rigidre/dynamics.hpp"
#include "rigidre/rigidbody.hpp"

namespace rigidre::analysis {

using Vec3 = Eigen::Vector3d;
using dynamics::Configuration;
using dynamics::Trajectory;
using rigidbody::OmegaPath;

inline constexpr double kRigidityTol = 1e-8;
inline constexpr double kGramRankThreshold = 1e-8;

struct RigidityReport {
  double max_distance_drift{0.0};
  bool is_rigid{true};
};

/// max over unordered pairs and samples of |q_i·q_j - q_i(0)·q_j(0)|.
RigidityReport rigidity_check(const Trajectory& traj, double tol = kRigidityTol);

struct RelativeEquilibriumFit {
  Vec3 omega{Vec3::Zero()};  // spatial, constant
  double residual{0.0};      // max |q_i(t) - exp(hat(ω) t) q_i(0)|
};

/// Averages log(R_k)/dt_k over the best-fit rotations R_k between
/// consecutive samples. Throws DegenerateFit when the motion carries no
/// rotational information (all bodies at the origin, or a single line of
/// bodies that never moves).
RelativeEquilibriumFit fit_constant_omega(const Trajectory& traj);

/// Rotation R minimizing Σ m_i |R p_i - p'_i|². Collinear inputs get the
/// smallest rotation carrying the line onto its image.
rigidbody::Rotation best_fit_rotation(std::span<const double> weights, std::span<const Vec3> from,
                                      std::span<const Vec3> to);

struct BodyCoefficients {
  Vec3 c_xy{Vec3::Zero()};
  Vec3 c_yz{Vec3::Zero()};
  Vec3 c_zx{Vec3::Zero()};
  Vec3 c_yy{Vec3::Zero()};
  /// Constant left-hand term (depends on 2K and |C|²).
  Vec3 lhs_constant{Vec3::Zero()};
  /// c0 = v_i - lhs_constant when the torque v_i is supplied.
  Vec3 c0{Vec3::Zero()};
};

struct CoefficientVectors {
  std::vector<BodyCoefficients> bodies;
};

/// Coefficients of c_xy Ω_xΩ_y + c_yz Ω_yΩ_z + c_zx Ω_zΩ_x + c_yy Ω_y² = c0 for
/// bodies at principal-frame positions Q_i. Requires I_x < I_y < I_z.
CoefficientVectors coefficient_vectors(std::span<const Vec3> positions, const Vec3& moments, double twoK,
                                       double C2, std::span<const Vec3> torques = {});

/// 1 + I_y(I_y - I_z) / (I_x(I_x - I_z)), the factor multiplying x_i y_i in
/// the third entry of c_yy.
double xy_coupling_factor(const Vec3& moments);

/// The 2×2 system in (x_i y_i, y_i z_i) that arises on the separatrix.
Eigen::Matrix2d separatrix_system(const Vec3& moments);
/// Its determinant in closed form: 2 I_y (I_x - I_z)² (I_x - I_y + I_z) / (I_x I_z).
double separatrix_system_determinant(const Vec3& moments);

struct ObstructionCheck {
  std::size_t body{0};
  double c_xy_third{0.0};
  double c_yy_third{0.0};
  bool off_axis{false};      // (x_i, y_i) != (0, 0)
  bool obstructed{false};    // off_axis and at least one third entry nonzero
};

std::vector<ObstructionCheck> obstruction_checks(std::span<const Vec3> positions, const Vec3& moments,
                                                 double zero_tol = 1e-12);

struct GramRank {
  int rank{0};
  std::vector<double> singular_values;  // descending
};

/// Numerical rank of the sample matrix [Ω_xΩ_y, Ω_yΩ_z, Ω_zΩ_x, Ω_y², 1].
GramRank monomial_gram_rank(std::span<const Vec3> omega, double rel_threshold = kGramRankThreshold);
GramRank monomial_gram_rank(const OmegaPath& omega, double rel_threshold = kGramRankThreshold);

struct SeriesCoefficients {
  std::array<double, 5> c{};  // τ^0 .. τ^4
};

/// Taylor coefficients to order τ⁴ of
/// a1 cn sn + a2 sn dn + a3 dn cn + a4 sn² + a5.
SeriesCoefficients series_coefficients(const std::array<double, 5>& a, double k2);
/// The linear map a -> c as a matrix.
Eigen::Matrix<double, 5, 5> series_matrix(double k2);
/// Dimension of the kernel of series_matrix(k2).
int series_kernel_dimension(double k2, double rel_threshold = 1e-12);

struct TorqueResidual {
  std::vector<std::vector<Vec3>> lhs;   // per body, per sample
  std::vector<Vec3> rhs;                // per body, m_i⁻¹ Q_i × ∂U/∂Q_i
  std::vector<double> lhs_variation;    // per body, max |lhs(t) - lhs(0)|
  double max_gap{0.0};                  // max over bodies and samples |lhs - rhs|
};

/// Evaluates (|Q_i|² E - Q_i Q_iᵀ) Ω̇ + (Q_i·Ω) Q_i × Ω along `omega`, with Ω̇
/// from the Euler equations, against the potential torque of `body_frame`.
/// Positions must be principal-frame Q_i for `moments`.
TorqueResidual per_body_torque_residual(const Configuration& body_frame, const OmegaPath& omega,
                                        const Vec3& moments);

struct RelativeEquilibrium {
  double omega{0.0};
  double residual{0.0};
  /// Template with velocities ω axis × q_i.
  Configuration configuration;
};

/// Rotation rate about `axis` that balances the template: the tangential
/// (sphere) or full (flat) residual m_i ω×(ω×q_i) - ∂U/∂q_i is projected on
/// the centripetal directions and the resulting scalar is bisected.
RelativeEquilibrium find_relative_equilibrium(const Configuration& templ, const Vec3& axis, double omega_lo,
                                              double omega_hi);

/// Max over bodies and samples of |q̈_i(expected) - q̈_i(equations of motion)|
/// for a trajectory whose accelerations are those of uniform rotation ω.
double uniform_rotation_eom_residual(const Trajectory& traj, const Vec3& omega);

struct VerificationReport {
  RigidityReport rigidity;
  std::optional<RelativeEquilibriumFit> re_fit;
  rigidbody::MotionClass classification;
  Vec3 moments{Vec3::Zero()};
  rigidbody::FirstIntegrals integrals;
  Vec3 body_omega{Vec3::Zero()};
  std::optional<GramRank> gram_rank;
  std::vector<ObstructionCheck> coefficient_checks;
  std::optional<SingularPair> abort;
};

/// Integrates `c`, then runs the rigidity, relative-equilibrium, classification,
/// monomial-rank and coefficient checks on the result.
VerificationReport verify_theorem(const Configuration& c, double dt, int steps, double rigidity_tol = kRigidityTol);

}  // namespace rigidre::analysis
