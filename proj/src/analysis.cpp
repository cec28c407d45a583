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

#include "rigidre/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rigidre::analysis {

using Mat3 = Eigen::Matrix3d;
using rigidbody::Rotation;

RigidityReport rigidity_check(const Trajectory& traj, double tol) {
  if (traj.states.empty()) return {0.0, true};
  const Configuration& first = traj.states.front();
  const std::size_t n = first.size();
  if (n < 2) throw ConfigInvalid("rigidity check needs at least two bodies");
  RigidityReport out;
  for (const Configuration& s : traj.states) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double now = s.bodies[i].position.dot(s.bodies[j].position);
        const double then = first.bodies[i].position.dot(first.bodies[j].position);
        out.max_distance_drift = std::max(out.max_distance_drift, std::abs(now - then));
      }
    }
  }
  out.is_rigid = out.max_distance_drift <= tol;
  return out;
}

namespace {

Rotation smallest_rotation(const Vec3& from, const Vec3& to) {
  const Vec3 a = from.normalized();
  const Vec3 b = to.normalized();
  const Vec3 axis = a.cross(b);
  const double s = axis.norm();
  const double angle = std::atan2(s, a.dot(b));
  if (s < 1e-300) {
    if (a.dot(b) > 0) return Rotation::identity();
    // Antiparallel: any axis orthogonal to a.
    Vec3 perp = a.unitOrthogonal();
    return geom3::rodrigues<double>(std::numbers::pi * perp);
  }
  return geom3::rodrigues<double>(angle / s * axis);
}

Vec3 singular_values(std::span<const double> w, std::span<const Vec3> from, std::span<const Vec3> to) {
  Mat3 h = Mat3::Zero();
  for (std::size_t i = 0; i < from.size(); ++i) h += w[i] * from[i] * to[i].transpose();
  return Eigen::JacobiSVD<Mat3>(h).singularValues();
}

}  // namespace

Rotation best_fit_rotation(std::span<const double> weights, std::span<const Vec3> from, std::span<const Vec3> to) {
  Mat3 h = Mat3::Zero();
  for (std::size_t i = 0; i < from.size(); ++i) h += weights[i] * from[i] * to[i].transpose();
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 s = svd.singularValues();
  if (!(s(0) > 0.0)) throw DegenerateFit("no rotational information in the point sets");
  if (s(1) <= 1e-10 * s(0)) {
    // Rank one: every point lies on one line through the origin.
    return smallest_rotation(svd.matrixU().col(0), svd.matrixV().col(0));
  }
  const Mat3 u = svd.matrixU();
  const Mat3 v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  if ((v * u.transpose()).determinant() < 0) d(2, 2) = -1;
  return geom3::orthonormalize<double>(v * d * u.transpose());
}

RelativeEquilibriumFit fit_constant_omega(const Trajectory& traj) {
  if (traj.size() < 3) throw ConfigInvalid("fit needs at least three samples");
  const std::size_t n = traj.states.front().size();
  std::vector<double> weights;
  std::vector<Vec3> from;
  std::vector<Vec3> to;
  Vec3 sum = Vec3::Zero();
  bool informative = false;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const Configuration& a = traj.states[k];
    const Configuration& b = traj.states[k + 1];
    weights.clear();
    from.clear();
    to.clear();
    for (std::size_t i = 0; i < n; ++i) {
      weights.push_back(a.bodies[i].mass);
      from.push_back(a.bodies[i].position);
      to.push_back(b.bodies[i].position);
    }
    Vec3 s = singular_values(weights, from, to);
    if (s(1) <= 1e-10 * s(0)) {
      // Collinear positions leave the spin about the line free; the
      // velocities pin it down.
      for (std::size_t i = 0; i < n; ++i) {
        weights.push_back(a.bodies[i].mass);
        from.push_back(a.bodies[i].velocity);
        to.push_back(b.bodies[i].velocity);
      }
      s = singular_values(weights, from, to);
    }
    if (s(1) > 1e-10 * s(0)) informative = true;
    const double dt = traj.times[k + 1] - traj.times[k];
    sum += geom3::log_map(best_fit_rotation(weights, from, to)) / dt;
  }
  if (!informative) throw DegenerateFit("bodies lie on one fixed line; rotation rate is unidentifiable");

  RelativeEquilibriumFit out;
  out.omega = sum / static_cast<double>(traj.size() - 1);
  const Configuration& first = traj.states.front();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Mat3 r = geom3::rodrigues<double>(Vec3(out.omega * traj.times[k])).matrix();
    for (std::size_t i = 0; i < n; ++i) {
      const double e = (traj.states[k].bodies[i].position - r * first.bodies[i].position).norm();
      out.residual = std::max(out.residual, e);
    }
  }
  return out;
}

CoefficientVectors coefficient_vectors(std::span<const Vec3> positions, const Vec3& moments, double twoK,
                                       double C2, std::span<const Vec3> torques) {
  const double ix = moments.x();
  const double iy = moments.y();
  const double iz = moments.z();
  if (!(ix > 0.0 && ix < iy && iy < iz)) {
    throw DegenerateInertia("coefficient vectors need 0 < I_x < I_y < I_z");
  }
  if (!torques.empty() && torques.size() != positions.size()) {
    throw ConfigInvalid("torque count does not match body count");
  }
  CoefficientVectors out;
  out.bodies.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double x = positions[i].x();
    const double y = positions[i].y();
    const double z = positions[i].z();
    BodyCoefficients c;
    c.c_xy = Vec3(-(ix - iy + iz) / iz * z * x,
                  (-ix + iy + iz) / iz * y * z,
                  (x * x - y * y) + (ix - iy) / iz * (x * x + y * y));
    c.c_yz = Vec3((y * y - z * z) + (iy - iz) / ix * (y * y + z * z),
                  -(ix + iy - iz) / ix * x * y,
                  (ix - iy + iz) / ix * z * x);
    c.c_zx = Vec3((ix + iy - iz) / iy * x * y,
                  (z * z - x * x) + (iz - ix) / iy * (z * z + x * x),
                  (ix - iy - iz) / iy * y * z);
    c.c_yy = Vec3((-1.0 - iy * (iy - ix) / (iz * (iz - ix))) * y * z,
                  (ix * ix + iz * iz - iy * (ix + iz)) * iy / ((ix - iz) * iz * ix) * z * x,
                  (1.0 + iy * (iy - iz) / (ix * (ix - iz))) * x * y);
    // Constant left-hand part left over after eliminating Ω_x² and Ω_z².
    c.lhs_constant = Vec3(-y * z * (C2 - ix * twoK) / (iz * (ix - iz)),
                          x * z * (C2 * (ix + iz) - (ix * ix + iz * iz) * twoK) / (ix * iz * (ix - iz)),
                          -x * y * (C2 - iz * twoK) / (ix * (ix - iz)));
    c.c0 = (torques.empty() ? Vec3::Zero() : torques[i]) - c.lhs_constant;
    out.bodies.push_back(c);
  }
  return out;
}

double xy_coupling_factor(const Vec3& m) {
  return 1.0 + m.y() * (m.y() - m.z()) / (m.x() * (m.x() - m.z()));
}

Eigen::Matrix2d separatrix_system(const Vec3& m) {
  const double ix = m.x();
  const double iy = m.y();
  const double iz = m.z();
  const double alpha = std::sqrt((iz - iy) * (iy - ix) / (ix * iz));
  Eigen::Matrix2d a;
  a << alpha * (ix + iy - iz), (iz - ix) + iy * (iy - ix) / iz,
       (ix - iz) + iy * (iy - iz) / ix, alpha * (ix - iy - iz);
  return a;
}

double separatrix_system_determinant(const Vec3& m) {
  const double ix = m.x();
  const double iy = m.y();
  const double iz = m.z();
  return 2.0 * iy * (ix - iz) * (ix - iz) * (ix - iy + iz) / (ix * iz);
}

std::vector<ObstructionCheck> obstruction_checks(std::span<const Vec3> positions, const Vec3& moments,
                                                 double zero_tol) {
  const double ix = moments.x();
  const double iy = moments.y();
  const double iz = moments.z();
  const double coupling = xy_coupling_factor(moments);
  std::vector<ObstructionCheck> out;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Vec3& q = positions[i];
    const double scale = std::max(1.0, q.squaredNorm());
    ObstructionCheck c;
    c.body = i;
    c.c_xy_third = (q.x() * q.x() - q.y() * q.y()) + (ix - iy) / iz * (q.x() * q.x() + q.y() * q.y());
    c.c_yy_third = coupling * q.x() * q.y();
    c.off_axis = std::hypot(q.x(), q.y()) > zero_tol * std::sqrt(scale);
    c.obstructed = c.off_axis && (std::abs(c.c_xy_third) > zero_tol * scale || std::abs(c.c_yy_third) > zero_tol * scale);
    out.push_back(c);
  }
  return out;
}

GramRank monomial_gram_rank(std::span<const Vec3> omega, double rel_threshold) {
  Eigen::MatrixXd samples(static_cast<Eigen::Index>(omega.size()), 5);
  for (std::size_t k = 0; k < omega.size(); ++k) {
    const Vec3& w = omega[k];
    samples.row(static_cast<Eigen::Index>(k)) << w.x() * w.y(), w.y() * w.z(), w.z() * w.x(), w.y() * w.y(), 1.0;
  }
  GramRank out;
  if (omega.empty()) return out;
  // Reduce the tall sample matrix to its triangular factor first.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(samples);
  const Eigen::Index k = std::min<Eigen::Index>(samples.rows(), 5);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues();
  out.singular_values.assign(s.data(), s.data() + s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_threshold * s(0)) ++out.rank;
  }
  return out;
}

GramRank monomial_gram_rank(const OmegaPath& omega, double rel_threshold) {
  return monomial_gram_rank(std::span<const Vec3>(omega.samples), rel_threshold);
}

Eigen::Matrix<double, 5, 5> series_matrix(double k2) {
  Eigen::Matrix<double, 5, 5> m = Eigen::Matrix<double, 5, 5>::Zero();
  // Columns a1..a5, rows c0..c4.
  m(0, 2) = 1.0;
  m(0, 4) = 1.0;
  m(1, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 2) = -0.5 * (k2 + 1.0);
  m(2, 3) = 1.0;
  m(3, 0) = -(k2 + 4.0) / 6.0;
  m(3, 1) = -(4.0 * k2 + 1.0) / 6.0;
  m(4, 2) = (k2 * k2 + 14.0 * k2 + 1.0) / 24.0;
  m(4, 3) = -8.0 * (k2 + 1.0) / 24.0;
  return m;
}

SeriesCoefficients series_coefficients(const std::array<double, 5>& a, double k2) {
  const Eigen::Matrix<double, 5, 1> c = series_matrix(k2) * Eigen::Map<const Eigen::Matrix<double, 5, 1>>(a.data());
  SeriesCoefficients out;
  for (int i = 0; i < 5; ++i) out.c[static_cast<std::size_t>(i)] = c(i);
  return out;
}

int series_kernel_dimension(double k2, double rel_threshold) {
  const Eigen::Matrix<double, 5, 1> s = Eigen::JacobiSVD<Eigen::Matrix<double, 5, 5>>(series_matrix(k2)).singularValues();
  int rank = 0;
  for (int i = 0; i < 5; ++i) {
    if (s(i) > rel_threshold * s(0)) ++rank;
  }
  return 5 - rank;
}

TorqueResidual per_body_torque_residual(const Configuration& body_frame, const OmegaPath& omega,
                                        const Vec3& moments) {
  const dynamics::PotentialValue u = dynamics::potential(body_frame);
  const std::size_t n = body_frame.size();
  TorqueResidual out;
  out.lhs.assign(n, {});
  out.rhs.resize(n);
  out.lhs_variation.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& q = body_frame.bodies[i].position;
    out.rhs[i] = q.cross(u.gradients[i]) / body_frame.bodies[i].mass;
    const Mat3 projector = q.squaredNorm() * Mat3::Identity() - q * q.transpose();
    out.lhs[i].reserve(omega.size());
    for (const Vec3& w : omega.samples) {
      const Vec3 wdot = rigidbody::euler_rhs({w, moments});
      const Vec3 lhs = projector * wdot + q.dot(w) * q.cross(w);
      out.lhs[i].push_back(lhs);
      out.lhs_variation[i] = std::max(out.lhs_variation[i], (lhs - out.lhs[i].front()).norm());
      out.max_gap = std::max(out.max_gap, (lhs - out.rhs[i]).norm());
    }
  }
  return out;
}

RelativeEquilibrium find_relative_equilibrium(const Configuration& templ, const Vec3& axis, double omega_lo,
                                              double omega_hi) {
  if (!(axis.norm() > 0.0)) throw ConfigInvalid("rotation axis must be nonzero");
  if (!(omega_lo < omega_hi)) throw ConfigInvalid("omega range must satisfy lo < hi");
  const Vec3 n = axis.normalized();
  const dynamics::PotentialValue u = dynamics::potential(templ);
  const std::size_t count = templ.size();
  std::vector<Vec3> centripetal(count);
  std::vector<Vec3> force(count);
  double saa = 0.0;
  double sag = 0.0;
  double force_scale = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const dynamics::Body& b = templ.bodies[i];
    Mat3 projector = Mat3::Identity();
    if (templ.space == dynamics::Space::sphere) {
      const double r = templ.radius(i);
      projector -= b.position * b.position.transpose() / (r * r);
    }
    centripetal[i] = b.mass * projector * n.cross(n.cross(b.position));
    force[i] = projector * u.gradients[i];
    saa += centripetal[i].squaredNorm();
    sag += centripetal[i].dot(force[i]);
    force_scale = std::max(force_scale, u.gradients[i].norm());
  }
  auto residual_at = [&](double w) {
    double r = 0.0;
    for (std::size_t i = 0; i < count; ++i) r = std::max(r, (w * w * centripetal[i] - force[i]).norm());
    return r;
  };
  auto with_velocities = [&](double w) {
    Configuration c = templ;
    for (auto& b : c.bodies) b.velocity = (w * n).cross(b.position);
    return c;
  };

  if (saa <= std::numeric_limits<double>::min()) {
    // Every body sits on the axis: any rate balances if the forces do.
    const double r = residual_at(omega_lo);
    if (r > 1e-12 * std::max(1.0, force_scale)) throw NoRootInRange(omega_lo, omega_hi);
    return {omega_lo, r, with_velocities(omega_lo)};
  }
  auto balance = [&](double w) { return w * w * saa - sag; };
  double lo = omega_lo;
  double hi = omega_hi;
  double flo = balance(lo);
  const double fhi = balance(hi);
  if (flo == 0.0) return {lo, residual_at(lo), with_velocities(lo)};
  if (fhi == 0.0) return {hi, residual_at(hi), with_velocities(hi)};
  if ((flo < 0.0) == (fhi < 0.0)) throw NoRootInRange(omega_lo, omega_hi);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = balance(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double root = 0.5 * (lo + hi);
  return {root, residual_at(root), with_velocities(root)};
}

double uniform_rotation_eom_residual(const Trajectory& traj, const Vec3& omega) {
  double worst = 0.0;
  for (const Configuration& s : traj.states) {
    const std::vector<Vec3> acc = dynamics::acceleration(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Vec3 expected = omega.cross(omega.cross(s.bodies[i].position));
      worst = std::max(worst, (acc[i] - expected).norm());
    }
  }
  return worst;
}

VerificationReport verify_theorem(const Configuration& c, double dt, int steps, double rigidity_tol) {
  dynamics::validate(c);
  VerificationReport out;
  const dynamics::IntegrationResult run = dynamics::integrate(c, dt, steps);
  out.abort = run.abort;
  if (c.size() >= 2) out.rigidity = rigidity_check(run.trajectory, rigidity_tol);
  if (run.trajectory.size() >= 3) {
    try {
      out.re_fit = fit_constant_omega(run.trajectory);
    } catch (const DegenerateFit&) {
      out.re_fit.reset();
    }
  }

  const rigidbody::InertiaTensor inertia = rigidbody::inertia_tensor(c);
  std::vector<Vec3> positions;
  for (const auto& b : c.bodies) positions.push_back(b.position);
  const rigidbody::PrincipalFrame principal = rigidbody::principal_frame(inertia, positions);
  const Vec3 spatial_omega =
      inertia.matrix.completeOrthogonalDecomposition().solve(dynamics::conserved(c).angular_momentum);
  out.moments = principal.moments;
  out.body_omega = principal.frame.matrix().transpose() * spatial_omega;
  out.integrals = rigidbody::first_integrals({out.body_omega, out.moments});
  out.classification = rigidbody::classify(out.integrals.twoK, out.integrals.C2, out.moments, out.body_omega);
  if (out.classification.tag != rigidbody::MotionTag::DegenerateAxis && out.moments.minCoeff() > 0.0) {
    out.gram_rank = monomial_gram_rank(rigidbody::integrate_euler({out.body_omega, out.moments}, dt, steps));
  }
  const double gap = 1e-9 * out.moments.cwiseAbs().maxCoeff();
  if (out.moments.x() > gap && out.moments.y() - out.moments.x() > gap && out.moments.z() - out.moments.y() > gap) {
    out.coefficient_checks = obstruction_checks(principal.positions, out.moments);
  }
  return out;
}

}  // namespace rigidre::analysis
