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

#include <gtest/gtest.h>

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "rigidre/elliptic.hpp"
#include "rigidre/geom3.hpp"
#include "rigidre/rigidbody.hpp"

namespace {

using namespace rigidre::rigidbody;

const Vec3 kI(1, 2, 3);

// Euler equations integrated by an adaptive Fehlberg 7(8) pair.
Vec3 euler_oracle(const Vec3& moments, const Vec3& w0, double t) {
  using State = std::array<double, 3>;
  namespace ode = boost::numeric::odeint;
  State x{w0.x(), w0.y(), w0.z()};
  auto rhs = [&](const State& s, State& d, double) {
    d[0] = (moments.y() - moments.z()) * s[1] * s[2] / moments.x();
    d[1] = (moments.z() - moments.x()) * s[2] * s[0] / moments.y();
    d[2] = (moments.x() - moments.y()) * s[0] * s[1] / moments.z();
  };
  ode::integrate_adaptive(ode::make_controlled(1e-14, 1e-14, ode::runge_kutta_fehlberg78<State>()), rhs, x, 0.0, t,
                          1e-3);
  return {x[0], x[1], x[2]};
}

Mat3 diag(double a, double b, double c) { return Vec3(a, b, c).asDiagonal(); }

TEST(InertiaTensor, Examples) {
  const std::vector<double> two{1.0, 1.0};
  const std::vector<Vec3> polar{Vec3(0, 0, 1), Vec3(0, 0, -1)};
  EXPECT_EQ(inertia_tensor(two, polar).matrix, diag(2, 2, 0));
  const std::vector<double> one{1.0};
  const std::vector<Vec3> q{Vec3(1, 0, 0)};
  EXPECT_EQ(inertia_tensor(one, q).matrix, diag(0, 1, 1));
  std::vector<Vec3> ring;
  for (int k = 0; k < 3; ++k) {
    const double a = 2 * std::numbers::pi * k / 3;
    ring.emplace_back(std::cos(a), std::sin(a), 0);
  }
  const std::vector<double> three{1.0, 1.0, 1.0};
  EXPECT_LE((inertia_tensor(three, ring).matrix - diag(1.5, 1.5, 3)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(InertiaTensor, TriangleInequalityOfMoments) {
  std::mt19937 rng(1);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> m(0.1, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> masses;
    std::vector<Vec3> pos;
    for (int k = 0; k < 1 + trial % 6; ++k) {
      masses.push_back(m(rng));
      pos.emplace_back(n(rng), n(rng), n(rng));
    }
    const auto p = principal_frame(inertia_tensor(masses, pos), pos);
    EXPECT_LE(p.moments.z(), p.moments.x() + p.moments.y() + 1e-12);
    EXPECT_GE(p.moments.x(), -1e-12);
  }
}

TEST(PrincipalFrame, DiagonalAndConjugated) {
  const std::vector<Vec3> none;
  const auto d = principal_frame({diag(1, 2, 3)}, none);
  EXPECT_EQ(d.moments, Vec3(1, 2, 3));
  EXPECT_LE((d.frame.matrix() - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-15);

  const Mat3 r = rigidre::geom3::rodrigues<double>(Vec3(0.4, -1.0, 0.3)).matrix();
  const std::vector<Vec3> pos{Vec3(1, 2, 3)};
  const auto p = principal_frame({r * diag(1.5, 4, 2.5) * r.transpose()}, pos);
  EXPECT_LE((p.moments - Vec3(1.5, 2.5, 4)).norm(), 1e-10);
  const Mat3 back = p.frame.matrix().transpose() * r * diag(1.5, 4, 2.5) * r.transpose() * p.frame.matrix();
  EXPECT_LE((back - diag(1.5, 2.5, 4)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((p.frame.matrix() * p.positions[0] - pos[0]).norm(), 1e-14);
}

TEST(PrincipalFrame, PolarPairPutsZeroMomentFirst) {
  const std::vector<double> two{1.0, 1.0};
  const std::vector<Vec3> polar{Vec3(0, 0, 1), Vec3(0, 0, -1)};
  const auto p = principal_frame(inertia_tensor(two, polar), polar);
  EXPECT_LE((p.moments - Vec3(0, 2, 2)).norm(), 1e-15);
  for (const Vec3& q : p.positions) EXPECT_LE(std::hypot(q.y(), q.z()), 1e-15);
}

TEST(EulerRhs, Examples) {
  EXPECT_EQ(euler_rhs({Vec3(0.3, -1, 2), Vec3(2, 2, 2)}), Vec3::Zero());
  EXPECT_EQ(euler_rhs({Vec3(0, 1.7, 0), kI}), Vec3::Zero());
  const Vec3 d = euler_rhs({Vec3(1, 1, 1), kI});
  EXPECT_NEAR(d.x(), -1.0, 1e-15);
  EXPECT_NEAR(d.y(), 1.0, 1e-15);
  EXPECT_NEAR(d.z(), -1.0 / 3.0, 1e-15);
  EXPECT_THROW(euler_rhs({Vec3(1, 1, 1), Vec3(0, 2, 2)}), rigidre::ZeroInertiaAxis);
}

TEST(FirstIntegrals, Examples) {
  const auto z = first_integrals({Vec3::Zero(), kI});
  EXPECT_EQ(z.twoK, 0.0);
  EXPECT_EQ(z.C2, 0.0);
  const auto y = first_integrals({Vec3(0, 1.5, 0), kI});
  EXPECT_DOUBLE_EQ(y.twoK, 2 * 2.25);
  EXPECT_DOUBLE_EQ(y.C2, 4 * 2.25);
  EXPECT_DOUBLE_EQ(y.C2, y.twoK * kI.y());
}

TEST(IntegrateEuler, SphericalAndSymmetric) {
  const auto s = integrate_euler({Vec3(0.3, 0.4, -0.2), Vec3(2, 2, 2)}, 1e-2, 100);
  for (const Vec3& w : s.samples) EXPECT_EQ(w, Vec3(0.3, 0.4, -0.2));

  const Vec3 I(2, 2, 5);
  const Vec3 w0(0.7, 0.0, 1.3);
  const double k = (I.z() - I.x()) * w0.z() / I.x();
  const auto path = integrate_euler({w0, I}, 1e-3, 5000);
  for (std::size_t i = 0; i < path.size(); i += 50) {
    const double t = path.time(i);
    const Vec3& w = path.samples[i];
    EXPECT_NEAR(w.z(), w0.z(), 1e-13);
    EXPECT_NEAR(w.x(), 0.7 * std::cos(k * t), 1e-9);
    EXPECT_NEAR(w.y(), 0.7 * std::sin(k * t), 1e-9);
  }
}

TEST(IntegrateEuler, IntegralsDrift) {
  std::mt19937 rng(2);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 10; ++trial) {
    const Vec3 w0(n(rng), n(rng), n(rng));
    const auto path = integrate_euler({w0, kI}, 1e-3, 10000);
    const auto f0 = first_integrals({w0, kI});
    for (const Vec3& w : path.samples) {
      const auto f = first_integrals({w, kI});
      EXPECT_LE(std::abs(f.twoK - f0.twoK), 1e-10 * f0.twoK);
      EXPECT_LE(std::abs(f.C2 - f0.C2), 1e-10 * f0.C2);
    }
  }
}

TEST(ModulusK2, Examples) {
  EXPECT_NEAR(modulus_k2(2.0, 5.0, kI), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(modulus_k2(2.0, 4.0, kI), 1.0, 1e-15);
  const double near_z = modulus_k2(2.0, 6.0 - 1e-6, kI);
  EXPECT_GT(near_z, 0.0);
  EXPECT_LT(near_z, 1e-6);
  EXPECT_GT(modulus_k2(2.0, 2.0 + 1e-6, kI), 1e5);
  EXPECT_THROW(modulus_k2(2.0, 6.0, kI), rigidre::BoundaryCase);
  EXPECT_THROW(modulus_k2(2.0, 2.0, kI), rigidre::BoundaryCase);
  EXPECT_THROW(modulus_k2(2.0, 5.0, Vec3(1, 1, 3)), rigidre::NotAsymmetric);
}

TEST(Classify, AllTags) {
  EXPECT_EQ(classify(1, 1, Vec3(2, 2, 2), Vec3(0.1, 0.2, 0.3)).tag, MotionTag::SphericalTop);
  EXPECT_EQ(classify(1, 1, Vec3(0, 2, 2), Vec3(0, 0.2, 0.3)).tag, MotionTag::DegenerateAxis);
  EXPECT_EQ(classify(1, 1, Vec3(1, 1, 3), Vec3(0, 0.2, 0.3)).tag, MotionTag::SymmetricTop);
  EXPECT_EQ(classify(1, 1, Vec3(1, 3, 3), Vec3(0, 0.2, 0.3)).tag, MotionTag::SymmetricTop);
  const double wy = std::sqrt(2.0 / 2.0);
  EXPECT_EQ(classify(2, 4, kI, Vec3(0, wy, 0)).tag, MotionTag::AsymSeparatrixFixed);
  EXPECT_EQ(classify(2, 4, kI, Vec3(0, -wy, 0)).tag, MotionTag::AsymSeparatrixFixed);
  EXPECT_EQ(classify(2, 4, kI, closed_form_omega(0.0, 2, 4, kI)).tag, MotionTag::AsymSeparatrix);
  EXPECT_EQ(classify(2, 2, kI, Vec3(1, 0, 0)).tag, MotionTag::AsymBoundaryX);
  EXPECT_EQ(classify(2, 6, kI, Vec3(0, 0, std::sqrt(2.0 / 3.0))).tag, MotionTag::AsymBoundaryZ);
  const auto g = classify(2, 5, kI, closed_form_omega(0.0, 2, 5, kI));
  EXPECT_EQ(g.tag, MotionTag::AsymGeneric);
  EXPECT_NEAR(g.k2, 1.0 / 3.0, 1e-15);
}

TEST(ClosedForm, TauZeroIsExtremal) {
  for (double C2 : {5.0, 3.0}) {
    const Vec3 w = closed_form_omega(0.0, 2.0, C2, kI);
    EXPECT_EQ(w.y(), 0.0);
    const auto f = first_integrals({w, kI});
    EXPECT_NEAR(f.twoK, 2.0, 1e-14);
    EXPECT_NEAR(f.C2, C2, 1e-14);
  }
  // k² < 1: Ω_x = a, Ω_z = c at their maxima.
  const Vec3 w = closed_form_omega(0.0, 2.0, 5.0, kI);
  EXPECT_NEAR(w.x(), std::sqrt((6.0 - 5.0) / (1.0 * 2.0)), 1e-15);
  EXPECT_NEAR(w.z(), std::sqrt((5.0 - 2.0) / (3.0 * 2.0)), 1e-15);
}

TEST(ClosedForm, SeparatrixLimit) {
  const Vec3 w = closed_form_omega(40.0, 2.0, 4.0, kI);
  EXPECT_LE((w - Vec3(0, std::sqrt(2.0 / 2.0), 0)).norm(), 1e-12);
}

TEST(ClosedForm, SolvesEulerEquations) {
  // dΩ/dt = rate dΩ/dτ must equal the Euler right-hand side on every branch.
  const double h = 1e-5;
  for (double C2 : {5.0, 4.0, 3.0, 2.5, 5.9}) {
    const double rate = tau_rate(2.0, C2, kI);
    for (int bx : {1, -1}) {
      for (int bz : {1, -1}) {
        for (double tau : {-3.0, -0.4, 0.0, 0.9, 2.7}) {
          const BranchSigns b{bx, bz};
          const Vec3 w = closed_form_omega(tau, 2.0, C2, kI, b);
          const Vec3 d = rate * (closed_form_omega(tau + h, 2.0, C2, kI, b) -
                                 closed_form_omega(tau - h, 2.0, C2, kI, b)) / (2 * h);
          EXPECT_LE((d - euler_rhs({w, kI})).norm(), 1e-6) << C2 << " " << tau;
          const auto f = first_integrals({w, kI});
          EXPECT_NEAR(f.twoK, 2.0, 1e-12);
          EXPECT_NEAR(f.C2, C2, 1e-12);
        }
      }
    }
  }
}

TEST(ClosedForm, MatchesIntegrationAtTauPointSeven) {
  const double rate = tau_rate(2.0, 5.0, kI);
  const double t = 0.7 / rate;
  const int steps = 1000;
  const auto path = integrate_euler({closed_form_omega(0.0, 2.0, 5.0, kI), kI}, t / steps, steps);
  EXPECT_LE((path.samples.back() - closed_form_omega(0.7, 2.0, 5.0, kI)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ClosedForm, MatchesIndependentOracleOverOnePeriod) {
  for (double C2 : {5.0, 3.0}) {
    const double k2 = modulus_k2(2.0, C2, kI);
    const double period = k2 < 1 ? 4 * rigidre::elliptic::complete_K(k2)
                                 : 4 * rigidre::elliptic::complete_K(1 / k2) / std::sqrt(k2);
    const double rate = tau_rate(2.0, C2, kI);
    const Vec3 w0 = closed_form_omega(0.0, 2.0, C2, kI);
    for (int s = 1; s <= 8; ++s) {
      const double tau = period * s / 8;
      EXPECT_LE((euler_oracle(kI, w0, tau / rate) - closed_form_omega(tau, 2.0, C2, kI)).cwiseAbs().maxCoeff(),
                1e-9);
    }
  }
}

TEST(EulerSolution, ArbitraryInitialConditions) {
  std::mt19937 rng(3);
  std::normal_distribution<double> n;
  int seen_inner = 0, seen_outer = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Vec3 w0(n(rng), n(rng), n(rng));
    const EulerSolution sol(kI, w0);
    ASSERT_EQ(sol.motion().tag, MotionTag::AsymGeneric);
    (sol.motion().k2 < 1 ? seen_inner : seen_outer)++;
    EXPECT_LE((sol.omega(0.0) - w0).norm(), 1e-10 * std::max(1.0, w0.norm()));
    for (double t : {0.5, 3.0, 7.5}) {
      EXPECT_LE((sol.omega(t) - euler_oracle(kI, w0, t)).norm(), 1e-8 * std::max(1.0, w0.norm())) << trial;
    }
  }
  EXPECT_GT(seen_inner, 0);
  EXPECT_GT(seen_outer, 0);
}

TEST(EulerSolution, SeparatrixAndSymmetricTop) {
  const Vec3 w0 = closed_form_omega(-1.3, 2.0, 4.0, kI, {-1, 1});
  const EulerSolution sep(kI, w0);
  EXPECT_EQ(sep.motion().tag, MotionTag::AsymSeparatrix);
  EXPECT_LE((sep.omega(0.0) - w0).norm(), 1e-9);
  EXPECT_LE((sep.omega(4.0) - euler_oracle(kI, w0, 4.0)).norm(), 1e-7);

  for (const Vec3& I : {Vec3(2, 2, 5), Vec3(1, 3, 3)}) {
    const Vec3 v0(0.4, -0.8, 1.1);
    const EulerSolution top(I, v0);
    EXPECT_EQ(top.motion().tag, MotionTag::SymmetricTop);
    for (double t : {0.0, 1.0, 6.0}) EXPECT_LE((top.omega(t) - euler_oracle(I, v0, t)).norm(), 1e-10);
  }
}

TEST(ReconstructRotation, UniformSpin) {
  OmegaPath p;
  p.dt = 1e-2;
  p.samples.assign(501, Vec3(0, 0, 0.8));
  const auto r = reconstruct_rotation(p, Rotation::identity());
  for (std::size_t k = 0; k < r.size(); ++k) {
    const Mat3 expected = rigidre::geom3::rotation_z(0.8 * p.time(k));
    EXPECT_LE((r[k].matrix() - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

void expect_spatial_momentum_constant(const Vec3& I, const Vec3& w0) {
  const auto path = integrate_euler({w0, I}, 1e-3, 10000);
  const Rotation r0 = rigidre::geom3::rodrigues<double>(Vec3(0.2, 0.5, -0.1));
  const auto rots = reconstruct_rotation(path, r0);
  const Vec3 c0 = r0 * I.cwiseProduct(w0);
  for (std::size_t k = 0; k < rots.size(); ++k) {
    const Mat3& m = rots[k].matrix();
    EXPECT_LE((m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((rots[k] * I.cwiseProduct(path.samples[k]) - c0).norm(), 1e-7);
  }
}

TEST(ReconstructRotation, SpatialMomentumInvariant) {
  expect_spatial_momentum_constant(Vec3(2, 2, 5), Vec3(0.6, -0.3, 1.2));
  expect_spatial_momentum_constant(kI, Vec3(0.4, 0.9, -0.7));
}

TEST(RebuildTrajectory, IdentityAndRigid) {
  rigidre::dynamics::Configuration body;
  body.space = rigidre::dynamics::Space::flat;
  body.potential = rigidre::dynamics::PotentialKind::newtonian;
  body.bodies = {{1.0, Vec3(1, 0, 0.3), Vec3::Zero()}, {2.0, Vec3(-0.5, 0.7, 0), Vec3::Zero()}};
  OmegaPath zero;
  zero.dt = 0.1;
  zero.samples.assign(11, Vec3::Zero());
  const std::vector<Rotation> same(11, Rotation::identity());
  const auto s = rebuild_trajectory(same, zero, body);
  for (const auto& st : s.states) {
    EXPECT_EQ(st.bodies[0].position, body.bodies[0].position);
    EXPECT_EQ(st.bodies[1].velocity, Vec3::Zero());
  }
  const auto path = integrate_euler({Vec3(0.4, 0.9, -0.7), kI}, 1e-2, 300);
  const auto traj = rebuild_trajectory(reconstruct_rotation(path, Rotation::identity()), path, body);
  const double d0 = body.bodies[0].position.dot(body.bodies[1].position);
  for (const auto& st : traj.states) {
    EXPECT_NEAR(st.bodies[0].position.dot(st.bodies[1].position), d0, 1e-14);
  }
}

TEST(DegenerateAxis, UniformRotation) {
  const std::vector<double> masses{1.0, 2.0, 0.5};
  const std::vector<Vec3> line{Vec3(1, 0, 0), Vec3(-2, 0, 0), Vec3(3, 0, 0)};
  const auto p = principal_frame(inertia_tensor(masses, line), line);
  EXPECT_NEAR(p.moments.x(), 0.0, 1e-15);
  const auto m = degenerate_axis_motion(p, 5.0, Rotation::identity(), 1e-2, 100);
  EXPECT_DOUBLE_EQ(m.rate, 5.0 / p.moments.z());
  EXPECT_THROW(degenerate_axis_motion(principal_frame({kI.asDiagonal()}, line), 1.0, Rotation::identity(), 1e-2, 10),
               rigidre::DegenerateInertia);
}

}  // namespace
