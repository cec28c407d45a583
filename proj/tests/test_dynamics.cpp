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

#include <cmath>
#include <numbers>
#include <random>

#include "rigidre/analysis.hpp"
#include "rigidre/dynamics.hpp"
#include "rigidre/geom3.hpp"
#include "rigidre/rigidbody.hpp"

namespace {

using namespace rigidre::dynamics;
using Vec3 = Eigen::Vector3d;

Vec3 on_sphere(double colat, double lon) {
  return {std::sin(colat) * std::cos(lon), std::sin(colat) * std::sin(lon), std::cos(colat)};
}

Vec3 tangent(const Vec3& q, const Vec3& v) { return v - q.dot(v) * q; }

Configuration sphere_config(std::initializer_list<std::pair<double, double>> angles, std::uint32_t seed,
                            double speed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n;
  Configuration c;
  double m = 1.0;
  for (auto [colat, lon] : angles) {
    const Vec3 q = on_sphere(colat, lon);
    c.bodies.push_back({m, q, speed * tangent(q, Vec3(n(rng), n(rng), n(rng)))});
    m += 0.25;
  }
  return c;
}

// Central differences of the potential value in R³ coordinates.
std::vector<Vec3> numeric_gradient(Configuration c, double h) {
  std::vector<Vec3> g(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      Configuration p = c;
      Configuration m = c;
      p.bodies[i].position(k) += h;
      m.bodies[i].position(k) -= h;
      g[i](k) = (potential(p).value - potential(m).value) / (2 * h);
    }
  }
  return g;
}

TEST(Cotangent, SingleBody) {
  Configuration c;
  c.bodies.push_back({2.0, Vec3(0, 0, 1), Vec3::Zero()});
  const auto u = cotangent_potential(c);
  EXPECT_EQ(u.value, 0.0);
  EXPECT_EQ(u.gradients[0], Vec3::Zero());
}

TEST(Cotangent, OrthogonalPair) {
  Configuration c;
  c.bodies.push_back({1.0, Vec3(1, 0, 0), Vec3::Zero()});
  c.bodies.push_back({1.0, Vec3(0, 0, 1), Vec3::Zero()});
  const auto u = cotangent_potential(c);
  EXPECT_NEAR(u.value, 0.0, 1e-15);
  EXPECT_LE((u.gradients[0] - 2.0 * c.bodies[1].position).norm(), 1e-15);
  const auto fd = numeric_gradient(c, 1e-6);
  EXPECT_LE((fd[0] - u.gradients[0]).norm(), 1e-6);
}

TEST(Cotangent, GradientMatchesFiniteDifferences) {
  const Configuration c = sphere_config({{0.3, 0.1}, {1.2, 2.0}, {2.1, -1.0}, {1.6, 4.0}}, 1, 0.0);
  const auto u = cotangent_potential(c);
  const auto fd = numeric_gradient(c, 1e-6);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_LE((fd[i] - u.gradients[i]).norm(), 1e-6 * u.gradients[i].norm());
  }
}

TEST(Cotangent, SingularPairs) {
  Configuration c;
  c.bodies.push_back({1.0, Vec3(0, 0, 1), Vec3::Zero()});
  c.bodies.push_back({1.0, Vec3(0, 0, -1), Vec3::Zero()});
  EXPECT_THROW(cotangent_potential(c), rigidre::SingularPair);
  c.bodies[1].position = Vec3(0, 0, 1);
  try {
    cotangent_potential(c);
    FAIL();
  } catch (const rigidre::SingularPair& e) {
    EXPECT_EQ(e.first(), 0u);
    EXPECT_EQ(e.second(), 1u);
  }
}

TEST(Newtonian, UnitPair) {
  Configuration c;
  c.space = Space::flat;
  c.potential = PotentialKind::newtonian;
  c.bodies.push_back({1.0, Vec3(0, 0, 0), Vec3::Zero()});
  c.bodies.push_back({1.0, Vec3(1, 0, 0), Vec3::Zero()});
  const auto u = newtonian_potential(c);
  // Both ordered pairs count.
  EXPECT_DOUBLE_EQ(u.value, 2.0);
  EXPECT_LE((u.gradients[0] - Vec3(2, 0, 0)).norm(), 1e-15);
  EXPECT_LE((u.gradients[1] + u.gradients[0]).norm(), 1e-15);
  const auto fd = numeric_gradient(c, 1e-6);
  EXPECT_LE((fd[0] - u.gradients[0]).norm(), 1e-6);
  Configuration one = c;
  one.bodies.pop_back();
  EXPECT_EQ(newtonian_potential(one).value, 0.0);
  EXPECT_EQ(newtonian_potential(one).gradients[0], Vec3::Zero());
}

TEST(Newtonian, EquilateralPointsAtCentroid) {
  Configuration c;
  c.space = Space::flat;
  c.potential = PotentialKind::newtonian;
  const Vec3 shift(0.2, -0.4, 1.0);
  for (int k = 0; k < 3; ++k) {
    const double a = 2 * std::numbers::pi * k / 3;
    c.bodies.push_back({1.0, shift + Vec3(std::cos(a), std::sin(a), 0), Vec3::Zero()});
  }
  const auto u = newtonian_potential(c);
  for (std::size_t i = 0; i < 3; ++i) {
    const Vec3 to_centroid = (shift - c.bodies[i].position).normalized();
    EXPECT_NEAR(u.gradients[i].normalized().dot(to_centroid), 1.0, 1e-14);
  }
  const auto fd = numeric_gradient(c, 1e-6);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LE((fd[i] - u.gradients[i]).norm(), 1e-6);
}

TEST(So3Invariance, SphereAndFlat) {
  const Configuration two = sphere_config({{0.4, 0.0}, {2.0, 1.5}}, 2, 0.0);
  EXPECT_LE(so3_invariance_residual(two).norm(), 1e-12);
  const Configuration five = sphere_config({{0.3, 0.1}, {1.2, 2.0}, {2.1, -1.0}, {1.6, 4.0}, {0.9, 3.0}}, 3, 0.0);
  EXPECT_LE(so3_invariance_residual(five).norm(), 1e-10);
  Configuration flat;
  flat.space = Space::flat;
  flat.potential = PotentialKind::newtonian;
  flat.bodies = {{1.0, Vec3(0.3, 1, -2), Vec3::Zero()}, {2.0, Vec3(-1, 0.5, 0.1), Vec3::Zero()},
                 {0.5, Vec3(2, 2, 1), Vec3::Zero()}};
  EXPECT_LE(so3_invariance_residual(flat).norm(), 1e-10);
}

TEST(LagrangeMultiplier, Examples) {
  const Body rest{1.0, Vec3(0, 0, 1), Vec3::Zero()};
  EXPECT_EQ(lagrange_multiplier(rest, 1.0, Vec3(1, 2, 0)), 0.0);
  EXPECT_DOUBLE_EQ(lagrange_multiplier(rest, 1.0, 3.0 * rest.position), -1.5);
}

TEST(Acceleration, KeepsSecondDerivativeOfRadiusZero) {
  Configuration c = sphere_config({{0.3, 0.1}, {1.2, 2.0}, {2.1, -1.0}}, 4, 0.8);
  c.potential = PotentialKind::newtonian;
  c.radii = {1.0, 1.0, 1.0};
  for (auto kind : {PotentialKind::cotangent, PotentialKind::newtonian}) {
    c.potential = kind;
    const auto a = acceleration(c);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto& b = c.bodies[i];
      EXPECT_NEAR(2 * b.velocity.squaredNorm() + 2 * b.position.dot(a[i]), 0.0, 1e-12);
    }
  }
}

TEST(Acceleration, SingleBodyAtRest) {
  Configuration c;
  c.bodies.push_back({1.0, on_sphere(0.7, 0.2), Vec3::Zero()});
  EXPECT_LE(acceleration(c)[0].norm(), 0.0);
}

TEST(Acceleration, UniformRotationAtRelativeEquilibrium) {
  Configuration t;
  t.bodies = {{1.0, on_sphere(std::numbers::pi / 4, 0.0), Vec3::Zero()},
              {1.0, on_sphere(std::numbers::pi / 4, std::numbers::pi), Vec3::Zero()}};
  const auto re = rigidre::analysis::find_relative_equilibrium(t, Vec3::UnitZ(), 0.1, 10.0);
  const Vec3 w = re.omega * Vec3::UnitZ();
  const auto a = acceleration(re.configuration);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LE((a[i] - w.cross(w.cross(re.configuration.bodies[i].position))).norm(), 1e-9);
  }
}

Configuration lagrange_triangle(double m, double side) {
  Configuration c;
  c.space = Space::flat;
  c.potential = PotentialKind::newtonian;
  const double radius = side / std::sqrt(3.0);
  const double w = std::sqrt(6.0 * m / (side * side * side));
  for (int k = 0; k < 3; ++k) {
    const double a = 2 * std::numbers::pi * k / 3;
    const Vec3 q = radius * Vec3(std::cos(a), std::sin(a), 0);
    c.bodies.push_back({m, q, (w * Vec3::UnitZ()).cross(q)});
  }
  return c;
}

TEST(Acceleration, FlatLagrangeIsCentripetal) {
  const Configuration c = lagrange_triangle(0.3, 1.7);
  const double w = std::sqrt(6.0 * 0.3 / std::pow(1.7, 3));
  const auto a = acceleration(c);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LE((a[i] + w * w * c.bodies[i].position).norm(), 1e-14);
}

TEST(Integrate, MirrorSymmetryOfRestingPair) {
  Configuration c;
  c.bodies = {{1.0, on_sphere(1.0, 0.0), Vec3::Zero()}, {1.0, on_sphere(1.0, std::numbers::pi), Vec3::Zero()}};
  const auto run = integrate(c, 1e-3, 500);
  ASSERT_FALSE(run.abort);
  const Eigen::DiagonalMatrix<double, 3> mirror(-1, 1, 1);
  for (const auto& s : run.trajectory.states) {
    EXPECT_LE((mirror * s.bodies[0].position - s.bodies[1].position).norm(), 1e-9);
    EXPECT_LE((mirror * s.bodies[0].velocity - s.bodies[1].velocity).norm(), 1e-9);
  }
}

// Light bodies near a latitude ring, moving roughly with the ring. Heavier
// or slower bodies end in close encounters that fixed-step RK4 cannot resolve.
Configuration light_ring(int n, double mass, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  Configuration c;
  for (int k = 0; k < n; ++k) {
    const double lon = 2 * std::numbers::pi * k / n + u(rng);
    const double colat = 1.0 + u(rng);
    const Vec3 q = on_sphere(colat, lon);
    const Vec3 v = tangent(q, Vec3::UnitZ().cross(q) + 0.1 * Vec3(g(rng), g(rng), g(rng)));
    c.bodies.push_back({mass * (1 + 0.3 * k), q, v});
  }
  return c;
}

TEST(Integrate, ConservationGenericThreeBody) {
  const Configuration c = light_ring(3, 0.02, 5);
  const auto run = integrate(c, 1e-3, 10000);
  ASSERT_FALSE(run.abort);
  const auto first = conserved(c);
  double de = 0.0, dc = 0.0, radial = 0.0;
  for (const auto& s : run.trajectory.states) {
    const auto now = conserved(s);
    de = std::max(de, std::abs(now.total - first.total));
    dc = std::max(dc, (now.angular_momentum - first.angular_momentum).norm());
    for (const auto& b : s.bodies) radial = std::max(radial, std::abs(b.position.norm() - 1.0));
  }
  EXPECT_LE(de, 1e-9 * std::abs(first.total));
  EXPECT_LE(dc, 1e-9 * first.angular_momentum.norm());
  EXPECT_LE(radial, 1e-9);
}

TEST(Integrate, RelativeEquilibriumKeepsDistances) {
  Configuration t;
  t.bodies = {{1.0, on_sphere(std::numbers::pi / 4, 0.0), Vec3::Zero()},
              {1.0, on_sphere(std::numbers::pi / 4, std::numbers::pi), Vec3::Zero()}};
  const auto re = rigidre::analysis::find_relative_equilibrium(t, Vec3::UnitZ(), 0.1, 10.0);
  const auto run = integrate(re.configuration, 1e-3, 10000);
  const double d0 = (re.configuration.bodies[0].position - re.configuration.bodies[1].position).norm();
  for (const auto& s : run.trajectory.states) {
    EXPECT_NEAR((s.bodies[0].position - s.bodies[1].position).norm(), d0, 1e-8);
  }
}

TEST(Integrate, SingularStartAborts) {
  Configuration c;
  c.bodies = {{1.0, Vec3(0, 0, 1), Vec3::Zero()}, {1.0, Vec3(0, 0, 1), Vec3::Zero()}};
  const auto run = integrate(c, 1e-3, 10);
  ASSERT_TRUE(run.abort.has_value());
  EXPECT_EQ(run.trajectory.size(), 1u);
}

TEST(Integrate, RejectsBadStep) {
  Configuration c;
  c.bodies = {{1.0, Vec3(0, 0, 1), Vec3::Zero()}};
  EXPECT_THROW(integrate(c, 0.0, 10), rigidre::ConfigInvalid);
  EXPECT_THROW(integrate(c, 1e-3, 0), rigidre::ConfigInvalid);
}

TEST(Conserved, RestAndRigidRotation) {
  Configuration c = sphere_config({{0.5, 0.0}, {1.5, 2.2}, {2.3, 4.3}}, 6, 0.0);
  auto s = conserved(c);
  EXPECT_EQ(s.kinetic, 0.0);
  EXPECT_EQ(s.angular_momentum, Vec3::Zero());
  const Vec3 w(0.3, -0.5, 0.8);
  for (auto& b : c.bodies) b.velocity = w.cross(b.position);
  s = conserved(c);
  const Eigen::Matrix3d inertia = rigidre::rigidbody::inertia_tensor(c).matrix;
  EXPECT_NEAR(s.kinetic, 0.5 * w.dot(inertia * w), 1e-14);
  EXPECT_LE((s.angular_momentum - inertia * w).norm(), 1e-14);
}

TEST(Conserved, FlatCircularOrbit) {
  Configuration c;
  c.space = Space::flat;
  c.potential = PotentialKind::newtonian;
  c.bodies = {{1.0, Vec3(0.5, 0, 0), Vec3(0, 1, 0)}, {1.0, Vec3(-0.5, 0, 0), Vec3(0, -1, 0)}};
  const auto run = integrate(c, 1e-3, 5000);
  const double c0 = conserved(c).angular_momentum.norm();
  for (const auto& st : run.trajectory.states) {
    EXPECT_NEAR(conserved(st).angular_momentum.norm(), c0, 1e-9);
    EXPECT_NEAR((st.bodies[0].position - st.bodies[1].position).norm(), 1.0, 1e-9);
  }
}

TEST(Validate, Rejections) {
  Configuration c;
  EXPECT_THROW(validate(c), rigidre::ConfigInvalid);
  c.bodies = {{1.0, Vec3(0, 0, 1.1), Vec3::Zero()}};
  EXPECT_THROW(validate(c), rigidre::ConfigInvalid);
  c.bodies = {{1.0, Vec3(0, 0, 1), Vec3(0, 0, 1)}};
  EXPECT_THROW(validate(c), rigidre::ConfigInvalid);
  c.bodies = {{-1.0, Vec3(0, 0, 1), Vec3::Zero()}};
  EXPECT_THROW(validate(c), rigidre::ConfigInvalid);
  c.bodies = {{1.0, Vec3(0, 0, 2), Vec3::Zero()}};
  c.radii = {2.0};
  EXPECT_THROW(validate(c), rigidre::ConfigInvalid);  // cotangent needs unit radii
  c.potential = PotentialKind::newtonian;
  EXPECT_NO_THROW(validate(c));
  c.space = Space::flat;
  c.potential = PotentialKind::cotangent;
  EXPECT_THROW(validate(c), rigidre::ConfigInvalid);
}

TEST(Rotated, CommutesWithIntegration) {
  const Configuration c = sphere_config({{0.5, 0.0}, {1.5, 2.2}, {2.3, 4.3}}, 7, 0.4);
  const Eigen::Matrix3d r = rigidre::geom3::rodrigues<double>(Vec3(0.3, 0.2, -0.9)).matrix();
  const auto a = integrate(rotated(c, r), 1e-3, 500).trajectory.states.back();
  const auto b = rotated(integrate(c, 1e-3, 500).trajectory.states.back(), r);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LE((a.bodies[i].position - b.bodies[i].position).norm(), 1e-12);
}

}  // namespace
