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

#include "rigidre/dynamics.hpp"

#include <cmath>
#include <string>

namespace rigidre::dynamics {

void validate(const Configuration& c, double tol) {
  if (c.bodies.empty()) throw ConfigInvalid("configuration has no bodies");
  if (!c.radii.empty() && c.radii.size() != c.bodies.size()) {
    throw ConfigInvalid("radii count does not match body count");
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Body& b = c.bodies[i];
    if (!(b.mass > 0.0) || !std::isfinite(b.mass)) {
      throw ConfigInvalid("body " + std::to_string(i) + " has non-positive mass");
    }
    if (!b.position.allFinite() || !b.velocity.allFinite()) {
      throw ConfigInvalid("body " + std::to_string(i) + " has non-finite state");
    }
    if (c.space == Space::sphere) {
      const double r = c.radius(i);
      if (!(r > 0.0)) throw ConfigInvalid("body " + std::to_string(i) + " has non-positive radius");
      if (std::abs(b.position.norm() - r) > tol) {
        throw ConfigInvalid("body " + std::to_string(i) + " is off its sphere");
      }
      if (std::abs(b.position.dot(b.velocity)) > tol) {
        throw ConfigInvalid("body " + std::to_string(i) + " has a radial velocity component");
      }
    }
  }
  if (c.potential == PotentialKind::cotangent) {
    if (c.space != Space::sphere) throw ConfigInvalid("cotangent potential requires sphere mode");
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (std::abs(c.radius(i) - 1.0) > 1e-12) throw ConfigInvalid("cotangent potential requires unit radii");
    }
  }
}

PotentialValue cotangent_potential(const Configuration& c, double guard) {
  const std::size_t n = c.size();
  PotentialValue out{0.0, std::vector<Vec3>(n, Vec3::Zero())};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec3& qi = c.bodies[i].position;
      const Vec3& qj = c.bodies[j].position;
      const double normalized = qi.dot(qj) / (c.radius(i) * c.radius(j));
      if (1.0 - normalized * normalized < guard) throw SingularPair(i, j);
      const double d = qi.dot(qj);
      const double s2 = 1.0 - d * d;
      const double mm = c.bodies[i].mass * c.bodies[j].mass;
      // Ordered pairs (i,j) and (j,i) both contribute.
      out.value += 2.0 * mm * d / std::sqrt(s2);
      const double dcot = 2.0 * mm / (s2 * std::sqrt(s2));
      out.gradients[i] += dcot * qj;
      out.gradients[j] += dcot * qi;
    }
  }
  return out;
}

PotentialValue newtonian_potential(const Configuration& c, double guard) {
  const std::size_t n = c.size();
  PotentialValue out{0.0, std::vector<Vec3>(n, Vec3::Zero())};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec3 diff = c.bodies[i].position - c.bodies[j].position;
      const double r = diff.norm();
      if (r < guard) throw SingularPair(i, j);
      const double mm = c.bodies[i].mass * c.bodies[j].mass;
      out.value += 2.0 * mm / r;
      const Vec3 g = (-2.0 * mm / (r * r * r)) * diff;
      out.gradients[i] += g;
      out.gradients[j] -= g;
    }
  }
  return out;
}

PotentialValue potential(const Configuration& c) {
  switch (c.potential) {
    case PotentialKind::cotangent:
      return cotangent_potential(c);
    case PotentialKind::newtonian:
      return newtonian_potential(c);
  }
  return {};
}

Vec3 so3_invariance_residual(const Configuration& c) {
  const PotentialValue u = potential(c);
  Vec3 sum = Vec3::Zero();
  for (std::size_t i = 0; i < c.size(); ++i) sum += c.bodies[i].position.cross(u.gradients[i]);
  return sum;
}

double lagrange_multiplier(const Body& b, double radius, const Vec3& grad) {
  return -(b.mass * b.velocity.squaredNorm() + b.position.dot(grad)) / (2.0 * radius * radius);
}

std::vector<Vec3> acceleration(const Configuration& c) {
  const PotentialValue u = potential(c);
  std::vector<Vec3> acc(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Body& b = c.bodies[i];
    Vec3 force = u.gradients[i];
    if (c.space == Space::sphere) {
      force += 2.0 * lagrange_multiplier(b, c.radius(i), u.gradients[i]) * b.position;
    }
    acc[i] = force / b.mass;
  }
  return acc;
}

ConservedSet conserved(const Configuration& c) {
  ConservedSet out;
  for (const Body& b : c.bodies) {
    out.kinetic += 0.5 * b.mass * b.velocity.squaredNorm();
    out.angular_momentum += b.mass * b.position.cross(b.velocity);
  }
  out.potential = potential(c).value;
  out.total = out.kinetic - out.potential;
  return out;
}

namespace {

struct Derivative {
  std::vector<Vec3> dq;
  std::vector<Vec3> dv;
};

Derivative evaluate(const Configuration& c) {
  Derivative d;
  d.dq.reserve(c.size());
  for (const Body& b : c.bodies) d.dq.push_back(b.velocity);
  d.dv = acceleration(c);
  return d;
}

Configuration advanced(const Configuration& base, const Derivative& d, double h) {
  Configuration out = base;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.bodies[i].position += h * d.dq[i];
    out.bodies[i].velocity += h * d.dv[i];
  }
  return out;
}

void project_onto_spheres(Configuration& c) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    Body& b = c.bodies[i];
    const double r = c.radius(i);
    b.position *= r / b.position.norm();
    b.velocity -= (b.position.dot(b.velocity) / (r * r)) * b.position;
  }
}

Configuration rk4_step(const Configuration& c, double dt) {
  const Derivative k1 = evaluate(c);
  const Derivative k2 = evaluate(advanced(c, k1, dt / 2));
  const Derivative k3 = evaluate(advanced(c, k2, dt / 2));
  const Derivative k4 = evaluate(advanced(c, k3, dt));
  Configuration out = c;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.bodies[i].position += (dt / 6) * (k1.dq[i] + 2 * k2.dq[i] + 2 * k3.dq[i] + k4.dq[i]);
    out.bodies[i].velocity += (dt / 6) * (k1.dv[i] + 2 * k2.dv[i] + 2 * k3.dv[i] + k4.dv[i]);
  }
  if (out.space == Space::sphere) project_onto_spheres(out);
  return out;
}

}  // namespace

IntegrationResult integrate(const Configuration& c, double dt, int steps) {
  if (!(dt > 0.0)) throw ConfigInvalid("dt must be positive");
  if (steps < 1) throw ConfigInvalid("steps must be at least 1");
  IntegrationResult result;
  Trajectory& traj = result.trajectory;
  traj.times.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(c);
  try {
    for (int s = 1; s <= steps; ++s) {
      traj.states.push_back(rk4_step(traj.states.back(), dt));
      traj.times.push_back(s * dt);
    }
  } catch (const SingularPair& e) {
    result.abort = e;
  }
  return result;
}

Configuration rotated(const Configuration& c, const Mat3& r) {
  Configuration out = c;
  for (Body& b : out.bodies) {
    b.position = r * b.position;
    b.velocity = r * b.velocity;
  }
  return out;
}

}  // namespace rigidre::dynamics
