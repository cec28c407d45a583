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

#include "rigidre/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rigidre::io {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json vec_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw ConfigInvalid(std::string(what) + " must be an array of 3 numbers");
  Eigen::Vector3d v;
  for (int k = 0; k < 3; ++k) {
    if (!j[static_cast<std::size_t>(k)].is_number()) throw ConfigInvalid(std::string(what) + " must be numeric");
    v(k) = j[static_cast<std::size_t>(k)].get<double>();
  }
  return v;
}

}  // namespace

json to_json(const dynamics::Configuration& c) {
  json j;
  j["space"] = c.space == dynamics::Space::sphere ? "sphere" : "flat";
  j["potential"] = c.potential == dynamics::PotentialKind::cotangent ? "cotangent" : "newtonian";
  j["bodies"] = json::array();
  for (const auto& b : c.bodies) {
    j["bodies"].push_back({{"mass", b.mass}, {"position", vec_json(b.position)}, {"velocity", vec_json(b.velocity)}});
  }
  if (!c.radii.empty()) j["radii"] = c.radii;
  return j;
}

dynamics::Configuration configuration_from_json(const json& j) {
  if (!j.is_object()) throw ConfigInvalid("configuration must be a JSON object");
  dynamics::Configuration c;
  const std::string space = j.value("space", "sphere");
  if (space == "sphere") {
    c.space = dynamics::Space::sphere;
  } else if (space == "flat") {
    c.space = dynamics::Space::flat;
  } else {
    throw ConfigInvalid("unknown space '" + space + "'");
  }
  const std::string pot = j.value("potential", c.space == dynamics::Space::sphere ? "cotangent" : "newtonian");
  if (pot == "cotangent") {
    c.potential = dynamics::PotentialKind::cotangent;
  } else if (pot == "newtonian") {
    c.potential = dynamics::PotentialKind::newtonian;
  } else {
    throw ConfigInvalid("unknown potential '" + pot + "'");
  }
  if (!j.contains("bodies") || !j["bodies"].is_array()) throw ConfigInvalid("configuration needs a bodies array");
  for (const auto& jb : j["bodies"]) {
    dynamics::Body b;
    if (!jb.contains("mass") || !jb["mass"].is_number()) throw ConfigInvalid("body mass missing");
    b.mass = jb["mass"].get<double>();
    if (!jb.contains("position")) throw ConfigInvalid("body position missing");
    b.position = vec_from(jb["position"], "position");
    b.velocity = jb.contains("velocity") ? vec_from(jb["velocity"], "velocity") : Eigen::Vector3d::Zero();
    c.bodies.push_back(b);
  }
  if (j.contains("radii")) {
    if (!j["radii"].is_array()) throw ConfigInvalid("radii must be an array");
    for (const auto& r : j["radii"]) {
      if (!r.is_number()) throw ConfigInvalid("radii must be numeric");
      c.radii.push_back(r.get<double>());
    }
    if (c.radii.size() != c.bodies.size()) throw ConfigInvalid("radii count does not match body count");
  }
  return c;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigInvalid("'" + path.string() + "': " + e.what());
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out = open_output(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

dynamics::Configuration read_configuration(const std::filesystem::path& path) {
  return configuration_from_json(read_json(path));
}

void write_configuration(const std::filesystem::path& path, const dynamics::Configuration& c) {
  write_json(path, to_json(c));
}

void CsvWriter::header(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << names[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << '\n';
}

void write_trajectory_csv(std::ostream& out, const dynamics::Trajectory& traj) {
  CsvWriter w(out);
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  std::vector<std::string> names{"time"};
  for (std::size_t i = 0; i < n; ++i) {
    for (const char* f : {"x", "y", "z", "vx", "vy", "vz"}) names.push_back(f + std::to_string(i));
  }
  w.header(names);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    std::vector<double> row{traj.times[k]};
    for (const auto& b : traj.states[k].bodies) {
      row.insert(row.end(), {b.position.x(), b.position.y(), b.position.z(), b.velocity.x(), b.velocity.y(),
                             b.velocity.z()});
    }
    w.row(row);
  }
}

void write_conserved_csv(std::ostream& out, const dynamics::Trajectory& traj) {
  CsvWriter w(out);
  w.header({"time", "kinetic", "potential", "energy", "cx", "cy", "cz"});
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const dynamics::ConservedSet s = dynamics::conserved(traj.states[k]);
    w.row({traj.times[k], s.kinetic, s.potential, s.total, s.angular_momentum.x(), s.angular_momentum.y(),
           s.angular_momentum.z()});
  }
}

}  // namespace rigidre::io
