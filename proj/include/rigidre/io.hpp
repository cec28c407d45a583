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

// JSON and CSV serialization. Doubles are written with 17 significant
// digits so every value round-trips exactly.

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rigidre/dynamics.hpp"
#include "rigidre/rigidbody.hpp"

namespace rigidre::io {

using nlohmann::json;

/// "%.17g" formatting of a double.
std::string format_double(double v);

json to_json(const dynamics::Configuration& c);
/// Throws ConfigInvalid on missing or malformed fields.
dynamics::Configuration configuration_from_json(const json& j);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);
dynamics::Configuration read_configuration(const std::filesystem::path& path);
void write_configuration(const std::filesystem::path& path, const dynamics::Configuration& c);

/// Comma-separated rows with LF endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
};

/// time, then x,y,z,vx,vy,vz per body.
void write_trajectory_csv(std::ostream& out, const dynamics::Trajectory& traj);
/// time, kinetic, potential, energy, cx, cy, cz.
void write_conserved_csv(std::ostream& out, const dynamics::Trajectory& traj);

/// Opens `path` for writing; throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace rigidre::io
