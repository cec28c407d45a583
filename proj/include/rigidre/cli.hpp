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

// Command-line driver. A run reads one JSON document, performs one
// experiment and writes CSV/JSON artifacts next to an output prefix.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rigidre/io.hpp"

namespace rigidre::cli {

enum class Mode { simulate, euler_flow, classify, verify_theorem, find_re, contours };

/// Throws ConfigInvalid for an unknown name.
Mode parse_mode(const std::string& name);

struct RunConfig {
  Mode mode{Mode::simulate};
  io::json params;
  /// Directory relative configuration paths are resolved against.
  std::filesystem::path base_dir;
  std::string out_prefix{"out"};
  bool quiet{false};
};

/// Reads `config_path` into a RunConfig.
RunConfig load_run_config(Mode mode, const std::filesystem::path& config_path, const std::string& out_prefix,
                          bool quiet);

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigInvalid = 2, kSingular = 3, kIoError = 4 };

/// Runs one experiment. Human-readable summaries go to `out` unless quiet;
/// diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

struct ContourPoint {
  std::string kind;  // "curve", "separatrix" or "fixed"
  double C2{0.0};
  double k2{0.0};
  int branch{0};
  int sample{0};
  Eigen::Vector3d omega{Eigen::Vector3d::Zero()};
};

/// Level curves of |C|² on the energy ellipsoid Σ I_α Ω_α² = 2K, one polyline
/// per branch for every level, plus the six fixed points on the axes. Levels
/// on 2K I_x or 2K I_z collapse to the corresponding fixed points.
std::vector<ContourPoint> emit_contours(const Eigen::Vector3d& moments, double twoK, std::span<const double> levels,
                                        int samples);

void write_contours_csv(std::ostream& out, std::span<const ContourPoint> points);

}  // namespace rigidre::cli
