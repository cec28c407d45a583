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

#include "rigidre/cli.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "rigidre/analysis.hpp"
#include "rigidre/elliptic.hpp"
#include "rigidre/rigidbody.hpp"

namespace rigidre::cli {

using Vec3 = Eigen::Vector3d;
using io::json;

Mode parse_mode(const std::string& name) {
  if (name == "simulate") return Mode::simulate;
  if (name == "euler-flow") return Mode::euler_flow;
  if (name == "classify") return Mode::classify;
  if (name == "verify-theorem") return Mode::verify_theorem;
  if (name == "find-re") return Mode::find_re;
  if (name == "contours") return Mode::contours;
  throw ConfigInvalid("unknown mode '" + name + "'");
}

RunConfig load_run_config(Mode mode, const std::filesystem::path& config_path, const std::string& out_prefix,
                          bool quiet) {
  RunConfig rc;
  rc.mode = mode;
  rc.params = io::read_json(config_path);
  if (!rc.params.is_object()) throw ConfigInvalid("run config must be a JSON object");
  rc.base_dir = config_path.parent_path();
  rc.out_prefix = out_prefix;
  rc.quiet = quiet;
  return rc;
}

namespace {

double number(const json& p, const char* key) {
  if (!p.contains(key) || !p[key].is_number()) throw ConfigInvalid(std::string("missing numeric field '") + key + "'");
  return p[key].get<double>();
}

double number_or(const json& p, const char* key, double fallback) {
  return p.contains(key) ? number(p, key) : fallback;
}

Vec3 vector3(const json& p, const char* key) {
  if (!p.contains(key)) throw ConfigInvalid(std::string("missing field '") + key + "'");
  const json& v = p[key];
  if (!v.is_array() || v.size() != 3) throw ConfigInvalid(std::string("field '") + key + "' must be 3 numbers");
  Vec3 out;
  for (std::size_t k = 0; k < 3; ++k) {
    if (!v[k].is_number()) throw ConfigInvalid(std::string("field '") + key + "' must be numeric");
    out(static_cast<Eigen::Index>(k)) = v[k].get<double>();
  }
  return out;
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

// JSON has no infinity; non-finite values become null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double timestep(const json& p) {
  const double dt = number(p, "dt");
  if (!(dt > 0.0)) throw ConfigInvalid("dt must be positive");
  return dt;
}

int step_count(const json& p) {
  if (!p.contains("steps") || !p["steps"].is_number_integer()) throw ConfigInvalid("missing integer field 'steps'");
  const long long s = p["steps"].get<long long>();
  if (s < 1 || s > std::numeric_limits<int>::max()) throw ConfigInvalid("steps must be at least 1");
  return static_cast<int>(s);
}

json tolerances(const json& p) {
  if (!p.contains("tolerances")) return json::object();
  if (!p["tolerances"].is_object()) throw ConfigInvalid("tolerances must be an object");
  return p["tolerances"];
}

rigidbody::ClassifyTolerances classify_tolerances(const json& p) {
  const json t = tolerances(p);
  rigidbody::ClassifyTolerances tol;
  tol.eigen_gap = number_or(t, "eigen_gap", tol.eigen_gap);
  tol.boundary = number_or(t, "boundary", tol.boundary);
  tol.separatrix = number_or(t, "separatrix", tol.separatrix);
  return tol;
}

dynamics::Configuration configuration(const RunConfig& rc) {
  if (!rc.params.contains("configuration")) throw ConfigInvalid("missing field 'configuration'");
  const json& c = rc.params["configuration"];
  dynamics::Configuration out;
  if (c.is_string()) {
    std::filesystem::path path = c.get<std::string>();
    if (path.is_relative()) path = rc.base_dir / path;
    out = io::read_configuration(path);
  } else {
    out = io::configuration_from_json(c);
  }
  dynamics::validate(out);
  return out;
}

std::filesystem::path artifact(const RunConfig& rc, const std::string& suffix) {
  return rc.out_prefix + suffix;
}

Vec3 moments(const json& p) {
  const Vec3 m = vector3(p, "I");
  if (!(m.minCoeff() >= 0.0)) throw ConfigInvalid("moments of inertia must be nonnegative");
  return m;
}

json classification_json(const rigidbody::MotionClass& mc, const Vec3& I, double twoK, double C2) {
  const bool interior = mc.tag == rigidbody::MotionTag::AsymGeneric || mc.tag == rigidbody::MotionTag::AsymSeparatrix;
  return {{"tag", std::string(rigidbody::to_string(mc.tag))},
          {"I", vec_json(I)},
          {"twoK", twoK},
          {"C2", C2},
          {"k2", interior ? finite_or_null(mc.k2) : json(nullptr)}};
}

// Initial Ω from "omega", or the τ = 0 point of the closed form for
// ("twoK", "C2", optional "branch").
Vec3 initial_omega(const json& p, const Vec3& I, const rigidbody::ClassifyTolerances& tol) {
  if (p.contains("omega")) return vector3(p, "omega");
  const double twoK = number(p, "twoK");
  const double C2 = number(p, "C2");
  rigidbody::BranchSigns branch;
  if (p.contains("branch")) {
    const json& b = p["branch"];
    if (!b.is_array() || b.size() != 2 || !b[0].is_number_integer() || !b[1].is_number_integer()) {
      throw ConfigInvalid("branch must be two integers");
    }
    branch.x = b[0].get<int>() < 0 ? -1 : 1;
    branch.z = b[1].get<int>() < 0 ? -1 : 1;
  }
  return rigidbody::closed_form_omega(0.0, twoK, C2, I, branch, tol);
}

json verification_json(const analysis::VerificationReport& r, double re_tol) {
  json j;
  j["is_rigid"] = r.rigidity.is_rigid;
  j["max_distance_drift"] = r.rigidity.max_distance_drift;
  if (r.re_fit) {
    j["re_fit"] = {{"omega", vec_json(r.re_fit->omega)}, {"residual", r.re_fit->residual}};
  } else {
    j["re_fit"] = nullptr;
  }
  j["is_relative_equilibrium"] = r.re_fit.has_value() && r.re_fit->residual <= re_tol;
  j["classification"] = classification_json(r.classification, r.moments, r.integrals.twoK, r.integrals.C2);
  j["body_omega"] = vec_json(r.body_omega);
  if (r.gram_rank) {
    j["gram_rank"] = {{"rank", r.gram_rank->rank}, {"singular_values", r.gram_rank->singular_values}};
  } else {
    j["gram_rank"] = nullptr;
  }
  j["coefficient_checks"] = json::array();
  for (const auto& c : r.coefficient_checks) {
    j["coefficient_checks"].push_back({{"body", c.body},
                                       {"c_xy_third", c.c_xy_third},
                                       {"c_yy_third", c.c_yy_third},
                                       {"off_axis", c.off_axis},
                                       {"obstructed", c.obstructed}});
  }
  if (r.abort) {
    j["abort"] = {{"first", r.abort->first()}, {"second", r.abort->second()}};
  } else {
    j["abort"] = nullptr;
  }
  return j;
}

int run_simulate(const RunConfig& rc, std::ostream& out) {
  const dynamics::Configuration c = configuration(rc);
  const dynamics::IntegrationResult res = dynamics::integrate(c, timestep(rc.params), step_count(rc.params));
  {
    std::ofstream f = io::open_output(artifact(rc, "_trajectory.csv"));
    io::write_trajectory_csv(f, res.trajectory);
  }
  {
    std::ofstream f = io::open_output(artifact(rc, "_conserved.csv"));
    io::write_conserved_csv(f, res.trajectory);
  }
  if (!rc.quiet) {
    const auto first = dynamics::conserved(res.trajectory.states.front());
    const auto last = dynamics::conserved(res.trajectory.states.back());
    out << "samples " << res.trajectory.size() << "\n"
        << "energy drift " << io::format_double(last.total - first.total) << "\n"
        << "angular momentum drift "
        << io::format_double((last.angular_momentum - first.angular_momentum).norm()) << "\n";
  }
  if (res.abort) throw *res.abort;
  return kOk;
}

int run_euler_flow(const RunConfig& rc, std::ostream& out) {
  const json& p = rc.params;
  const Vec3 I = moments(p);
  const auto tol = classify_tolerances(p);
  const Vec3 w0 = initial_omega(p, I, tol);
  const double dt = timestep(p);
  const rigidbody::OmegaPath path = rigidbody::integrate_euler({w0, I}, dt, step_count(p));
  const rigidbody::EulerSolution exact(I, w0, tol);

  double worst = 0.0;
  {
    std::ofstream f = io::open_output(artifact(rc, "_omega.csv"));
    io::CsvWriter w(f);
    w.header({"time", "tau", "Ox", "Oy", "Oz", "twoK", "C2"});
    std::ofstream g = io::open_output(artifact(rc, "_comparison.csv"));
    io::CsvWriter cmp(g);
    cmp.header({"time", "tau", "Ox", "Oy", "Oz", "Ox_exact", "Oy_exact", "Oz_exact", "error"});
    for (std::size_t k = 0; k < path.size(); ++k) {
      const double t = path.time(k);
      const Vec3& v = path.samples[k];
      const auto fi = rigidbody::first_integrals({v, I});
      const Vec3 e = exact.omega(t);
      const double err = (v - e).cwiseAbs().maxCoeff();
      worst = std::max(worst, err);
      w.row({t, exact.tau(t), v.x(), v.y(), v.z(), fi.twoK, fi.C2});
      cmp.row({t, exact.tau(t), v.x(), v.y(), v.z(), e.x(), e.y(), e.z(), err});
    }
  }
  const auto fi = exact.integrals();
  io::write_json(artifact(rc, "_classification.json"), classification_json(exact.motion(), I, fi.twoK, fi.C2));
  if (!rc.quiet) {
    out << "class " << rigidbody::to_string(exact.motion().tag) << "\n"
        << "max closed-form error " << io::format_double(worst) << "\n";
  }
  return kOk;
}

int run_classify(const RunConfig& rc, std::ostream& out) {
  const json& p = rc.params;
  const Vec3 I = moments(p);
  const auto tol = classify_tolerances(p);
  double twoK = 0.0;
  double C2 = 0.0;
  Vec3 w = Vec3::Zero();
  if (p.contains("omega")) {
    w = vector3(p, "omega");
    const auto fi = rigidbody::first_integrals({w, I});
    twoK = fi.twoK;
    C2 = fi.C2;
  } else {
    twoK = number(p, "twoK");
    C2 = number(p, "C2");
  }
  const rigidbody::MotionClass mc = rigidbody::classify(twoK, C2, I, w, tol);
  const json j = classification_json(mc, I, twoK, C2);
  io::write_json(artifact(rc, "_classification.json"), j);
  if (!rc.quiet) out << j.dump() << "\n";
  return kOk;
}

int run_verify(const RunConfig& rc, std::ostream& out) {
  const json& p = rc.params;
  const dynamics::Configuration c = configuration(rc);
  const json t = tolerances(p);
  const double rigidity_tol = number_or(t, "rigidity", analysis::kRigidityTol);
  const double re_tol = number_or(t, "re_fit", 1e-7);
  const auto report = analysis::verify_theorem(c, timestep(p), step_count(p), rigidity_tol);
  const json j = verification_json(report, re_tol);
  io::write_json(artifact(rc, "_verification.json"), j);
  if (!rc.quiet) {
    out << "rigid " << (report.rigidity.is_rigid ? "true" : "false") << "\n"
        << "relative equilibrium " << (j["is_relative_equilibrium"].get<bool>() ? "true" : "false") << "\n";
  }
  if (report.abort) throw *report.abort;
  return kOk;
}

int run_find_re(const RunConfig& rc, std::ostream& out) {
  const json& p = rc.params;
  const dynamics::Configuration templ = configuration(rc);
  const Vec3 axis = p.contains("axis") ? vector3(p, "axis") : Vec3::UnitZ();
  if (!p.contains("omega_range") || !p["omega_range"].is_array() || p["omega_range"].size() != 2) {
    throw ConfigInvalid("omega_range must be [lo, hi]");
  }
  const double lo = p["omega_range"][0].get<double>();
  const double hi = p["omega_range"][1].get<double>();
  const analysis::RelativeEquilibrium re = analysis::find_relative_equilibrium(templ, axis, lo, hi);
  json j = {{"omega", re.omega}, {"residual", re.residual}, {"axis", vec_json(axis.normalized())},
            {"configuration", io::to_json(re.configuration)}};
  if (p.contains("steps")) {
    const json t = tolerances(p);
    const auto report = analysis::verify_theorem(re.configuration, timestep(p), step_count(p),
                                                 number_or(t, "rigidity", analysis::kRigidityTol));
    j["verification"] = verification_json(report, number_or(t, "re_fit", 1e-7));
  }
  io::write_json(artifact(rc, "_re.json"), j);
  io::write_configuration(artifact(rc, "_re_configuration.json"), re.configuration);
  if (!rc.quiet) {
    out << "omega " << io::format_double(re.omega) << "\n" << "residual " << io::format_double(re.residual) << "\n";
  }
  return kOk;
}

int run_contours(const RunConfig& rc, std::ostream& out) {
  const json& p = rc.params;
  const Vec3 I = moments(p);
  const double twoK = number(p, "twoK");
  std::vector<double> levels;
  if (!p.contains("levels")) throw ConfigInvalid("missing field 'levels'");
  if (p["levels"].is_number_integer()) {
    const int n = p["levels"].get<int>();
    if (n < 1) throw ConfigInvalid("levels must be positive");
    for (int k = 1; k <= n; ++k) levels.push_back(twoK * (I.x() + (I.z() - I.x()) * k / (n + 1.0)));
    levels.push_back(twoK * I.y());
  } else if (p["levels"].is_array()) {
    for (const auto& v : p["levels"]) {
      if (!v.is_number()) throw ConfigInvalid("levels must be numeric");
      levels.push_back(v.get<double>());
    }
  } else {
    throw ConfigInvalid("levels must be a count or an array of |C|^2 values");
  }
  const int samples = p.contains("samples") ? static_cast<int>(number(p, "samples")) : 200;
  const auto points = emit_contours(I, twoK, levels, samples);
  std::ofstream f = io::open_output(artifact(rc, "_contours.csv"));
  write_contours_csv(f, points);
  if (!rc.quiet) out << "points " << points.size() << "\n";
  return kOk;
}

}  // namespace

int run(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  try {
    switch (rc.mode) {
      case Mode::simulate:
        return run_simulate(rc, out);
      case Mode::euler_flow:
        return run_euler_flow(rc, out);
      case Mode::classify:
        return run_classify(rc, out);
      case Mode::verify_theorem:
        return run_verify(rc, out);
      case Mode::find_re:
        return run_find_re(rc, out);
      case Mode::contours:
        return run_contours(rc, out);
    }
  } catch (const SingularPair& e) {
    err << "error: " << e.what() << "\n";
    return kSingular;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigInvalid;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigInvalid;
  }
  return kFailure;
}

std::vector<ContourPoint> emit_contours(const Vec3& I, double twoK, std::span<const double> levels, int samples) {
  const double gap = 1e-9 * I.maxCoeff();
  if (!(I.x() > 0.0 && I.y() - I.x() > gap && I.z() - I.y() > gap)) throw NotAsymmetric();
  if (!(twoK > 0.0)) throw ConfigInvalid("twoK must be positive");
  if (samples < 2) throw ConfigInvalid("samples must be at least 2");
  const double inf = std::numeric_limits<double>::infinity();
  const Vec3 axis_value(std::sqrt(twoK / I.x()), std::sqrt(twoK / I.y()), std::sqrt(twoK / I.z()));
  const double band = 1e-10 * twoK * I.z();
  std::vector<ContourPoint> pts;
  auto fixed = [&](int axis, double C2, double k2) {
    for (int b = 0; b < 2; ++b) {
      Vec3 w = Vec3::Zero();
      w(axis) = b == 0 ? axis_value(axis) : -axis_value(axis);
      pts.push_back({"fixed", C2, k2, b, 0, w});
    }
  };

  for (const double C2 : levels) {
    if (std::abs(C2 - twoK * I.x()) <= band) {
      fixed(0, C2, inf);
      continue;
    }
    if (std::abs(C2 - twoK * I.z()) <= band) {
      fixed(2, C2, 0.0);
      continue;
    }
    if (C2 < twoK * I.x() || C2 > twoK * I.z()) throw ConfigInvalid("|C|^2 level outside [2K I_x, 2K I_z]");
    const double k2 = rigidbody::modulus_k2(twoK, C2, I);
    if (std::abs(k2 - 1.0) < 1e-9) {
      constexpr double span = 20.0;
      for (int b = 0; b < 4; ++b) {
        const rigidbody::BranchSigns sign{b & 2 ? -1 : 1, b & 1 ? -1 : 1};
        for (int s = 0; s < samples; ++s) {
          const double tau = -span + 2.0 * span * s / (samples - 1);
          pts.push_back({"separatrix", C2, k2, b, s, rigidbody::closed_form_omega(tau, twoK, C2, I, sign)});
        }
      }
      continue;
    }
    const double period = k2 < 1.0 ? 4.0 * elliptic::complete_K(k2)
                                   : 4.0 * elliptic::complete_K(1.0 / k2) / std::sqrt(k2);
    for (int b = 0; b < 2; ++b) {
      // The sign that selects one of the two closed curves.
      rigidbody::BranchSigns sign;
      (k2 < 1.0 ? sign.z : sign.x) = b == 0 ? 1 : -1;
      for (int s = 0; s < samples; ++s) {
        const double tau = period * s / (samples - 1);
        pts.push_back({"curve", C2, k2, b, s, rigidbody::closed_form_omega(tau, twoK, C2, I, sign)});
      }
    }
  }
  fixed(0, twoK * I.x(), inf);
  fixed(1, twoK * I.y(), 1.0);
  fixed(2, twoK * I.z(), 0.0);
  return pts;
}

void write_contours_csv(std::ostream& out, std::span<const ContourPoint> points) {
  out << "kind,C2,k2,branch,sample,Ox,Oy,Oz\n";
  for (const auto& p : points) {
    out << p.kind << ',' << io::format_double(p.C2) << ',' << io::format_double(p.k2) << ',' << p.branch << ','
        << p.sample << ',' << io::format_double(p.omega.x()) << ',' << io::format_double(p.omega.y()) << ','
        << io::format_double(p.omega.z()) << '\n';
  }
}

}  // namespace rigidre::cli
