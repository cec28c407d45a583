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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rigidre {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotAntiSymmetric : public Error {
 public:
  explicit NotAntiSymmetric(double residual)
      : Error("matrix is not anti-symmetric (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class NotSymmetric : public Error {
 public:
  explicit NotSymmetric(double residual)
      : Error("matrix is not symmetric (residual " + std::to_string(residual) + ")") {}
};

class NotARotation : public Error {
 public:
  using Error::Error;
};

class ModulusOutOfRange : public Error {
 public:
  explicit ModulusOutOfRange(double k2)
      : Error("elliptic modulus k^2 = " + std::to_string(k2) + " is out of range"), k2_(k2) {}
  double k2() const { return k2_; }

 private:
  double k2_;
};

/// Two bodies are coincident or (on the sphere) antipodal.
class SingularPair : public Error {
 public:
  SingularPair(std::size_t i, std::size_t j)
      : Error("singular pair (" + std::to_string(i) + ", " + std::to_string(j) + ")"), i_(i), j_(j) {}
  std::size_t first() const { return i_; }
  std::size_t second() const { return j_; }

 private:
  std::size_t i_;
  std::size_t j_;
};

class ZeroInertiaAxis : public Error {
 public:
  ZeroInertiaAxis() : Error("inertia tensor has a zero principal moment") {}
};

class NotAsymmetric : public Error {
 public:
  NotAsymmetric() : Error("principal moments are not strictly ordered I_x < I_y < I_z") {}
};

class BoundaryCase : public Error {
 public:
  BoundaryCase() : Error("|C|^2 lies on the boundary 2K*I_x or 2K*I_z") {}
};

class DegenerateInertia : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class NoRootInRange : public Error {
 public:
  NoRootInRange(double lo, double hi)
      : Error("no relative equilibrium in omega range [" + std::to_string(lo) + ", " +
              std::to_string(hi) + "]") {}
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rigidre
