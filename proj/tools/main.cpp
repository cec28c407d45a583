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

#include <CLI11.hpp>

#include <iostream>

#include "rigidre/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"rigidre: rigid motions and relative equilibria of point masses on spheres"};
  std::string mode;
  std::string config;
  std::string out = "out";
  bool quiet = false;
  app.add_option("mode", mode, "simulate | euler-flow | classify | verify-theorem | find-re | contours")
      ->required();
  app.add_option("--config", config, "JSON run configuration")->required();
  app.add_option("--out", out, "output path prefix");
  app.add_flag("--quiet", quiet, "suppress the summary on stdout");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rigidre::cli::kConfigInvalid;
  }

  try {
    const rigidre::cli::RunConfig rc =
        rigidre::cli::load_run_config(rigidre::cli::parse_mode(mode), config, out, quiet);
    return rigidre::cli::run(rc, std::cout, std::cerr);
  } catch (const rigidre::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rigidre::cli::kIoError;
  } catch (const rigidre::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rigidre::cli::kConfigInvalid;
  }
}
