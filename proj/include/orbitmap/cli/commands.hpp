// Copyright 2026 The orbitmap Authors.
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

#ifndef ORBITMAP_CLI_COMMANDS_HPP_
#define ORBITMAP_CLI_COMMANDS_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "orbitmap/cli/config.hpp"
#include "orbitmap/embeddings.hpp"

namespace orbitmap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

struct OutputFile {
  std::string name;
  std::string content;
};

/// Everything a command produces. Files are only written once the command has
/// finished, each through a temporary file and a rename.
struct CommandResult {
  int exit_code = kExitOk;
  std::string summary;  // printed to stdout
  std::vector<OutputFile> files;
};

CommandResult cmd_distortion(const ExperimentConfig& cfg);
CommandResult cmd_train(const ExperimentConfig& cfg);
CommandResult cmd_table(const ExperimentConfig& cfg, int table_id);
CommandResult cmd_verify(const ExperimentConfig& cfg, const std::string& check);
CommandResult cmd_shapes(const ExperimentConfig& cfg, const std::string& subcommand);

const std::vector<std::string>& verify_checks();

/// Writes every file into dir (created if needed) via temp-file rename.
void commit_outputs(const std::string& dir, const std::vector<OutputFile>& files);

/// Standard Gaussian points (columns) for the group's ambient space.
PointSet gaussian_points(const GroupSpec& group, std::size_t n, std::uint64_t seed,
                         std::string_view stream);

/// The invariant polynomial family matching a group kind.
PolyRow default_poly_row(const GroupSpec& group);

/// Entry point behind the `orbitmap` executable; returns the exit code.
int run(int argc, char** argv);

}  // namespace orbitmap::cli

#endif  // ORBITMAP_CLI_COMMANDS_HPP_
