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

#ifndef ORBITMAP_CLI_CONFIG_HPP_
#define ORBITMAP_CLI_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbitmap/groups.hpp"
#include "orbitmap/serialization.hpp"
#include "orbitmap/training.hpp"

namespace orbitmap::cli {

/// Experiment settings as a flat key-value record.
///
/// The file format is one `key = value` per line with `#` comments. Every key
/// has a default; unknown keys are rejected by name.
class ExperimentConfig {
 public:
  ExperimentConfig();

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  /// Sets one key, rejecting unknown names.
  void set(const std::string& key, const std::string& value);
  /// Applies "key=value".
  void set_assignment(const std::string& assignment);

  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  double get_double(const std::string& key) const;

  GroupSpec group() const;
  TrainConfig train_config() const;
  std::uint64_t seed() const { return get_u64("seed"); }

  const std::map<std::string, std::string>& values() const { return values_; }
  Json to_json() const;
  /// The config in file syntax; parse(render()) reproduces it.
  std::string render() const;

  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace orbitmap::cli

#endif  // ORBITMAP_CLI_CONFIG_HPP_
