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

#include "orbitmap/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace orbitmap::cli {

namespace {

// Keys without a default are optional and absent unless set.
const std::vector<std::pair<std::string, std::optional<std::string>>>& key_table() {
  static const std::vector<std::pair<std::string, std::optional<std::string>>> table = {
      {"seed", "1"},
      {"out", "out"},
      {"group.kind", "sign_flip"},
      {"group.d", std::nullopt},
      {"group.r", std::nullopt},
      {"group.k", std::nullopt},
      {"group.matrices", std::nullopt},
      {"model", "lmf"},
      {"model.file", std::nullopt},
      {"poly.family", std::nullopt},
      {"train.m", "16"},
      {"train.n", "16"},
      {"train.steps", "2000"},
      {"train.learning_rate", "0.01"},
      {"train.restarts", "10"},
      {"train.batch_pairs", "0"},
      {"train.augmentation_samples", "16"},
      {"data.train_size", "500"},
      {"data.test_size", "2000"},
      {"rmf.draws", "2000"},
      {"table.scale", "0.1"},
      {"verify.n_quad", "4096"},
      {"verify.samples", "1000"},
      {"shapes.input", std::nullopt},
      {"shapes.format", "csv"},
      {"shapes.k", "32"},
      {"shapes.count", "200"},
      {"shapes.scale", "raw"},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_integer(const std::string& key, const std::string& v) {
  T out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ParseError("config key '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

}  // namespace

const std::vector<std::string>& ExperimentConfig::known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, def] : key_table()) k.push_back(name);
    return k;
  }();
  return keys;
}

ExperimentConfig::ExperimentConfig() {
  for (const auto& [name, def] : key_table()) {
    if (def) values_[name] = *def;
  }
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> seen;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (const auto it = seen.find(key); it != seen.end()) {
      throw ParseError("config key '" + key + "' repeated on lines " + std::to_string(it->second) +
                       " and " + std::to_string(line_no));
    }
    seen[key] = line_no;
    cfg.set(key, trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ParseError("unknown config key '" + key + "'");
  }
  values_[key] = value;
}

void ExperimentConfig::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ParseError("expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

bool ExperimentConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string ExperimentConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ParseError("config key '" + key + "' is not set");
  return it->second;
}

int ExperimentConfig::get_int(const std::string& key) const {
  return parse_integer<int>(key, get(key));
}

std::uint64_t ExperimentConfig::get_u64(const std::string& key) const {
  return parse_integer<std::uint64_t>(key, get(key));
}

double ExperimentConfig::get_double(const std::string& key) const {
  const std::string v = get(key);
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ParseError("config key '" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

GroupSpec ExperimentConfig::group() const {
  std::map<std::string, std::string> params;
  for (const char* p : {"d", "r", "k", "matrices"}) {
    const std::string key = std::string("group.") + p;
    if (has(key)) params[p] = get(key);
  }
  return group_from_params(get("group.kind"), params);
}

TrainConfig ExperimentConfig::train_config() const {
  TrainConfig c;
  const std::string model = get("model");
  c.arch = architecture_from_string(model);
  c.m = get_int("train.m");
  c.n = get_int("train.n");
  c.steps = get_int("train.steps");
  c.learning_rate = get_double("train.learning_rate");
  c.restarts = get_int("train.restarts");
  c.seed = seed();
  c.batch_pairs = get_u64("train.batch_pairs");
  c.augmentation_samples = get_int("train.augmentation_samples");
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("invalid training settings: ") + e.what());
  }
  return c;
}

Json ExperimentConfig::to_json() const {
  Json out = Json::object();
  for (const auto& [k, v] : values_) out[k] = v;
  return out;
}

std::string ExperimentConfig::render() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

}  // namespace orbitmap::cli
