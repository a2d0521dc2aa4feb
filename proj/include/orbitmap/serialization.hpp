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

#ifndef ORBITMAP_SERIALIZATION_HPP_
#define ORBITMAP_SERIALIZATION_HPP_

#include <map>
#include <string>

#include "json.hpp"

#include "orbitmap/distortion.hpp"
#include "orbitmap/embeddings.hpp"
#include "orbitmap/filters.hpp"
#include "orbitmap/groups.hpp"

namespace orbitmap {

using Json = nlohmann::json;

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// {"kind": "sign_flip", "params": {"d": 3}}
Json to_json(const GroupSpec& group);
GroupSpec group_from_json(const Json& j);

/// Builds a group from key-value parameters as written in config files
/// (d, r, k; explicit groups take "matrices" holding a JSON array).
/// Unknown or missing parameters raise ParseError naming the key.
GroupSpec group_from_params(const std::string& kind,
                            const std::map<std::string, std::string>& params);

/// {"group": ..., "templates": [[...], ...]} with one row per template.
Json to_json(const FilterBank& bank);
FilterBank bank_from_json(const Json& j);

Json to_json(const PolyRow& row);
PolyRow poly_row_from_json(const Json& j);

/// Tagged record {"type": kind_name(), ...}.
Json to_json(const EmbeddingModel& model);
EmbeddingModel model_from_json(const Json& j);

Json to_json(const DistortionReport& report);

Json matrix_to_json(const MatrixRef& m);
Matrix matrix_from_json(const Json& j);

}  // namespace orbitmap

#endif  // ORBITMAP_SERIALIZATION_HPP_
