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

#include "orbitmap/serialization.hpp"

#include <charconv>
#include <cmath>
#include <set>

namespace orbitmap {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

Json params_of(const GroupSpec& g) {
  switch (g.kind()) {
    case GroupKind::kPlanarRotation:
      return {{"r", g.order_param()}};
    case GroupKind::kOrthogonalTuple:
      return {{"d", g.dim()}, {"k", g.tuple_size()}};
    case GroupKind::kShapeGroup:
      return {{"k", g.tuple_size()}};
    case GroupKind::kExplicitFinite: {
      Json ms = Json::array();
      for (const Matrix& m : g.matrices()) ms.push_back(matrix_to_json(m));
      return {{"matrices", ms}};
    }
    default:
      return {{"d", g.dim()}};
  }
}

GroupSpec build_group(GroupKind kind, const Json& p) {
  switch (kind) {
    case GroupKind::kSignFlip: return GroupSpec::sign_flip(int_field(p, "d"));
    case GroupKind::kPlanarRotation: return GroupSpec::planar_rotation(int_field(p, "r"));
    case GroupKind::kPermutation: return GroupSpec::permutation(int_field(p, "d"));
    case GroupKind::kCyclicShift: return GroupSpec::cyclic_shift(int_field(p, "d"));
    case GroupKind::kPhaseCircle: return GroupSpec::phase_circle(int_field(p, "d"));
    case GroupKind::kOrthogonalTuple:
      return GroupSpec::orthogonal_tuple(int_field(p, "d"), int_field(p, "k"));
    case GroupKind::kShapeGroup: return GroupSpec::shape_group(int_field(p, "k"));
    case GroupKind::kHyperoctahedralSigns:
      return GroupSpec::hyperoctahedral_signs(int_field(p, "d"));
    case GroupKind::kExplicitFinite: {
      const Json& ms = field(p, "matrices");
      if (!ms.is_array()) throw ParseError("field 'matrices' must be an array");
      std::vector<Matrix> elements;
      for (const Json& m : ms) elements.push_back(matrix_from_json(m));
      return GroupSpec::explicit_finite(std::move(elements));
    }
  }
  throw ParseError("unknown group kind");
}

std::set<std::string> allowed_params(GroupKind kind) {
  switch (kind) {
    case GroupKind::kPlanarRotation: return {"r"};
    case GroupKind::kOrthogonalTuple: return {"d", "k"};
    case GroupKind::kShapeGroup: return {"k"};
    case GroupKind::kExplicitFinite: return {"matrices"};
    default: return {"d"};
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json matrix_to_json(const MatrixRef& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("matrix must be an array of rows");
  if (j.empty()) return Matrix(0, 0);
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ParseError("matrix rows differ in length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) throw ParseError("matrix entries must be numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
    }
  }
  return m;
}

Json to_json(const GroupSpec& group) {
  return {{"kind", to_string(group.kind())}, {"params", params_of(group)}};
}

GroupSpec group_from_json(const Json& j) {
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) throw ParseError("group kind must be a string");
  const GroupKind k = group_kind_from_string(kind.get<std::string>());
  const Json& params = field(j, "params");
  for (const auto& [key, value] : params.items()) {
    if (!allowed_params(k).count(key)) {
      throw ParseError("unknown parameter '" + key + "' for group " + kind.get<std::string>());
    }
  }
  return build_group(k, params);
}

GroupSpec group_from_params(const std::string& kind,
                            const std::map<std::string, std::string>& params) {
  const GroupKind k = group_kind_from_string(kind);
  const std::set<std::string> allowed = allowed_params(k);
  Json p = Json::object();
  for (const auto& [key, value] : params) {
    if (!allowed.count(key)) throw ParseError("unknown parameter '" + key + "' for group " + kind);
    if (key == "matrices") {
      try {
        p[key] = Json::parse(value);
      } catch (const Json::parse_error&) {
        throw ParseError("parameter 'matrices' is not a JSON array");
      }
      continue;
    }
    int v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
      throw ParseError("parameter '" + key + "' must be an integer, got '" + value + "'");
    }
    p[key] = v;
  }
  for (const std::string& key : allowed) {
    if (!p.contains(key)) throw ParseError("missing parameter '" + key + "' for group " + kind);
  }
  return build_group(k, p);
}

Json to_json(const FilterBank& bank) {
  return {{"group", to_json(bank.group())}, {"templates", matrix_to_json(bank.templates())}};
}

FilterBank bank_from_json(const Json& j) {
  return FilterBank(group_from_json(field(j, "group")), matrix_from_json(field(j, "templates")));
}

Json to_json(const PolyRow& row) {
  return {{"family", to_string(row.family)}, {"d", row.d}, {"k", row.k}};
}

PolyRow poly_row_from_json(const Json& j) {
  const Json& family = field(j, "family");
  if (!family.is_string()) throw ParseError("poly family must be a string");
  return PolyRow{poly_family_from_string(family.get<std::string>()), int_field(j, "d"),
                 int_field(j, "k")};
}

Json to_json(const EmbeddingModel& model) {
  Json out = {{"type", model.kind_name()}};
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, MaxFilterModel>) {
          out["bank"] = to_json(m.bank);
        } else if constexpr (std::is_same_v<T, LinearOfBankModel>) {
          out["bank"] = to_json(m.bank);
          out["linear"] = matrix_to_json(m.linear.matrix());
        } else if constexpr (std::is_same_v<T, ReluNetModel>) {
          out["hidden"] = matrix_to_json(m.hidden);
          out["output"] = matrix_to_json(m.output);
        } else if constexpr (std::is_same_v<T, OptimalPlanarModel>) {
          out["order"] = m.order;
        } else if constexpr (std::is_same_v<T, OptimalPsdModel>) {
          out["dim"] = m.dim;
        } else if constexpr (std::is_same_v<T, WeylSortModel>) {
          out["group"] = to_json(m.group);
        } else {
          out["row"] = to_json(m.row);
        }
      },
      model.variant());
  return out;
}

EmbeddingModel model_from_json(const Json& j) {
  const Json& type = field(j, "type");
  if (!type.is_string()) throw ParseError("model type must be a string");
  const std::string t = type.get<std::string>();
  if (t == "mf") return MaxFilterModel{bank_from_json(field(j, "bank"))};
  if (t == "lmf") {
    return LinearOfBankModel{LinearMap(matrix_from_json(field(j, "linear"))),
                             bank_from_json(field(j, "bank"))};
  }
  if (t == "relu") {
    return ReluNetModel{matrix_from_json(field(j, "hidden")), matrix_from_json(field(j, "output"))};
  }
  if (t == "optimal_planar") return OptimalPlanarModel{int_field(j, "order")};
  if (t == "optimal_psd") return OptimalPsdModel{int_field(j, "dim")};
  if (t == "weyl_sort") return WeylSortModel{group_from_json(field(j, "group"))};
  if (t == "poly") return PolyModel{poly_row_from_json(field(j, "row"))};
  if (t == "hpoly") return HPolyModel{poly_row_from_json(field(j, "row"))};
  throw ParseError("unknown model type '" + t + "'");
}

Json to_json(const DistortionReport& r) {
  const auto num = [](double v) -> Json {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  };
  return {{"alpha", num(r.alpha)},
          {"beta", num(r.beta)},
          {"dist", num(r.dist)},
          {"argmin_pair", {r.argmin_pair.i, r.argmin_pair.j}},
          {"argmax_pair", {r.argmax_pair.i, r.argmax_pair.j}},
          {"n_pairs", r.n_pairs},
          {"dropped_pairs", r.dropped_pairs}};
}

}  // namespace orbitmap
