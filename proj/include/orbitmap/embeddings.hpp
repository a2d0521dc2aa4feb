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

#ifndef ORBITMAP_EMBEDDINGS_HPP_
#define ORBITMAP_EMBEDDINGS_HPP_

#include <string>
#include <variant>

#include "orbitmap/common.hpp"
#include "orbitmap/filters.hpp"
#include "orbitmap/groups.hpp"

namespace orbitmap {

// Invariant polynomial families, one per (V, G) pair:
//   kOuterProduct   R^d / {+-I}      x x^T                     n = d(d+1)/2
//   kPowerSums      R^d / S_d        (sum_j x_j^p)_{p=1..d}    n = d
//   kBispectrum     l2(Z_d) / C_d    xh(a) xh(b) xh(-a-b)      n = 2 d^2
//   kComplexPower   C / C_r          x^r                       n = 2
//   kHermitianOuter C^d / S^1        x x^*                     n = d^2
//   kGram           (R^d)^k / O(d)   (<x_i, x_j>)_{i,j}        n = k(k+1)/2
enum class PolyFamily {
  kOuterProduct,
  kPowerSums,
  kBispectrum,
  kComplexPower,
  kHermitianOuter,
  kGram,
};

struct PolyRow {
  PolyFamily family = PolyFamily::kOuterProduct;
  int d = 1;  // dimension, or the order r for kComplexPower
  int k = 1;  // tuple size for kGram

  int input_dim() const;
  int output_dim() const;
  /// The group this polynomial is invariant under.
  GroupSpec group() const;
  std::string name() const;
};

std::string to_string(PolyFamily family);
PolyFamily poly_family_from_string(const std::string& s);

/// Upper triangle of a symmetric matrix, row-major, off-diagonal entries
/// scaled by sqrt(2) so the Euclidean norm equals the Frobenius norm.
Vector flatten_symmetric(const MatrixRef& s);

/// ||x|| (cos(pi/2r), phase(x)^r sin(pi/2r)) with the complex coordinate
/// flattened to (re, im); zero at the origin.
Vector optimal_planar(int order, const VectorRef& x);

/// The operator square root sqrt(x x^T) = x x^T / ||x||, flattened.
Vector optimal_psd(const VectorRef& x);

/// Representative of [x] in the closed Weyl chamber. Permutation groups sort
/// weakly decreasing; hyperoctahedral sign groups sort absolute values
/// weakly decreasing (the chamber of the signed-permutation group B_d).
Vector weyl_sort(const GroupSpec& group, const VectorRef& x);

Vector poly_invariant(const PolyRow& row, const VectorRef& x);
/// ||x|| poly(x / ||x||), zero at the origin.
Vector hpoly_invariant(const PolyRow& row, const VectorRef& x);

struct MaxFilterModel {
  FilterBank bank;
};
struct LinearOfBankModel {
  LinearMap linear;
  FilterBank bank;
};
/// x -> output * relu(hidden * x). Not group invariant.
struct ReluNetModel {
  Matrix hidden;  // m x D
  Matrix output;  // n x m
};
struct OptimalPlanarModel {
  int order = 2;
};
struct OptimalPsdModel {
  int dim = 1;
};
struct WeylSortModel {
  GroupSpec group;
};
struct PolyModel {
  PolyRow row;
};
struct HPolyModel {
  PolyRow row;
};

class EmbeddingModel {
 public:
  using Variant = std::variant<MaxFilterModel, LinearOfBankModel, ReluNetModel,
                               OptimalPlanarModel, OptimalPsdModel, WeylSortModel,
                               PolyModel, HPolyModel>;

  template <class T>
    requires std::is_constructible_v<Variant, T&&>
  EmbeddingModel(T&& v) : v_(std::forward<T>(v)) {}  // NOLINT: implicit by design of the variant

  const Variant& variant() const { return v_; }
  Variant& variant() { return v_; }

  Vector operator()(const VectorRef& x) const;
  /// Outputs for every column of a D x N point set, as an n x N matrix.
  Matrix embed(const PointSet& points) const;

  Eigen::Index input_dim() const;
  Eigen::Index output_dim() const;
  /// Tag used in files and reports: "mf", "lmf", "relu", "optimal_planar",
  /// "optimal_psd", "weyl_sort", "poly", "hpoly".
  std::string kind_name() const;

  bool is_group_invariant() const;
  bool is_positively_homogeneous() const;

  /// The model multiplied by c > 0. Only defined for trainable variants.
  EmbeddingModel scaled(double c) const;

 private:
  Variant v_;
};

}  // namespace orbitmap

#endif  // ORBITMAP_EMBEDDINGS_HPP_
