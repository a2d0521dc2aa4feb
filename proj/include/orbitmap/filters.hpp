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

#ifndef ORBITMAP_FILTERS_HPP_
#define ORBITMAP_FILTERS_HPP_

#include "orbitmap/common.hpp"
#include "orbitmap/groups.hpp"

namespace orbitmap {

/// The max filter <<[x],[y]>> = max_g <x, g y> for template y.
double max_filter(const GroupSpec& group, const VectorRef& y, const VectorRef& x);

/// A max filter bank: x -> (<<[x],[y_i]>>)_i for templates y_1..y_m.
///
/// Templates are rows of an m x D matrix and are stored as given (no implicit
/// normalization); each coordinate is ||y_i||-Lipschitz.
class FilterBank {
 public:
  FilterBank(GroupSpec group, Matrix templates);

  const GroupSpec& group() const { return group_; }
  const Matrix& templates() const { return templates_; }
  Matrix& mutable_templates() { return templates_; }
  Eigen::Index size() const { return templates_.rows(); }
  Eigen::Index input_dim() const { return templates_.cols(); }

  Vector apply(const VectorRef& x) const;
  /// Bank outputs for every column of a D x N point set, as an m x N matrix.
  Matrix apply_all(const PointSet& points) const;

  /// Row i is the maximizer g* y_i of <x, g y_i>: the gradient of the i-th
  /// filter wherever it is differentiable, and a valid convex subgradient at
  /// ties (first maximizer in enumeration order).
  Matrix subgradient(const VectorRef& x) const;

  /// Row i is the gradient of the i-th filter with respect to its template,
  /// which is the maximizer of <y_i, g x> over the orbit of x.
  Matrix template_gradient(const VectorRef& x) const;

  /// Rescales every nonzero template to unit norm.
  void normalize_templates();

 private:
  GroupSpec group_;
  Matrix templates_;
};

/// A linear map R^m -> R^n with finite entries.
class LinearMap {
 public:
  explicit LinearMap(Matrix matrix);

  const Matrix& matrix() const { return matrix_; }
  Matrix& mutable_matrix() { return matrix_; }
  Eigen::Index rows() const { return matrix_.rows(); }
  Eigen::Index cols() const { return matrix_.cols(); }

  Vector apply(const VectorRef& v) const;

 private:
  Matrix matrix_;
};

/// L applied to the bank output.
Vector lmf_apply(const LinearMap& linear, const FilterBank& bank, const VectorRef& x);

}  // namespace orbitmap

#endif  // ORBITMAP_FILTERS_HPP_
