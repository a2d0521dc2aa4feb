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

#include "orbitmap/filters.hpp"

#include <cmath>

#include "orbitmap/parallel.hpp"

namespace orbitmap {

double max_filter(const GroupSpec& group, const VectorRef& y, const VectorRef& x) {
  return group.max_inner(x, y);
}

FilterBank::FilterBank(GroupSpec group, Matrix templates)
    : group_(std::move(group)), templates_(std::move(templates)) {
  require_dim(templates_.cols(), group_.ambient_dim(), "filter bank templates");
}

Vector FilterBank::apply(const VectorRef& x) const {
  require_dim(x.size(), input_dim(), "filter bank input");
  Vector out(size());
  for (Eigen::Index i = 0; i < size(); ++i) {
    out[i] = group_.max_inner(x, templates_.row(i).transpose());
  }
  return out;
}

Matrix FilterBank::apply_all(const PointSet& points) const {
  require_dim(points.rows(), input_dim(), "filter bank input");
  // Copy templates into columns once so each max filter reads contiguous data.
  const Matrix tt = templates_.transpose();
  Matrix out(size(), points.cols());
  parallel_for(0, static_cast<std::size_t>(points.cols()), [&](std::size_t jj) {
    const auto j = static_cast<Eigen::Index>(jj);
    for (Eigen::Index i = 0; i < size(); ++i) {
      out(i, j) = group_.max_inner(points.col(j), tt.col(i));
    }
  });
  return out;
}

Matrix FilterBank::subgradient(const VectorRef& x) const {
  require_dim(x.size(), input_dim(), "filter bank input");
  Matrix rows(size(), input_dim());
  for (Eigen::Index i = 0; i < size(); ++i) {
    rows.row(i) = group_.argmax_inner(x, templates_.row(i).transpose()).maximizer.transpose();
  }
  return rows;
}

Matrix FilterBank::template_gradient(const VectorRef& x) const {
  require_dim(x.size(), input_dim(), "filter bank input");
  Matrix rows(size(), input_dim());
  for (Eigen::Index i = 0; i < size(); ++i) {
    rows.row(i) = group_.argmax_inner(templates_.row(i).transpose(), x).maximizer.transpose();
  }
  return rows;
}

void FilterBank::normalize_templates() {
  for (Eigen::Index i = 0; i < size(); ++i) {
    const double n = templates_.row(i).norm();
    if (n > 0.0) templates_.row(i) /= n;
  }
}

LinearMap::LinearMap(Matrix matrix) : matrix_(std::move(matrix)) {
  if (!matrix_.allFinite()) throw InvalidArgument("linear map has non-finite entries");
}

Vector LinearMap::apply(const VectorRef& v) const {
  require_dim(v.size(), cols(), "linear map input");
  return matrix_ * v;
}

Vector lmf_apply(const LinearMap& linear, const FilterBank& bank, const VectorRef& x) {
  if (linear.cols() != bank.size()) {
    throw DimensionMismatch("linear map has " + std::to_string(linear.cols()) +
                            " columns but the bank has " + std::to_string(bank.size()) +
                            " templates");
  }
  return linear.apply(bank.apply(x));
}

}  // namespace orbitmap
