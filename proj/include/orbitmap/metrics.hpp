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

#ifndef ORBITMAP_METRICS_HPP_
#define ORBITMAP_METRICS_HPP_

#include <array>
#include <cstddef>
#include <vector>

#include "orbitmap/common.hpp"
#include "orbitmap/groups.hpp"

namespace orbitmap {

/// Quotient metric d([x],[y]) = min_g ||x - g y||, using the closed form of
/// each group kind and enumeration for the remaining finite kinds.
double quotient_dist(const GroupSpec& group, const VectorRef& x, const VectorRef& y);

/// min_g ||x - g y|| by listing every group element. Serves as the oracle for
/// the closed forms; throws ContinuousGroupError for infinite groups.
double enumerated_quotient_dist(const GroupSpec& group, const VectorRef& x,
                                const VectorRef& y);

/// ||x - g* y|| where g* y is the maximizer reported by argmax_inner.
double aligned_distance(const GroupSpec& group, const VectorRef& x, const VectorRef& y);

struct MetricAxiomReport {
  std::size_t triples = 0;
  double worst_symmetry = 0.0;   // max |d(a,b) - d(b,a)|
  double worst_triangle = 0.0;   // max d(a,c) - d(a,b) - d(b,c), clipped at 0
  std::array<std::size_t, 3> worst_triple{};
  std::size_t violations = 0;
  bool ok = true;
};

/// Checks symmetry and the triangle inequality over all ordered triples of the
/// given points (columns of a D x N matrix). Needs at least three points.
MetricAxiomReport check_metric_axioms(const GroupSpec& group, const PointSet& points,
                                      double tolerance = 1e-9);

/// Condensed storage of the pairwise quotient distances of a point set.
class PairwiseDistances {
 public:
  PairwiseDistances() = default;
  static PairwiseDistances compute(const GroupSpec& group, const PointSet& points);
  /// Pairwise Euclidean distances between the columns of a matrix.
  static PairwiseDistances euclidean(const MatrixRef& points);
  /// Wraps condensed values for n points (length n(n-1)/2, ordered as index()).
  static PairwiseDistances from_values(std::size_t n, std::vector<double> values);

  std::size_t size() const { return n_; }
  std::size_t pair_count() const { return values_.size(); }
  /// Distance for i < j.
  double operator()(std::size_t i, std::size_t j) const { return values_[index(i, j)]; }
  const std::vector<double>& values() const { return values_; }

  std::size_t index(std::size_t i, std::size_t j) const {
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

}  // namespace orbitmap

#endif  // ORBITMAP_METRICS_HPP_
