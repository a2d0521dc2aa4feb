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

#include "orbitmap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "orbitmap/parallel.hpp"

namespace orbitmap {

namespace {

Vector sorted_decreasing(const VectorRef& x) {
  Vector s = x;
  std::sort(s.data(), s.data() + s.size(), std::greater<>());
  return s;
}

}  // namespace

double quotient_dist(const GroupSpec& group, const VectorRef& x, const VectorRef& y) {
  require_dim(x.size(), group.ambient_dim(), "quotient_dist x");
  require_dim(y.size(), group.ambient_dim(), "quotient_dist y");
  switch (group.kind()) {
    case GroupKind::kSignFlip:
      return std::min((x - y).norm(), (x + y).norm());
    case GroupKind::kPermutation:
      return (sorted_decreasing(x) - sorted_decreasing(y)).norm();
    case GroupKind::kHyperoctahedralSigns:
      return (x.cwiseAbs() - y.cwiseAbs()).norm();
    case GroupKind::kPhaseCircle:
    case GroupKind::kOrthogonalTuple:
    case GroupKind::kShapeGroup:
      return aligned_distance(group, x, y);
    default:
      return enumerated_quotient_dist(group, x, y);
  }
}

double enumerated_quotient_dist(const GroupSpec& group, const VectorRef& x,
                                const VectorRef& y) {
  require_dim(x.size(), group.ambient_dim(), "quotient_dist x");
  require_dim(y.size(), group.ambient_dim(), "quotient_dist y");
  double best = std::numeric_limits<double>::infinity();
  for (const GroupElement& g : group.enumerate()) {
    best = std::min(best, (x - group.apply(g, y)).norm());
  }
  return best;
}

double aligned_distance(const GroupSpec& group, const VectorRef& x, const VectorRef& y) {
  return (x - group.argmax_inner(x, y).maximizer).norm();
}

MetricAxiomReport check_metric_axioms(const GroupSpec& group, const PointSet& points,
                                      double tolerance) {
  const auto n = static_cast<std::size_t>(points.cols());
  if (n < 3) throw InvalidArgument("metric axiom check needs at least three points");
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d(i, j) = quotient_dist(group, points.col(i), points.col(j));
    }
  }
  MetricAxiomReport r;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      r.worst_symmetry = std::max(r.worst_symmetry, std::abs(d(i, j) - d(j, i)));
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (a == b || b == c || a == c) continue;
        ++r.triples;
        const double excess = d(a, c) - d(a, b) - d(b, c);
        if (excess > r.worst_triangle) {
          r.worst_triangle = excess;
          r.worst_triple = {a, b, c};
        }
        if (excess > tolerance) ++r.violations;
      }
    }
  }
  if (r.worst_symmetry > tolerance) ++r.violations;
  r.ok = r.violations == 0;
  return r;
}

PairwiseDistances PairwiseDistances::compute(const GroupSpec& group, const PointSet& points) {
  require_dim(points.rows(), group.ambient_dim(), "pairwise distances");
  PairwiseDistances p;
  p.n_ = static_cast<std::size_t>(points.cols());
  p.values_.assign(p.n_ * (p.n_ - (p.n_ > 0 ? 1 : 0)) / 2, 0.0);
  parallel_for(0, p.n_, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < p.n_; ++j) {
      p.values_[p.index(i, j)] = quotient_dist(group, points.col(static_cast<Eigen::Index>(i)),
                                               points.col(static_cast<Eigen::Index>(j)));
    }
  });
  return p;
}

PairwiseDistances PairwiseDistances::from_values(std::size_t n, std::vector<double> values) {
  if (values.size() != n * (n - (n > 0 ? 1 : 0)) / 2) {
    throw DimensionMismatch("condensed distances have the wrong length for " + std::to_string(n) +
                            " points");
  }
  PairwiseDistances p;
  p.n_ = n;
  p.values_ = std::move(values);
  return p;
}

PairwiseDistances PairwiseDistances::euclidean(const MatrixRef& points) {
  PairwiseDistances p;
  p.n_ = static_cast<std::size_t>(points.cols());
  p.values_.assign(p.n_ * (p.n_ - (p.n_ > 0 ? 1 : 0)) / 2, 0.0);
  for (std::size_t i = 0; i < p.n_; ++i) {
    for (std::size_t j = i + 1; j < p.n_; ++j) {
      p.values_[p.index(i, j)] =
          (points.col(static_cast<Eigen::Index>(i)) - points.col(static_cast<Eigen::Index>(j))).norm();
    }
  }
  return p;
}

}  // namespace orbitmap
