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

#ifndef ORBITMAP_DISTORTION_HPP_
#define ORBITMAP_DISTORTION_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "orbitmap/common.hpp"
#include "orbitmap/embeddings.hpp"
#include "orbitmap/groups.hpp"
#include "orbitmap/metrics.hpp"

namespace orbitmap {

/// Pairs whose quotient distance is at or below this are treated as the same
/// orbit and dropped.
inline constexpr double kSameOrbitTolerance = 1e-9;

struct IndexPair {
  std::size_t i = 0;
  std::size_t j = 0;
  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

/// Empirical bilipschitz bounds of an invariant map over the pairs of a finite
/// point set: alpha = min ratio, beta = max ratio, dist = beta / alpha
/// (infinite when alpha = 0).
struct DistortionReport {
  double alpha = 0.0;
  double beta = 0.0;
  double dist = 0.0;
  IndexPair argmin_pair;
  IndexPair argmax_pair;
  std::size_t n_pairs = 0;
  std::size_t dropped_pairs = 0;
};

using FeatureMap = std::function<Vector(const VectorRef&)>;

/// Distortion of precomputed features (n x N, one column per point) against
/// precomputed quotient distances. Ties go to the smallest (i, j) pair.
DistortionReport empirical_distortion(const MatrixRef& features, const PairwiseDistances& quotient);
DistortionReport empirical_distortion(const EmbeddingModel& model, const GroupSpec& group,
                                      const PointSet& points);
DistortionReport empirical_distortion(const FeatureMap& map, const GroupSpec& group,
                                      const PointSet& points);

/// As empirical_distortion, but gives up (returns nullopt) as soon as the
/// running beta/alpha reaches abandon_at. Adding pairs never lowers the
/// distortion, so an abandoned map cannot beat abandon_at.
std::optional<DistortionReport> bounded_distortion(const MatrixRef& features,
                                                   const PairwiseDistances& quotient,
                                                   double abandon_at);

/// Both sides of |alpha(f) - alpha(g)| <= beta(f - g) and
/// |beta(f) - beta(g)| <= beta(f - g) over one shared pair set.
struct WeylReport {
  double alpha_f = 0.0;
  double alpha_g = 0.0;
  double beta_f = 0.0;
  double beta_g = 0.0;
  double beta_diff = 0.0;
  double alpha_margin = 0.0;  // beta_diff - |alpha_f - alpha_g|
  double beta_margin = 0.0;   // beta_diff - |beta_f - beta_g|
  bool holds(double tolerance = 1e-10) const {
    return alpha_margin >= -tolerance && beta_margin >= -tolerance;
  }
};

WeylReport weyl_check(const MatrixRef& features_f, const MatrixRef& features_g,
                      const PairwiseDistances& quotient);
WeylReport weyl_check(const EmbeddingModel& f, const EmbeddingModel& g, const GroupSpec& group,
                      const PointSet& points);

/// CSV rendering: group,model,n,alpha,beta,dist,seed
std::string distortion_csv_header();
std::string distortion_csv_row(const std::string& group, const std::string& model,
                               std::size_t n, const DistortionReport& report,
                               std::uint64_t seed);

}  // namespace orbitmap

#endif  // ORBITMAP_DISTORTION_HPP_
