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

#include "orbitmap/distortion.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "orbitmap/parallel.hpp"

namespace orbitmap {

namespace {

struct RowExtremes {
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = -std::numeric_limits<double>::infinity();
  std::size_t min_j = 0;
  std::size_t max_j = 0;
  std::size_t pairs = 0;
  std::size_t dropped = 0;
};

inline double column_distance(const MatrixRef& f, std::size_t i, std::size_t j) {
  const double* a = f.col(static_cast<Eigen::Index>(i)).data();
  const double* b = f.col(static_cast<Eigen::Index>(j)).data();
  double s = 0.0;
  for (Eigen::Index t = 0; t < f.rows(); ++t) {
    const double d = a[t] - b[t];
    s += d * d;
  }
  return std::sqrt(s);
}

RowExtremes scan_row(const MatrixRef& f, const PairwiseDistances& q, std::size_t i) {
  RowExtremes r;
  const std::size_t n = q.size();
  const double* qrow = q.values().data() + (i + 1 < n ? q.index(i, i + 1) : 0);
  for (std::size_t j = i + 1; j < n; ++j) {
    const double qd = qrow[j - i - 1];
    if (qd <= kSameOrbitTolerance) {
      ++r.dropped;
      continue;
    }
    ++r.pairs;
    const double ratio = column_distance(f, i, j) / qd;
    if (ratio < r.min_ratio) {
      r.min_ratio = ratio;
      r.min_j = j;
    }
    if (ratio > r.max_ratio) {
      r.max_ratio = ratio;
      r.max_j = j;
    }
  }
  return r;
}

void check_shapes(const MatrixRef& features, const PairwiseDistances& quotient) {
  if (static_cast<std::size_t>(features.cols()) != quotient.size()) {
    throw DimensionMismatch("feature matrix has " + std::to_string(features.cols()) +
                            " points but distances cover " + std::to_string(quotient.size()));
  }
}

DistortionReport finish(DistortionReport r) {
  if (r.n_pairs == 0) throw DegenerateData("fewer than two distinct orbits in the point set");
  r.dist = r.alpha > 0.0 ? r.beta / r.alpha : std::numeric_limits<double>::infinity();
  return r;
}

Matrix evaluate_map(const FeatureMap& map, const PointSet& points) {
  if (points.cols() == 0) return Matrix();
  const Vector first = map(points.col(0));
  Matrix out(first.size(), points.cols());
  out.col(0) = first;
  for (Eigen::Index j = 1; j < points.cols(); ++j) out.col(j) = map(points.col(j));
  return out;
}

}  // namespace

DistortionReport empirical_distortion(const MatrixRef& features, const PairwiseDistances& quotient) {
  check_shapes(features, quotient);
  const std::size_t n = quotient.size();
  std::vector<RowExtremes> rows(n);
  parallel_for(0, n, [&](std::size_t i) { rows[i] = scan_row(features, quotient, i); });
  DistortionReport r;
  r.alpha = std::numeric_limits<double>::infinity();
  r.beta = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const RowExtremes& e = rows[i];
    r.n_pairs += e.pairs;
    r.dropped_pairs += e.dropped;
    if (e.pairs == 0) continue;
    if (e.min_ratio < r.alpha) {
      r.alpha = e.min_ratio;
      r.argmin_pair = {i, e.min_j};
    }
    if (e.max_ratio > r.beta) {
      r.beta = e.max_ratio;
      r.argmax_pair = {i, e.max_j};
    }
  }
  return finish(r);
}

DistortionReport empirical_distortion(const EmbeddingModel& model, const GroupSpec& group,
                                      const PointSet& points) {
  return empirical_distortion(model.embed(points), PairwiseDistances::compute(group, points));
}

DistortionReport empirical_distortion(const FeatureMap& map, const GroupSpec& group,
                                      const PointSet& points) {
  return empirical_distortion(evaluate_map(map, points), PairwiseDistances::compute(group, points));
}

std::optional<DistortionReport> bounded_distortion(const MatrixRef& features,
                                                   const PairwiseDistances& quotient,
                                                   double abandon_at) {
  check_shapes(features, quotient);
  DistortionReport r;
  r.alpha = std::numeric_limits<double>::infinity();
  r.beta = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < quotient.size(); ++i) {
    const RowExtremes e = scan_row(features, quotient, i);
    r.n_pairs += e.pairs;
    r.dropped_pairs += e.dropped;
    if (e.pairs == 0) continue;
    if (e.min_ratio < r.alpha) {
      r.alpha = e.min_ratio;
      r.argmin_pair = {i, e.min_j};
    }
    if (e.max_ratio > r.beta) {
      r.beta = e.max_ratio;
      r.argmax_pair = {i, e.max_j};
    }
    if (r.beta >= abandon_at * r.alpha) return std::nullopt;
  }
  return finish(r);
}

WeylReport weyl_check(const MatrixRef& features_f, const MatrixRef& features_g,
                      const PairwiseDistances& quotient) {
  if (features_f.rows() != features_g.rows()) {
    throw DimensionMismatch("weyl_check maps have different output dimensions");
  }
  const DistortionReport rf = empirical_distortion(features_f, quotient);
  const DistortionReport rg = empirical_distortion(features_g, quotient);
  const Matrix diff = features_f - features_g;
  const DistortionReport rd = empirical_distortion(diff, quotient);
  WeylReport w;
  w.alpha_f = rf.alpha;
  w.alpha_g = rg.alpha;
  w.beta_f = rf.beta;
  w.beta_g = rg.beta;
  w.beta_diff = rd.beta;
  w.alpha_margin = rd.beta - std::abs(rf.alpha - rg.alpha);
  w.beta_margin = rd.beta - std::abs(rf.beta - rg.beta);
  return w;
}

WeylReport weyl_check(const EmbeddingModel& f, const EmbeddingModel& g, const GroupSpec& group,
                      const PointSet& points) {
  return weyl_check(f.embed(points), g.embed(points), PairwiseDistances::compute(group, points));
}

std::string distortion_csv_header() { return "group,model,n,alpha,beta,dist,seed"; }

std::string distortion_csv_row(const std::string& group, const std::string& model,
                               std::size_t n, const DistortionReport& report,
                               std::uint64_t seed) {
  std::ostringstream os;
  os.precision(17);
  // Group names contain commas inside parentheses; quote them for CSV.
  os << '"' << group << "\"," << model << ',' << n << ',' << report.alpha << ',' << report.beta
     << ',' << report.dist << ',' << seed;
  return os.str();
}

}  // namespace orbitmap
