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

#ifndef ORBITMAP_SHAPES_HPP_
#define ORBITMAP_SHAPES_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "orbitmap/common.hpp"
#include "orbitmap/embeddings.hpp"

namespace orbitmap {

using Point2 = Eigen::Vector2d;

/// A closed boundary loop as read from a file (no repeated closing vertex).
struct RawPolygon {
  std::string id;
  std::optional<std::string> class_label;
  std::vector<Point2> vertices;
};

/// k boundary samples with centroid at the origin.
struct PolygonShape {
  std::string id;
  std::optional<std::string> class_label;
  std::vector<Point2> vertices;

  int k() const { return static_cast<int>(vertices.size()); }
  /// (x0, y0, x1, y1, ...) as a point of (R^2)^k.
  Vector flatten() const;
};

enum class ShapeFormat { kCsv, kGeoJson };
ShapeFormat shape_format_from_string(const std::string& s);

struct IngestReport {
  std::vector<RawPolygon> polygons;
  std::vector<std::string> rejected;  // "id: reason"
  std::vector<std::string> warnings;
};

/// Reads polygons from `id,class,x0,y0,x1,y1,...` rows or from a GeoJSON
/// FeatureCollection (outer rings only). Multi-part and degenerate entries
/// are listed in `rejected`. Throws ParseError on malformed or empty input.
IngestReport ingest(const std::string& path, ShapeFormat format);
IngestReport ingest_csv(const std::string& text);
IngestReport ingest_geojson(const std::string& text);

double perimeter(const std::vector<Point2>& loop);

/// k points equally spaced by arclength along the closed loop, starting at
/// the first vertex, then shifted so their mean is zero. Throws
/// DegenerateData for a zero perimeter.
PolygonShape resample(const RawPolygon& polygon, int k);

/// The shape divided by the norm of its flattened vertex vector. Shapes with
/// zero norm are returned unchanged.
PolygonShape unit_scale(const PolygonShape& shape);

/// Columns are flattened shapes (2k x N). All shapes must share k.
PointSet shapes_to_points(const std::vector<PolygonShape>& shapes);

/// Row per shape (N x n). Throws DimensionMismatch when the model expects a
/// different k, and InvalidArgument when a bank uses a non-shape group.
Matrix shape_embed(const EmbeddingModel& model, const std::vector<PolygonShape>& shapes);

struct PcaResult {
  Matrix projected;            // N x dims, columns beyond `rank` are zero
  Matrix components;           // p x dims, unit columns
  Vector eigenvalues;          // all covariance eigenvalues, decreasing
  Vector explained_variance;   // eigenvalue / total for each kept component
  int rank = 0;
};

/// Projects the centered rows of x onto the top covariance eigenvectors.
/// Each component is signed so its largest-magnitude loading is positive.
PcaResult pca_project(const MatrixRef& x, int dims = 2);

enum class ShapeFamily { kEllipse, kStar, kBlob };
std::string to_string(ShapeFamily family);
ShapeFamily shape_family_from_string(const std::string& s);

/// Points (a cos t, b sin t) at t = phase + 2 pi j / k, rotated by angle.
PolygonShape ellipse_shape(double a, double b, int k, double angle = 0.0, double phase = 0.0);
/// Radial profile r(t) = 1 + depth cos(arms t) sampled at t = 2 pi j / k.
PolygonShape star_shape(int arms, double depth, int k);

/// Deterministic random shapes of one family with varied eccentricity,
/// lobe count, scale, orientation, and starting vertex.
std::vector<PolygonShape> synth_shapes(ShapeFamily family, int count, int k, std::uint64_t seed);

/// Roughly equal thirds of ellipses, stars and blobs (ellipses take the
/// remainder), each family drawn from its own stream.
std::vector<PolygonShape> synth_mixture(int count, int k, std::uint64_t seed);

void write_embedding_csv(std::ostream& os, const std::vector<PolygonShape>& shapes,
                         const MatrixRef& embedding);
void write_pca_csv(std::ostream& os, const std::vector<PolygonShape>& shapes,
                   const PcaResult& pca);
void write_pca_svg(std::ostream& os, const std::vector<PolygonShape>& shapes,
                   const PcaResult& pca);

}  // namespace orbitmap

#endif  // ORBITMAP_SHAPES_HPP_
