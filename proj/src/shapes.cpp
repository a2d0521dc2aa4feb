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

#include "orbitmap/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "orbitmap/rng.hpp"

namespace orbitmap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line) + ": '" + s + "' is not a finite number");
  }
  return v;
}

// Drops a repeated closing vertex; returns a reason when the loop is unusable.
std::optional<std::string> close_loop(std::vector<Point2>& v) {
  if (v.size() >= 2 && v.front() == v.back()) v.pop_back();
  if (v.size() < 3) return "fewer than 3 vertices";
  if (perimeter(v) <= 0.0) return "zero perimeter";
  return std::nullopt;
}

void accept(IngestReport& report, RawPolygon p) {
  if (const auto why = close_loop(p.vertices)) {
    report.rejected.push_back(p.id + ": " + *why);
    return;
  }
  report.polygons.push_back(std::move(p));
}

std::vector<Point2> ring_from_json(const nlohmann::json& ring) {
  if (!ring.is_array()) throw ParseError("polygon ring is not an array");
  std::vector<Point2> v;
  for (const auto& c : ring) {
    if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) {
      throw ParseError("ring position is not a coordinate pair");
    }
    v.emplace_back(c[0].get<double>(), c[1].get<double>());
  }
  return v;
}

std::string json_label(const nlohmann::json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

Vector PolygonShape::flatten() const {
  Vector out(2 * static_cast<Eigen::Index>(vertices.size()));
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    out.segment<2>(2 * static_cast<Eigen::Index>(i)) = vertices[i];
  }
  return out;
}

ShapeFormat shape_format_from_string(const std::string& s) {
  if (s == "csv") return ShapeFormat::kCsv;
  if (s == "geojson") return ShapeFormat::kGeoJson;
  throw ParseError("unknown shape format '" + s + "' (expected csv or geojson)");
}

IngestReport ingest(const std::string& path, ShapeFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return format == ShapeFormat::kCsv ? ingest_csv(buf.str()) : ingest_geojson(buf.str());
}

IngestReport ingest_csv(const std::string& text) {
  IngestReport report;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  bool any = false;
  while (std::getline(ss, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split_commas(line);
    if (!any && !f.empty() && f[0] == "id") {
      any = true;
      continue;
    }
    any = true;
    if (f.size() < 2) throw ParseError("line " + std::to_string(line_no) + ": missing id or class");
    if ((f.size() - 2) % 2 != 0) {
      throw ParseError("line " + std::to_string(line_no) + ": odd number of coordinates");
    }
    RawPolygon p;
    p.id = f[0];
    if (!f[1].empty()) p.class_label = f[1];
    for (std::size_t i = 2; i + 1 < f.size(); i += 2) {
      p.vertices.emplace_back(parse_number(f[i], line_no), parse_number(f[i + 1], line_no));
    }
    accept(report, std::move(p));
  }
  if (report.polygons.empty() && report.rejected.empty()) throw ParseError("no polygons in input");
  return report;
}

IngestReport ingest_geojson(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid GeoJSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw ParseError("expected a GeoJSON FeatureCollection");
  }
  IngestReport report;
  std::size_t index = 0;
  for (const auto& feature : doc["features"]) {
    const std::string fallback = "feature-" + std::to_string(index++);
    RawPolygon p;
    const nlohmann::json props =
        feature.contains("properties") && feature["properties"].is_object() ? feature["properties"]
                                                                             : nlohmann::json::object();
    if (props.contains("id")) {
      p.id = json_label(props["id"]);
    } else if (feature.contains("id")) {
      p.id = json_label(feature["id"]);
    } else {
      p.id = fallback;
    }
    if (props.contains("class") && !props["class"].is_null()) p.class_label = json_label(props["class"]);

    if (!feature.contains("geometry") || !feature["geometry"].is_object()) {
      report.rejected.push_back(p.id + ": missing geometry");
      continue;
    }
    const auto& geom = feature["geometry"];
    const std::string type = geom.value("type", "");
    if (!geom.contains("coordinates") || !geom["coordinates"].is_array()) {
      throw ParseError(p.id + ": geometry has no coordinates");
    }
    const auto& coords = geom["coordinates"];
    nlohmann::json rings;
    if (type == "Polygon") {
      rings = coords;
    } else if (type == "MultiPolygon") {
      if (coords.size() != 1) {
        report.rejected.push_back(p.id + ": multi-part shape (" + std::to_string(coords.size()) +
                                  " parts)");
        continue;
      }
      rings = coords[0];
    } else {
      report.rejected.push_back(p.id + ": unsupported geometry type '" + type + "'");
      continue;
    }
    if (!rings.is_array() || rings.empty()) {
      report.rejected.push_back(p.id + ": polygon has no rings");
      continue;
    }
    if (rings.size() > 1) {
      report.warnings.push_back(p.id + ": ignored " + std::to_string(rings.size() - 1) + " hole(s)");
    }
    p.vertices = ring_from_json(rings[0]);
    accept(report, std::move(p));
  }
  if (report.polygons.empty() && report.rejected.empty()) throw ParseError("no features in input");
  return report;
}

double perimeter(const std::vector<Point2>& loop) {
  double total = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    total += (loop[(i + 1) % loop.size()] - loop[i]).norm();
  }
  return total;
}

PolygonShape resample(const RawPolygon& polygon, int k) {
  if (k < 1) throw InvalidArgument("sample count must be positive");
  const std::vector<Point2>& v = polygon.vertices;
  const double total = v.empty() ? 0.0 : perimeter(v);
  if (!(total > 0.0)) throw DegenerateData(polygon.id + ": zero perimeter");

  PolygonShape out{polygon.id, polygon.class_label, {}};
  out.vertices.reserve(static_cast<std::size_t>(k));
  std::size_t edge = 0;
  double edge_start = 0.0;  // arclength at v[edge]
  double edge_len = (v[1 % v.size()] - v[0]).norm();
  for (int j = 0; j < k; ++j) {
    const double t = total * j / k;
    while (edge + 1 < v.size() && edge_start + edge_len <= t) {
      edge_start += edge_len;
      ++edge;
      edge_len = (v[(edge + 1) % v.size()] - v[edge]).norm();
    }
    const Point2& a = v[edge];
    const Point2& b = v[(edge + 1) % v.size()];
    const double s = edge_len > 0.0 ? std::clamp((t - edge_start) / edge_len, 0.0, 1.0) : 0.0;
    out.vertices.push_back(a + s * (b - a));
  }
  Point2 mean = Point2::Zero();
  for (const Point2& p : out.vertices) mean += p;
  mean /= k;
  for (Point2& p : out.vertices) p -= mean;
  return out;
}

PolygonShape unit_scale(const PolygonShape& shape) {
  const double norm = shape.flatten().norm();
  if (norm == 0.0) return shape;
  PolygonShape out = shape;
  for (Point2& p : out.vertices) p /= norm;
  return out;
}

PointSet shapes_to_points(const std::vector<PolygonShape>& shapes) {
  if (shapes.empty()) return PointSet(0, 0);
  const int k = shapes.front().k();
  PointSet out(2 * k, static_cast<Eigen::Index>(shapes.size()));
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    require_dim(shapes[i].k(), k, "shape sample count");
    out.col(static_cast<Eigen::Index>(i)) = shapes[i].flatten();
  }
  return out;
}

Matrix shape_embed(const EmbeddingModel& model, const std::vector<PolygonShape>& shapes) {
  const auto check_group = [](const FilterBank& bank) {
    if (bank.group().kind() != GroupKind::kShapeGroup) {
      throw InvalidArgument("shape embeddings need a shape_group model, got " + bank.group().name());
    }
  };
  if (const auto* mf = std::get_if<MaxFilterModel>(&model.variant())) check_group(mf->bank);
  if (const auto* lmf = std::get_if<LinearOfBankModel>(&model.variant())) check_group(lmf->bank);
  for (const PolygonShape& s : shapes) {
    if (2 * s.k() != model.input_dim()) {
      throw DimensionMismatch("shape '" + s.id + "' has k = " + std::to_string(s.k()) +
                              " but the model expects k = " + std::to_string(model.input_dim() / 2));
    }
  }
  return model.embed(shapes_to_points(shapes)).transpose();
}

PcaResult pca_project(const MatrixRef& x, int dims) {
  if (dims < 1) throw InvalidArgument("dims must be positive");
  if (x.rows() < dims) {
    throw InvalidArgument("pca needs at least " + std::to_string(dims) + " rows, got " +
                          std::to_string(x.rows()));
  }
  const Matrix centered = x.rowwise() - x.colwise().mean();
  const Matrix cov = centered.transpose() * centered / std::max<double>(1.0, static_cast<double>(x.rows() - 1));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const Vector values = eig.eigenvalues().reverse();
  const Matrix vectors = eig.eigenvectors().rowwise().reverse();

  PcaResult r;
  r.eigenvalues = values.cwiseMax(0.0);
  const double total = r.eigenvalues.sum();
  const double floor = 1e-12 * std::max(1.0, values.size() > 0 ? std::abs(values[0]) : 0.0);
  r.rank = static_cast<int>((values.array() > floor).count());
  const int kept = std::min<int>(dims, static_cast<int>(values.size()));
  r.components = Matrix::Zero(x.cols(), dims);
  r.explained_variance = Vector::Zero(dims);
  for (int c = 0; c < std::min(kept, r.rank); ++c) {
    Vector v = vectors.col(c);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    r.components.col(c) = v;
    r.explained_variance[c] = total > 0 ? r.eigenvalues[c] / total : 0.0;
  }
  r.projected = centered * r.components;
  return r;
}

std::string to_string(ShapeFamily family) {
  switch (family) {
    case ShapeFamily::kEllipse: return "ellipse";
    case ShapeFamily::kStar: return "star";
    case ShapeFamily::kBlob: return "blob";
  }
  return "unknown";
}

ShapeFamily shape_family_from_string(const std::string& s) {
  for (ShapeFamily f : {ShapeFamily::kEllipse, ShapeFamily::kStar, ShapeFamily::kBlob}) {
    if (to_string(f) == s) return f;
  }
  throw ParseError("unknown shape family '" + s + "'");
}

PolygonShape ellipse_shape(double a, double b, int k, double angle, double phase) {
  if (k < 3) throw InvalidArgument("shapes need k >= 3");
  const Eigen::Rotation2Dd rot(angle);
  PolygonShape s{"ellipse", std::string("ellipse"), {}};
  for (int j = 0; j < k; ++j) {
    const double t = phase + kTwoPi * j / k;
    s.vertices.push_back(rot * Point2(a * std::cos(t), b * std::sin(t)));
  }
  return s;
}

PolygonShape star_shape(int arms, double depth, int k) {
  if (k < 3) throw InvalidArgument("shapes need k >= 3");
  if (arms < 2) throw InvalidArgument("stars need at least two arms");
  if (!(depth >= 0.0 && depth < 1.0)) throw InvalidArgument("star depth must lie in [0, 1)");
  PolygonShape s{"star", std::string("star"), {}};
  for (int j = 0; j < k; ++j) {
    const double t = kTwoPi * j / k;
    const double r = 1.0 + depth * std::cos(arms * t);
    s.vertices.emplace_back(r * std::cos(t), r * std::sin(t));
  }
  return s;
}

std::vector<PolygonShape> synth_shapes(ShapeFamily family, int count, int k, std::uint64_t seed) {
  if (count < 0) throw InvalidArgument("count must be nonnegative");
  if (k < 3) throw InvalidArgument("shapes need k >= 3");
  Rng rng = make_rng(seed, "synth-" + to_string(family));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<PolygonShape> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double scale = 0.7 + 0.8 * unit(rng);
    const double angle = kTwoPi * unit(rng);
    RawPolygon dense;
    const int fine = 8 * k;
    std::vector<double> radius(static_cast<std::size_t>(fine), 1.0);
    switch (family) {
      case ShapeFamily::kEllipse: {
        const double ratio = 0.2 + 0.8 * unit(rng);
        for (int j = 0; j < fine; ++j) {
          const double t = kTwoPi * j / fine;
          dense.vertices.emplace_back(std::cos(t), ratio * std::sin(t));
        }
        break;
      }
      case ShapeFamily::kStar: {
        const int arms = 3 + static_cast<int>(unit(rng) * 5.0);
        const double depth = 0.2 + 0.4 * unit(rng);
        for (int j = 0; j < fine; ++j) {
          const double t = kTwoPi * j / fine;
          const double r = 1.0 + depth * std::cos(arms * t);
          dense.vertices.emplace_back(r * std::cos(t), r * std::sin(t));
        }
        break;
      }
      case ShapeFamily::kBlob: {
        double coef[3], phase[3];
        for (int h = 0; h < 3; ++h) {
          coef[h] = 0.25 * unit(rng) / (h + 1);
          phase[h] = kTwoPi * unit(rng);
        }
        for (int j = 0; j < fine; ++j) {
          const double t = kTwoPi * j / fine;
          double r = 1.0;
          for (int h = 0; h < 3; ++h) r += coef[h] * std::cos((h + 2) * t + phase[h]);
          dense.vertices.emplace_back(r * std::cos(t), r * std::sin(t));
        }
        break;
      }
    }
    // Random orientation, scale and starting vertex.
    const Eigen::Rotation2Dd rot(angle);
    const auto start = static_cast<std::size_t>(unit(rng) * fine) % static_cast<std::size_t>(fine);
    std::rotate(dense.vertices.begin(), dense.vertices.begin() + static_cast<std::ptrdiff_t>(start),
                dense.vertices.end());
    for (Point2& p : dense.vertices) p = scale * (rot * p);
    dense.id = to_string(family) + "-" + std::to_string(i);
    dense.class_label = to_string(family);
    out.push_back(resample(dense, k));
  }
  return out;
}

std::vector<PolygonShape> synth_mixture(int count, int k, std::uint64_t seed) {
  if (count < 0) throw InvalidArgument("count must be nonnegative");
  std::vector<PolygonShape> out;
  for (ShapeFamily f : {ShapeFamily::kEllipse, ShapeFamily::kStar, ShapeFamily::kBlob}) {
    const int c = count / 3 + (f == ShapeFamily::kEllipse ? count % 3 : 0);
    std::vector<PolygonShape> part = synth_shapes(f, c, k, seed);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

void write_embedding_csv(std::ostream& os, const std::vector<PolygonShape>& shapes,
                         const MatrixRef& embedding) {
  if (static_cast<std::size_t>(embedding.rows()) != shapes.size()) {
    throw DimensionMismatch("embedding rows do not match the shape count");
  }
  os.precision(17);
  os << "id,class";
  for (Eigen::Index c = 0; c < embedding.cols(); ++c) os << ",f" << c;
  os << '\n';
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    os << shapes[i].id << ',' << shapes[i].class_label.value_or("");
    for (Eigen::Index c = 0; c < embedding.cols(); ++c) {
      os << ',' << embedding(static_cast<Eigen::Index>(i), c);
    }
    os << '\n';
  }
}

void write_pca_csv(std::ostream& os, const std::vector<PolygonShape>& shapes,
                   const PcaResult& pca) {
  if (static_cast<std::size_t>(pca.projected.rows()) != shapes.size() || pca.projected.cols() < 2) {
    throw DimensionMismatch("pca projection does not match the shapes");
  }
  os.precision(17);
  os << "id,class,pc1,pc2\n";
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    os << shapes[i].id << ',' << shapes[i].class_label.value_or("") << ',' << pca.projected(r, 0)
       << ',' << pca.projected(r, 1) << '\n';
  }
}

void write_pca_svg(std::ostream& os, const std::vector<PolygonShape>& shapes,
                   const PcaResult& pca) {
  if (static_cast<std::size_t>(pca.projected.rows()) != shapes.size() || pca.projected.cols() < 2) {
    throw DimensionMismatch("pca projection does not match the shapes");
  }
  static const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  constexpr double kWidth = 640, kHeight = 480, kMargin = 40;
  std::map<std::string, std::size_t> colors;
  std::vector<std::string> order;
  for (const PolygonShape& s : shapes) {
    const std::string label = s.class_label.value_or("");
    if (colors.emplace(label, colors.size()).second) order.push_back(label);
  }
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (pca.projected.rows() > 0) {
    x0 = pca.projected.col(0).minCoeff();
    x1 = pca.projected.col(0).maxCoeff();
    y0 = pca.projected.col(1).minCoeff();
    y1 = pca.projected.col(1).maxCoeff();
  }
  const double sx = (kWidth - 2 * kMargin) / std::max(x1 - x0, 1e-12);
  const double sy = (kHeight - 2 * kMargin) / std::max(y1 - y0, 1e-12);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double cx = kMargin + (pca.projected(r, 0) - x0) * sx;
    const double cy = kHeight - kMargin - (pca.projected(r, 1) - y0) * sy;
    const std::size_t c = colors[shapes[i].class_label.value_or("")] % 10;
    os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"3\" fill=\"" << kPalette[c]
       << "\"><title>" << shapes[i].id << "</title></circle>\n";
  }
  for (std::size_t c = 0; c < order.size(); ++c) {
    const double y = kMargin / 2 + 14.0 * static_cast<double>(c);
    os << "<circle cx=\"" << kWidth - 110 << "\" cy=\"" << y << "\" r=\"4\" fill=\""
       << kPalette[c % 10] << "\"/><text x=\"" << kWidth - 100 << "\" y=\"" << y + 4
       << "\" font-size=\"12\">" << (order[c].empty() ? "(none)" : order[c]) << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace orbitmap
