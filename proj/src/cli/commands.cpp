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

#include "orbitmap/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <unistd.h>

#include "CLI11.hpp"

#include "orbitmap/distortion.hpp"
#include "orbitmap/harmonic.hpp"
#include "orbitmap/metrics.hpp"
#include "orbitmap/rng.hpp"
#include "orbitmap/serialization.hpp"
#include "orbitmap/shapes.hpp"
#include "orbitmap/training.hpp"

namespace orbitmap::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

Json certificate(const std::string& check, Json params, double observed, double bound, bool pass) {
  return {{"check", check},
          {"params", std::move(params)},
          {"observed", finite_or_string(observed)},
          {"bound", bound},
          {"pass", pass}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

EmbeddingModel load_model(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw ParseError("model file '" + path + "' is not valid JSON: " + e.what());
  }
  return model_from_json(j);
}

bool is_trained(const std::string& model) {
  return model == "mf" || model == "lrmf" || model == "lmf" || model == "relu";
}

// Untrained invariant maps named in configs and tables.
EmbeddingModel fixed_model(const std::string& name, const GroupSpec& group,
                           const ExperimentConfig& cfg) {
  if (name == "weyl_sort") return WeylSortModel{group};
  if (name == "optimal_psd") {
    if (group.kind() != GroupKind::kSignFlip) {
      throw ParseError("model optimal_psd needs group.kind = sign_flip");
    }
    return OptimalPsdModel{group.dim()};
  }
  if (name == "optimal_planar") {
    if (group.kind() != GroupKind::kPlanarRotation) {
      throw ParseError("model optimal_planar needs group.kind = planar_rotation");
    }
    return OptimalPlanarModel{group.order_param()};
  }
  if (name == "poly" || name == "hpoly") {
    PolyRow row = default_poly_row(group);
    if (cfg.has("poly.family")) row.family = poly_family_from_string(cfg.get("poly.family"));
    if (!(row.group() == group)) {
      throw ParseError("poly.family " + to_string(row.family) + " is not invariant under " +
                       group.name());
    }
    if (name == "poly") return PolyModel{row};
    return HPolyModel{row};
  }
  throw ParseError("unknown model '" + name + "'");
}

double test_distortion(const EmbeddingModel& model, const PointSet& x, const PairwiseDistances& q) {
  return empirical_distortion(model.embed(x), q).dist;
}

// ---------------------------------------------------------------- tables

struct TableRow {
  std::string label;
  GroupSpec group;
  int n;
};

std::vector<TableRow> table_rows(int id, double scale) {
  std::vector<TableRow> rows;
  switch (id) {
    case 2:
      rows = {{"R^3/{+-I} -> R^9", GroupSpec::sign_flip(3), 9},
              {"R^5/S_5 -> R^15", GroupSpec::permutation(5), 15},
              {"l2(Z_5)/C_5 -> R^15", GroupSpec::cyclic_shift(5), 15},
              {"C/C_3 -> R^6", GroupSpec::planar_rotation(3), 6},
              {"C/C_4 -> R^6", GroupSpec::planar_rotation(4), 6},
              {"C^2/S^1 -> R^9", GroupSpec::phase_circle(2), 9},
              {"(R^3)^3/O(3) -> R^18", GroupSpec::orthogonal_tuple(3, 3), 18}};
      break;
    case 3:
      for (int n : {8, 16, 32, 256})
        rows.push_back({"R^2/{+-I} -> R^" + std::to_string(n), GroupSpec::sign_flip(2), n});
      break;
    case 4:
      for (int n : {8, 16, 32, 256})
        rows.push_back({"C^2/S^1 -> R^" + std::to_string(n), GroupSpec::phase_circle(2), n});
      break;
    case 5:
      for (int n : {4, 8, 16})
        rows.push_back({"(R^2)^2/O(2) -> R^" + std::to_string(n), GroupSpec::orthogonal_tuple(2, 2), n});
      break;
    case 6:
    case 7: {
      const int full_k = id == 6 ? 50 : 100;
      const int k = std::max(8, static_cast<int>(std::lround(full_k * scale)));
      rows.push_back({"(R^2)^" + std::to_string(k) + "/(O(2)xC_" + std::to_string(k) + ") -> R^" +
                          std::to_string(2 * k),
                      GroupSpec::shape_group(k), 2 * k});
      break;
    }
    default:
      throw ParseError("table id must be one of 2, 3, 4, 5, 6, 7");
  }
  return rows;
}

int scaled(int full, double scale, int floor) {
  return std::max(floor, static_cast<int>(std::lround(full * scale)));
}

// Widens an LMF model to m templates and n outputs without changing its
// features: new templates get zero weight and new outputs are zero.
EmbeddingModel pad_lmf(const LinearOfBankModel& prev, int m, int n, Rng& rng) {
  const Matrix& y = prev.bank.templates();
  const Matrix& l = prev.linear.matrix();
  Matrix templates = gaussian_matrix(rng, m, y.cols());
  for (Eigen::Index k = 0; k < templates.rows(); ++k) templates.row(k).normalize();
  templates.topRows(y.rows()) = y;
  Matrix linear = Matrix::Zero(n, m);
  linear.topLeftCorner(l.rows(), l.cols()) = l;
  return LinearOfBankModel{LinearMap(std::move(linear)), FilterBank(prev.bank.group(), std::move(templates))};
}

// ---------------------------------------------------------------- verify

Json verify_fourier() {
  using Rule = boost::math::quadrature::gauss<double, 30>;
  double worst = 0.0;
  for (int r : {2, 3, 4, 6}) {
    for (int k = -12; k <= 12; ++k) {
      double re = 0.0, im = 0.0;
      for (int j = 0; j < r; ++j) {
        const double c = 2.0 * kPi * j / r;
        const double a = c - kPi / r, h = (2.0 * kPi / r) / 8;
        for (int p = 0; p < 8; ++p) {
          re += Rule::integrate([&](double t) { return std::cos(t - c) * std::cos(k * t); },
                                a + p * h, a + (p + 1) * h);
          im -= Rule::integrate([&](double t) { return std::cos(t - c) * std::sin(k * t); },
                                a + p * h, a + (p + 1) * h);
        }
      }
      re /= 2.0 * kPi;
      im /= 2.0 * kPi;
      worst = std::max(worst, std::hypot(re - kernel_fourier(r, k), im));
    }
  }
  return certificate("fourier", {{"orders", {2, 3, 4, 6}}, {"max_abs_k", 12}}, worst, 1e-9,
                     worst <= 1e-9);
}

Json verify_deconvolve() {
  const TrigPolynomial g = TrigPolynomial::from_cos_sin(0.5, {0.0, 0.5}, {});
  const TrigPolynomial c = deconvolve(2, g);
  const TrigPolynomial expected = TrigPolynomial::from_cos_sin(kPi / 4, {0.0, 3 * kPi / 4}, {});
  const double err = std::max(c.max_coefficient_difference(expected),
                              convolve(2, c).max_coefficient_difference(g));
  return certificate("deconvolve", {{"order", 2}, {"target", "cos^2"}}, err, 1e-12, err <= 1e-12);
}

Json verify_gegenbauer() {
  bool signs_ok = true;
  double worst_odd = 0.0;
  Json params = {{"dims", {3, 4, 5}}, {"max_m", 6}};
  for (int d : {3, 4, 5}) {
    const GegenbauerTable table(d, 12);
    for (int m = 1; m <= 6; ++m) {
      const double c = table.coefficient(2 * m);
      const double sign = (m % 2 == 1) ? 1.0 : -1.0;
      if (!(std::abs(c) > 1e-12 && c * sign > 0)) signs_ok = false;
      worst_odd = std::max(worst_odd, std::abs(table.coefficient(2 * m - 1)));
    }
  }
  using Rule = boost::math::quadrature::gauss<double, 30>;
  const GegenbauerTable d3(3, 2);
  const double oracle = Rule::integrate([&](double t) { return 2.0 * t * d3.evaluate(2, t); }, 0.0, 1.0);
  const double err = std::abs(d3.reduced_coefficient(2) - oracle);
  Json cert = certificate("gegenbauer", params, err, 1e-9,
                          signs_ok && worst_odd <= 1e-10 && err <= 1e-9 && std::abs(oracle - 0.25) <= 1e-12);
  cert["signs_ok"] = signs_ok;
  cert["worst_odd"] = worst_odd;
  return cert;
}

Json verify_integral_identity(int n_quad) {
  const std::vector<std::pair<std::string, TrigPolynomial>> targets = {
      {"cos^2", TrigPolynomial::from_cos_sin(0.5, {0.0, 0.5}, {})},
      {"sin^2", TrigPolynomial::from_cos_sin(0.5, {0.0, -0.5}, {})},
      {"cos*sin", TrigPolynomial::from_cos_sin(0.0, {}, {0.0, 0.5})}};
  double worst = 0.0;
  Json per = Json::object();
  for (const auto& [name, g] : targets) {
    const double e = orbitmap::verify_integral_identity(2, g, deconvolve(2, g), 256, n_quad);
    per[name] = e;
    worst = std::max(worst, e);
  }
  Json cert = certificate("integral-identity", {{"order", 2}, {"n_quad", n_quad}, {"n_theta", 256}},
                          worst, 1e-6, worst <= 1e-6);
  cert["per_target"] = per;
  return cert;
}

Json verify_riemann_rate(std::size_t samples, std::uint64_t seed) {
  const GroupSpec group = GroupSpec::planar_rotation(2);
  const TrigPolynomial c = deconvolve(2, TrigPolynomial::from_cos_sin(0.5, {0.0, 0.5}, {}));
  const auto target = [](const VectorRef& x) { return x[0] * x[0] / x.norm(); };
  const auto target_gradient = [](const VectorRef& x) {
    const double r = x.norm();
    Vector g(2);
    g << 2 * x[0] / r - x[0] * x[0] * x[0] / (r * r * r), -x[0] * x[0] * x[1] / (r * r * r);
    return g;
  };
  std::vector<double> eps, lip;
  Json points = Json::array();
  for (int n : {32, 64, 128, 256, 512}) {
    const SpherePartition part = make_partition(2, n);
    const RiemannBank rb = riemann_bank(group, circle_density(c), part);
    const ScalarMap err = riemann_error_map(rb, 0, target, target_gradient);
    const LipschitzEstimate est = lip_norm_estimate(err, 2, samples, stream_seed(seed, "riemann-rate"));
    eps.push_back(part.diameter_bound);
    lip.push_back(est.value);
    points.push_back({{"n", n}, {"epsilon", part.diameter_bound}, {"lip", est.value},
                      {"skipped", est.skipped}});
  }
  const double slope = loglog_slope(eps, lip);
  Json cert = certificate("riemann-rate", {{"order", 2}, {"samples", samples}}, slope, 0.8, slope >= 0.8);
  cert["points"] = points;
  return cert;
}

Json verify_weyl(std::uint64_t seed) {
  const GroupSpec group = GroupSpec::sign_flip(3);
  Rng rng = make_rng(seed, "verify-weyl");
  const PointSet x = gaussian_matrix(rng, 3, 40);
  const PairwiseDistances q = PairwiseDistances::compute(group, x);
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100; ++t) {
    const FilterBank f(group, gaussian_matrix(rng, 6, 3));
    const FilterBank g(group, gaussian_matrix(rng, 6, 3));
    const WeylReport w = weyl_check(f.apply_all(x), g.apply_all(x), q);
    worst = std::min({worst, w.alpha_margin, w.beta_margin});
  }
  return certificate("weyl", {{"group", group.name()}, {"pairs_of_maps", 100}, {"points", 40}}, worst,
                     -1e-10, worst >= -1e-10);
}

Json verify_metric_axioms(std::uint64_t seed) {
  const std::vector<GroupSpec> groups = {
      GroupSpec::sign_flip(3),         GroupSpec::permutation(4),  GroupSpec::cyclic_shift(5),
      GroupSpec::planar_rotation(5),   GroupSpec::phase_circle(2), GroupSpec::orthogonal_tuple(2, 3),
      GroupSpec::shape_group(5),       GroupSpec::hyperoctahedral_signs(3)};
  double worst = 0.0;
  Json names = Json::array();
  for (const GroupSpec& g : groups) {
    Rng rng = make_rng(seed, "verify-metric-" + g.name());
    const MetricAxiomReport r = check_metric_axioms(g, gaussian_matrix(rng, g.ambient_dim(), 10));
    worst = std::max({worst, r.worst_symmetry, r.worst_triangle});
    names.push_back(g.name());
  }
  return certificate("metric-axioms", {{"groups", names}, {"points", 10}}, worst, 1e-9, worst <= 1e-9);
}

Json verify_example_1_2(std::size_t samples, std::uint64_t seed) {
  const LinearOfBankModel model = staircase_sort_model(3);
  const GroupSpec group = GroupSpec::permutation(3);
  Rng rng = make_rng(seed, "verify-example");
  double worst = 0.0;
  for (std::size_t t = 0; t < samples; ++t) {
    const Vector x = gaussian_vector(rng, 3);
    worst = std::max(worst, (lmf_apply(model.linear, model.bank, x) - weyl_sort(group, x)).cwiseAbs().maxCoeff());
  }
  return certificate("example-1-2", {{"d", 3}, {"samples", samples}}, worst, 1e-12, worst <= 1e-12);
}

// ---------------------------------------------------------------- shapes

std::vector<PolygonShape> load_shapes(const ExperimentConfig& cfg, Json* report) {
  const int k = cfg.get_int("shapes.k");
  std::vector<PolygonShape> shapes;
  if (cfg.has("shapes.input")) {
    const IngestReport ing = ingest(cfg.get("shapes.input"), shape_format_from_string(cfg.get("shapes.format")));
    Json rejected = ing.rejected;
    for (const RawPolygon& p : ing.polygons) shapes.push_back(resample(p, k));
    if (report != nullptr) {
      *report = {{"source", cfg.get("shapes.input")},
                 {"accepted", ing.polygons.size()},
                 {"rejected_count", ing.rejected.size()},
                 {"rejected", rejected},
                 {"warnings", ing.warnings}};
    }
  } else {
    shapes = synth_mixture(cfg.get_int("shapes.count"), k, cfg.seed());
    if (report != nullptr) *report = {{"source", "synthetic"}, {"accepted", shapes.size()}};
  }
  const std::string mode = cfg.get("shapes.scale");
  if (mode == "unit") {
    for (PolygonShape& s : shapes) s = unit_scale(s);
  } else if (mode != "raw") {
    throw ParseError("shapes.scale must be raw or unit, got '" + mode + "'");
  }
  if (shapes.size() < 2) throw DegenerateData("need at least two shapes");
  return shapes;
}

std::string shapes_csv(const std::vector<PolygonShape>& shapes) {
  std::ostringstream os;
  os.precision(17);
  const int k = shapes.empty() ? 0 : shapes.front().k();
  os << "id,class";
  for (int i = 0; i < k; ++i) os << ",x" << i << ",y" << i;
  os << '\n';
  for (const PolygonShape& s : shapes) {
    os << s.id << ',' << s.class_label.value_or("");
    for (const Point2& p : s.vertices) os << ',' << p.x() << ',' << p.y();
    os << '\n';
  }
  return os.str();
}

}  // namespace

PointSet gaussian_points(const GroupSpec& group, std::size_t n, std::uint64_t seed,
                         std::string_view stream) {
  Rng rng = make_rng(seed, stream);
  return gaussian_matrix(rng, group.ambient_dim(), static_cast<Eigen::Index>(n));
}

PolyRow default_poly_row(const GroupSpec& group) {
  switch (group.kind()) {
    case GroupKind::kSignFlip: return {PolyFamily::kOuterProduct, group.dim(), 1};
    case GroupKind::kPermutation: return {PolyFamily::kPowerSums, group.dim(), 1};
    case GroupKind::kCyclicShift: return {PolyFamily::kBispectrum, group.dim(), 1};
    case GroupKind::kPlanarRotation: return {PolyFamily::kComplexPower, group.order_param(), 1};
    case GroupKind::kPhaseCircle: return {PolyFamily::kHermitianOuter, group.dim(), 1};
    case GroupKind::kOrthogonalTuple:
      return {PolyFamily::kGram, group.dim(), group.tuple_size()};
    default:
      throw ParseError("no invariant polynomial family for " + group.name());
  }
}

const std::vector<std::string>& verify_checks() {
  static const std::vector<std::string> checks = {"fourier", "deconvolve", "gegenbauer",
                                                  "integral-identity", "riemann-rate", "weyl",
                                                  "metric-axioms", "example-1-2"};
  return checks;
}

CommandResult cmd_distortion(const ExperimentConfig& cfg) {
  const GroupSpec group = cfg.group();
  const std::string name = cfg.get("model");
  const PointSet x_test = gaussian_points(group, static_cast<std::size_t>(cfg.get_int("data.test_size")),
                                          cfg.seed(), "test-set");
  std::optional<EmbeddingModel> model;
  Json extra = Json::object();
  if (cfg.has("model.file")) {
    model = load_model(cfg.get("model.file"));
  } else if (is_trained(name)) {
    const PointSet x_train = gaussian_points(
        group, static_cast<std::size_t>(cfg.get_int("data.train_size")), cfg.seed(), "train-set");
    const TrainResult tr = train(cfg.train_config(), group, x_train);
    extra["train_dist"] = finite_or_string(tr.train_report.dist);
    model = tr.model;
  } else if (name == "rmf") {
    const RmfResult r = rmf_search(group, cfg.get_int("train.m"),
                                   static_cast<std::size_t>(cfg.get_int("rmf.draws")), x_test,
                                   stream_seed(cfg.seed(), "rmf"));
    extra["best_draw"] = r.best_draw;
    model = MaxFilterModel{r.bank};
  } else {
    model = fixed_model(name, group, cfg);
  }
  require_dim(model->input_dim(), group.ambient_dim(), "model input");
  const DistortionReport report = evaluate(*model, group, x_test);
  CommandResult out;
  const std::string csv = distortion_csv_header() + "\n" +
                          distortion_csv_row(group.name(), name, static_cast<std::size_t>(model->output_dim()),
                                             report, cfg.seed()) + "\n";
  Json j = {{"config", cfg.to_json()}, {"group", group.name()}, {"model", name},
            {"report", to_json(report)}, {"extra", extra}};
  out.summary = csv;
  out.files = {{"distortion.csv", csv}, {"distortion.json", dump(j)}};
  return out;
}

CommandResult cmd_train(const ExperimentConfig& cfg) {
  const GroupSpec group = cfg.group();
  const TrainConfig tc = cfg.train_config();
  const PointSet x_train = gaussian_points(
      group, static_cast<std::size_t>(cfg.get_int("data.train_size")), cfg.seed(), "train-set");
  const PointSet x_test = gaussian_points(
      group, static_cast<std::size_t>(cfg.get_int("data.test_size")), cfg.seed(), "test-set");
  std::optional<EmbeddingModel> warm;
  if (cfg.has("model.file")) warm = load_model(cfg.get("model.file"));
  const TrainResult tr = train(tc, group, x_train, warm);
  const DistortionReport test = evaluate(tr.model, group, x_test);
  Json restarts = Json::array();
  for (double d : tr.restart_dists) restarts.push_back(finite_or_string(d));
  Json report = {{"config", cfg.to_json()},
                 {"group", group.name()},
                 {"architecture", to_string(tc.arch)},
                 {"train", to_json(tr.train_report)},
                 {"test", to_json(test)},
                 {"restart_dists", restarts},
                 {"best_restart", tr.best_restart}};
  CommandResult out;
  std::ostringstream os;
  os.precision(6);
  os << to_string(tc.arch) << " on " << group.name() << ": train dist " << tr.train_report.dist
     << ", test dist " << test.dist << "\n";
  out.summary = os.str();
  out.files = {{"model.json", dump(to_json(tr.model))}, {"train_report.json", dump(report)}};
  return out;
}

CommandResult cmd_table(const ExperimentConfig& cfg, int table_id) {
  const double scale = cfg.get_double("table.scale");
  if (!(scale > 0.0)) throw ParseError("table.scale must be positive");
  const bool shapes = table_id == 6 || table_id == 7;
  const std::vector<TableRow> rows = table_rows(table_id, scale);
  std::vector<std::string> columns = {"mf", "lrmf", "lmf", "relu", "rmf"};
  if (!shapes) {
    columns.push_back("poly");
    columns.push_back("hpoly");
  }
  const std::uint64_t seed = cfg.seed();
  TrainConfig base;
  base.steps = scaled(cfg.get_int("train.steps"), scale, 20);
  base.restarts = scaled(cfg.get_int("train.restarts"), scale, 1);
  base.learning_rate = cfg.get_double("train.learning_rate");
  base.batch_pairs = cfg.get_u64("train.batch_pairs");
  base.augmentation_samples = cfg.get_int("train.augmentation_samples");
  const auto train_size = static_cast<std::size_t>(scaled(cfg.get_int("data.train_size"), scale, 30));
  const auto test_size = static_cast<std::size_t>(scaled(cfg.get_int("data.test_size"), scale, 50));
  const auto draws = static_cast<std::size_t>(scaled(cfg.get_int("rmf.draws"), scale, 10));
  const int shape_count = scaled(cfg.get_int("shapes.count"), scale, 20);

  std::ostringstream csv;
  csv.precision(6);
  csv << "table,row,group,n,model,dist\n";
  std::optional<LinearOfBankModel> previous_lmf;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const TableRow& row = rows[r];
    PointSet x_train, x_test;
    if (shapes) {
      x_train = shapes_to_points(synth_mixture(shape_count, row.group.tuple_size(), seed));
      x_test = x_train;
    } else {
      x_train = gaussian_points(row.group, train_size, seed, "train-set");
      x_test = gaussian_points(row.group, test_size, seed, "test-set");
    }
    const PairwiseDistances q = PairwiseDistances::compute(row.group, x_test);
    for (const std::string& col : columns) {
      const std::string stream = "table-" + std::to_string(table_id) + "-" + std::to_string(r) + "-" + col;
      double dist = std::numeric_limits<double>::infinity();
      if (is_trained(col)) {
        TrainConfig tc = base;
        tc.arch = architecture_from_string(col);
        tc.m = row.n;
        tc.n = row.n;
        tc.seed = stream_seed(seed, stream);
        std::optional<EmbeddingModel> warm;
        Rng pad_rng = make_rng(seed, stream + "-pad");
        if (col == "lmf" && previous_lmf && previous_lmf->bank.group() == row.group &&
            previous_lmf->bank.size() <= row.n) {
          warm = pad_lmf(*previous_lmf, row.n, row.n, pad_rng);
        }
        const TrainResult tr = train(tc, row.group, x_train, warm);
        std::optional<EmbeddingModel> best;
        std::vector<EmbeddingModel> candidates = tr.restart_models;
        if (warm) candidates.push_back(*warm);
        for (const EmbeddingModel& m : candidates) {
          const double d = test_distortion(m, x_test, q);
          if (d < dist) {
            dist = d;
            best = m;
          }
        }
        if (col == "lmf" && best) previous_lmf = std::get<LinearOfBankModel>(best->variant());
      } else if (col == "rmf") {
        dist = rmf_search(row.group, row.n, draws, x_test, stream_seed(seed, stream)).report.dist;
      } else {
        dist = test_distortion(fixed_model(col, row.group, cfg), x_test, q);
      }
      csv << table_id << ",\"" << row.label << "\",\"" << row.group.name() << "\"," << row.n << ','
          << col << ',' << dist << '\n';
    }
  }
  CommandResult out;
  out.summary = csv.str();
  out.files = {{"table-" + std::to_string(table_id) + ".csv", csv.str()}};
  return out;
}

CommandResult cmd_verify(const ExperimentConfig& cfg, const std::string& check) {
  const std::uint64_t seed = cfg.seed();
  const auto samples = static_cast<std::size_t>(cfg.get_int("verify.samples"));
  Json cert;
  if (check == "fourier") {
    cert = verify_fourier();
  } else if (check == "deconvolve") {
    cert = verify_deconvolve();
  } else if (check == "gegenbauer") {
    cert = verify_gegenbauer();
  } else if (check == "integral-identity") {
    cert = verify_integral_identity(cfg.get_int("verify.n_quad"));
  } else if (check == "riemann-rate") {
    cert = verify_riemann_rate(samples, seed);
  } else if (check == "weyl") {
    cert = verify_weyl(seed);
  } else if (check == "metric-axioms") {
    cert = verify_metric_axioms(seed);
  } else if (check == "example-1-2") {
    cert = verify_example_1_2(samples, seed);
  } else {
    throw ParseError("unknown check '" + check + "'");
  }
  CommandResult out;
  out.exit_code = cert["pass"].get<bool>() ? kExitOk : kExitCheckFailed;
  out.summary = cert.dump() + "\n";
  out.files = {{"verify-" + check + ".json", dump(cert)}};
  return out;
}

CommandResult cmd_shapes(const ExperimentConfig& cfg, const std::string& subcommand) {
  CommandResult out;
  Json ingest_report;
  if (subcommand == "ingest") {
    if (!cfg.has("shapes.input")) throw ParseError("shapes ingest needs shapes.input");
    const std::vector<PolygonShape> shapes = load_shapes(cfg, &ingest_report);
    out.files = {{"shapes.csv", shapes_csv(shapes)}, {"ingest_report.json", dump(ingest_report)}};
    out.summary = "ingested " + std::to_string(shapes.size()) + " shapes, rejected " +
                  std::to_string(ingest_report.value("rejected_count", std::size_t{0})) + "\n";
    return out;
  }
  if (subcommand != "embed" && subcommand != "pca") {
    throw ParseError("shapes subcommand must be ingest, embed or pca");
  }
  const std::vector<PolygonShape> shapes = load_shapes(cfg, &ingest_report);
  const GroupSpec group = GroupSpec::shape_group(cfg.get_int("shapes.k"));
  const PointSet x = shapes_to_points(shapes);
  std::optional<EmbeddingModel> model;
  if (cfg.has("model.file")) {
    model = load_model(cfg.get("model.file"));
  } else {
    model = train(cfg.train_config(), group, x).model;
    out.files.push_back({"model.json", dump(to_json(*model))});
  }
  const Matrix emb = shape_embed(*model, shapes);
  const DistortionReport report = empirical_distortion(Matrix(emb.transpose()), PairwiseDistances::compute(group, x));
  std::ostringstream emb_csv;
  write_embedding_csv(emb_csv, shapes, emb);
  out.files.push_back({"embedding.csv", emb_csv.str()});
  out.files.push_back({"shapes_report.json", dump({{"config", cfg.to_json()},
                                                   {"input", ingest_report},
                                                   {"model", model->kind_name()},
                                                   {"distortion", to_json(report)}})});
  std::ostringstream summary;
  summary.precision(6);
  summary << "embedded " << shapes.size() << " shapes, distortion " << report.dist << "\n";
  if (subcommand == "pca") {
    const PcaResult pca = pca_project(emb, 2);
    std::ostringstream pca_csv, svg;
    write_pca_csv(pca_csv, shapes, pca);
    write_pca_svg(svg, shapes, pca);
    out.files.push_back({"pca.csv", pca_csv.str()});
    out.files.push_back({"pca.svg", svg.str()});
    summary << "pca rank " << pca.rank << ", explained " << pca.explained_variance.transpose() << "\n";
  }
  out.summary = summary.str();
  return out;
}

void commit_outputs(const std::string& dir, const std::vector<OutputFile>& files) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (const OutputFile& f : files) {
    const fs::path target = fs::path(dir) / f.name;
    const fs::path tmp = fs::path(dir) / ("." + f.name + ".tmp-" + std::to_string(::getpid()));
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      if (!os) throw Error("cannot write '" + tmp.string() + "'");
      os << f.content;
      os.flush();
      if (!os) throw Error("failed writing '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Low-distortion embeddings of orbit spaces"};
  app.fallthrough();
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> assignments;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--seed", seed, "root seed (overrides the config)");
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--set", assignments, "override a config key, key=value (repeatable)");

  int table_id = 0;
  std::string check, subcommand;
  CLI::App* distortion = app.add_subcommand("distortion", "evaluate a model on a fresh test set");
  CLI::App* train_cmd = app.add_subcommand("train", "train a model and report distortions");
  CLI::App* table = app.add_subcommand("table", "reproduce a results table at desk scale");
  table->add_option("id", table_id, "table number (2-7)")->required()->check(CLI::Range(2, 7));
  CLI::App* verify = app.add_subcommand("verify", "run a numerical certificate");
  verify->add_option("check", check, "check name")->required()->check(CLI::IsMember(verify_checks()));
  CLI::App* shapes = app.add_subcommand("shapes", "polygon pipeline");
  shapes->add_option("subcommand", subcommand, "ingest, embed or pca")
      ->required()
      ->check(CLI::IsMember({"ingest", "embed", "pca"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  CommandResult result;
  std::string dir;
  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig() : ExperimentConfig::load(config_path);
    for (const std::string& a : assignments) cfg.set_assignment(a);
    if (seed) cfg.set("seed", std::to_string(*seed));
    if (!out_dir.empty()) cfg.set("out", out_dir);
    dir = cfg.get("out");
    if (distortion->parsed()) {
      result = cmd_distortion(cfg);
    } else if (train_cmd->parsed()) {
      result = cmd_train(cfg);
    } else if (table->parsed()) {
      result = cmd_table(cfg, table_id);
    } else if (verify->parsed()) {
      result = cmd_verify(cfg, check);
    } else {
      result = cmd_shapes(cfg, subcommand);
    }
    commit_outputs(dir, result.files);
  } catch (const ParseError& e) {
    std::cerr << "orbitmap: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "orbitmap: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  std::cout << result.summary;
  return result.exit_code;
}

}  // namespace orbitmap::cli
