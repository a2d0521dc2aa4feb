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

#include "orbitmap/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "orbitmap/parallel.hpp"
#include "orbitmap/rng.hpp"

namespace orbitmap {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;
constexpr std::size_t kFullAugmentationMaxOrder = 64;

class Adam {
 public:
  void step(Matrix& p, const Matrix& g, double lr) {
    if (m_.size() == 0) {
      m_ = Matrix::Zero(p.rows(), p.cols());
      v_ = Matrix::Zero(p.rows(), p.cols());
    }
    ++t_;
    m_ = kAdamBeta1 * m_ + (1.0 - kAdamBeta1) * g;
    v_ = kAdamBeta2 * v_ + (1.0 - kAdamBeta2) * g.cwiseProduct(g);
    const double c1 = 1.0 - std::pow(kAdamBeta1, t_);
    const double c2 = 1.0 - std::pow(kAdamBeta2, t_);
    p.array() -= lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + kAdamEps);
  }

 private:
  Matrix m_, v_;
  int t_ = 0;
};

struct Params {
  Matrix templates;  // m x D
  Matrix linear;     // n x m
  Matrix hidden;     // m x D
  Matrix output;     // n x m
};

// Rescales templates to unit norm; the linear map absorbs the scale, which is
// exact because max filters are positively homogeneous in the template.
void normalize_templates(Matrix& templates, Matrix* linear) {
  for (Eigen::Index k = 0; k < templates.rows(); ++k) {
    const double norm = templates.row(k).norm();
    if (norm == 0.0) continue;
    templates.row(k) /= norm;
    if (linear != nullptr) linear->col(k) *= norm;
  }
}

Params init_params(const TrainConfig& cfg, Eigen::Index dim, Rng& rng) {
  Params p;
  const double m = cfg.m;
  switch (cfg.arch) {
    case Architecture::kMF:
      p.templates = gaussian_matrix(rng, cfg.m, dim);
      normalize_templates(p.templates, nullptr);
      break;
    case Architecture::kLRMF:
    case Architecture::kLMF:
      p.templates = gaussian_matrix(rng, cfg.m, dim);
      p.linear = gaussian_matrix(rng, cfg.n, cfg.m) / std::sqrt(m);
      if (cfg.arch == Architecture::kLMF) normalize_templates(p.templates, &p.linear);
      break;
    case Architecture::kReLU:
      p.hidden = gaussian_matrix(rng, cfg.m, dim) / std::sqrt(static_cast<double>(dim));
      p.output = gaussian_matrix(rng, cfg.n, cfg.m) / std::sqrt(m);
      break;
  }
  return p;
}

Params params_from_model(const TrainConfig& cfg, const EmbeddingModel& model, Eigen::Index dim) {
  const auto mismatch = [&] {
    return InvalidArgument("warm start model '" + model.kind_name() +
                           "' does not match architecture " + to_string(cfg.arch));
  };
  Params p;
  const auto& v = model.variant();
  switch (cfg.arch) {
    case Architecture::kMF: {
      const auto* mf = std::get_if<MaxFilterModel>(&v);
      if (mf == nullptr) throw mismatch();
      p.templates = mf->bank.templates();
      normalize_templates(p.templates, nullptr);
      break;
    }
    case Architecture::kLRMF:
    case Architecture::kLMF: {
      const auto* lmf = std::get_if<LinearOfBankModel>(&v);
      if (lmf == nullptr) throw mismatch();
      p.templates = lmf->bank.templates();
      p.linear = lmf->linear.matrix();
      if (cfg.arch == Architecture::kLMF) normalize_templates(p.templates, &p.linear);
      break;
    }
    case Architecture::kReLU: {
      const auto* relu = std::get_if<ReluNetModel>(&v);
      if (relu == nullptr) throw mismatch();
      p.hidden = relu->hidden;
      p.output = relu->output;
      break;
    }
  }
  const Eigen::Index in = cfg.arch == Architecture::kReLU ? p.hidden.cols() : p.templates.cols();
  const Eigen::Index width = cfg.arch == Architecture::kReLU ? p.hidden.rows() : p.templates.rows();
  require_dim(in, dim, "warm start input dimension");
  require_dim(width, cfg.m, "warm start width m");
  if (cfg.arch == Architecture::kLMF || cfg.arch == Architecture::kLRMF) {
    require_dim(p.linear.rows(), cfg.n, "warm start output dimension n");
  } else if (cfg.arch == Architecture::kReLU) {
    require_dim(p.output.rows(), cfg.n, "warm start output dimension n");
  }
  return p;
}

EmbeddingModel to_model(Architecture arch, const GroupSpec& group, const Params& p) {
  switch (arch) {
    case Architecture::kMF:
      return MaxFilterModel{FilterBank(group, p.templates)};
    case Architecture::kLRMF:
    case Architecture::kLMF:
      return LinearOfBankModel{LinearMap(p.linear), FilterBank(group, p.templates)};
    case Architecture::kReLU:
      return ReluNetModel{p.hidden, p.output};
  }
  throw InvalidArgument("unknown architecture");
}

// Points the loss sees in one step, with the training index each came from.
struct PointBatch {
  PointSet points;
  std::vector<std::size_t> owner;
  PairwiseDistances quotient;
};

PointBatch plain_batch(const PointSet& x, const PairwiseDistances& q) {
  PointBatch b{x, {}, q};
  b.owner.resize(static_cast<std::size_t>(x.cols()));
  for (std::size_t i = 0; i < b.owner.size(); ++i) b.owner[i] = i;
  return b;
}

PointBatch augmented_batch(const PointSet& x, const PairwiseDistances& q,
                           const std::vector<GroupElement>& elements, const GroupSpec& group) {
  const auto n = static_cast<std::size_t>(x.cols());
  const std::size_t per = elements.size() / n;
  PointBatch b;
  b.points.resize(x.rows(), static_cast<Eigen::Index>(n * per));
  b.owner.resize(n * per);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < per; ++s) {
      const std::size_t a = i * per + s;
      b.points.col(static_cast<Eigen::Index>(a)) =
          group.apply(elements[i * per + s], x.col(static_cast<Eigen::Index>(i)));
      b.owner[a] = i;
    }
  }
  const std::size_t total = n * per;
  std::vector<double> values;
  values.reserve(total * (total - 1) / 2);
  for (std::size_t a = 0; a < total; ++a) {
    for (std::size_t c = a + 1; c < total; ++c) {
      const std::size_t i = b.owner[a], j = b.owner[c];
      values.push_back(i == j ? 0.0 : (i < j ? q(i, j) : q(j, i)));
    }
  }
  b.quotient = PairwiseDistances::from_values(total, std::move(values));
  return b;
}

struct Extremes {
  double alpha = std::numeric_limits<double>::infinity();
  double beta = -std::numeric_limits<double>::infinity();
  IndexPair alpha_pair, beta_pair;
};

Extremes scan_sampled_pairs(const Matrix& features, const PairwiseDistances& q,
                            std::size_t n_pairs, Rng& rng) {
  const std::size_t n = q.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  Extremes e;
  for (std::size_t t = 0; t < n_pairs; ++t) {
    std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    const double qd = q(i, j);
    if (qd <= kSameOrbitTolerance) continue;
    const double r = (features.col(static_cast<Eigen::Index>(i)) -
                      features.col(static_cast<Eigen::Index>(j))).norm() / qd;
    if (r < e.alpha) {
      e.alpha = r;
      e.alpha_pair = {i, j};
    }
    if (r > e.beta) {
      e.beta = r;
      e.beta_pair = {i, j};
    }
  }
  return e;
}

class Trainer {
 public:
  Trainer(const TrainConfig& cfg, const GroupSpec& group, const PointSet& x,
          const PairwiseDistances& q)
      : cfg_(cfg), group_(group), x_(x), q_(q) {
    if (cfg.arch == Architecture::kReLU) {
      if (group.is_enumerable() && group.order() <= kFullAugmentationMaxOrder) {
        const std::vector<GroupElement> all = group.enumerate();
        std::vector<GroupElement> elements;
        for (Eigen::Index i = 0; i < x.cols(); ++i)
          elements.insert(elements.end(), all.begin(), all.end());
        fixed_batch_ = augmented_batch(x, q, elements, group);
        resample_ = false;
      } else {
        resample_ = true;
      }
    } else {
      fixed_batch_ = plain_batch(x, q);
    }
  }

  // Runs one restart and returns its best iterate.
  Params run(Params p, Rng& rng) {
    Adam adam_a, adam_b;
    Params best = p;
    double best_dist = std::numeric_limits<double>::infinity();
    const int eval_every = cfg_.batch_pairs == 0 ? 1 : std::max(1, cfg_.steps / 50);
    PointBatch sampled;
    for (int step = 0; step <= cfg_.steps; ++step) {
      const PointBatch* batch = &fixed_batch_;
      if (resample_) {
        std::vector<GroupElement> elements;
        for (Eigen::Index i = 0; i < x_.cols(); ++i) {
          auto s = group_.sample(static_cast<std::size_t>(cfg_.augmentation_samples), rng);
          elements.insert(elements.end(), s.begin(), s.end());
        }
        sampled = augmented_batch(x_, q_, elements, group_);
        batch = &sampled;
      }
      Matrix phi;
      const Matrix features = forward(p, batch->points, &phi);

      Extremes e;
      if (cfg_.batch_pairs == 0) {
        const DistortionReport r = empirical_distortion(features, batch->quotient);
        e = {r.alpha, r.beta, r.argmin_pair, r.argmax_pair};
      } else {
        e = scan_sampled_pairs(features, batch->quotient, cfg_.batch_pairs, rng);
      }
      if (step % eval_every == 0 || step == cfg_.steps) {
        const double dist = cfg_.batch_pairs == 0
                                ? (e.alpha > 0 ? e.beta / e.alpha
                                               : std::numeric_limits<double>::infinity())
                                : training_dist(p);
        if (dist < best_dist) {
          best_dist = dist;
          best = p;
        }
      }
      if (step == cfg_.steps || !std::isfinite(e.beta)) break;

      const double lr = cfg_.learning_rate * 0.5 *
                        (1.0 + std::cos(std::numbers::pi * step / cfg_.steps));
      step_params(p, *batch, features, phi, e, lr, adam_a, adam_b);
    }
    return best;
  }

  double training_dist(const Params& p) const {
    const DistortionReport r =
        empirical_distortion(to_model(cfg_.arch, group_, p).embed(x_), q_);
    return r.dist;
  }

 private:
  Matrix forward(const Params& p, const PointSet& pts, Matrix* phi) const {
    if (cfg_.arch == Architecture::kReLU) {
      *phi = (p.hidden * pts).cwiseMax(0.0);
      return p.output * *phi;
    }
    const Matrix yt = p.templates.transpose();
    phi->resize(p.templates.rows(), pts.cols());
    parallel_for(0, static_cast<std::size_t>(pts.cols()), [&](std::size_t a) {
      const auto ai = static_cast<Eigen::Index>(a);
      for (Eigen::Index k = 0; k < yt.cols(); ++k) {
        (*phi)(k, ai) = group_.max_inner(pts.col(ai), yt.col(k));
      }
    });
    if (cfg_.arch == Architecture::kMF) return *phi;
    return p.linear * *phi;
  }

  void step_params(Params& p, const PointBatch& batch, const Matrix& features, const Matrix& phi,
                   const Extremes& e, double lr, Adam& adam_a, Adam& adam_b) const {
    // d/dF of log beta - log alpha, nonzero at the (at most four) attaining points.
    std::vector<std::pair<std::size_t, Vector>> upstream;
    const auto add = [&](const IndexPair& pr, double sign) {
      const auto i = static_cast<Eigen::Index>(pr.i), j = static_cast<Eigen::Index>(pr.j);
      const Vector diff = features.col(i) - features.col(j);
      const double sq = diff.squaredNorm();
      if (sq <= 0.0) return;
      upstream.emplace_back(pr.i, sign * diff / sq);
      upstream.emplace_back(pr.j, -sign * diff / sq);
    };
    add(e.beta_pair, 1.0);
    add(e.alpha_pair, -1.0);

    switch (cfg_.arch) {
      case Architecture::kMF: {
        Matrix g = Matrix::Zero(p.templates.rows(), p.templates.cols());
        for (const auto& [a, u] : upstream) accumulate_templates(p, batch, a, u, g);
        adam_a.step(p.templates, g, lr);
        normalize_templates(p.templates, nullptr);
        break;
      }
      case Architecture::kLRMF:
      case Architecture::kLMF: {
        Matrix gl = Matrix::Zero(p.linear.rows(), p.linear.cols());
        Matrix gy = Matrix::Zero(p.templates.rows(), p.templates.cols());
        for (const auto& [a, u] : upstream) {
          gl += u * phi.col(static_cast<Eigen::Index>(a)).transpose();
          if (cfg_.arch == Architecture::kLMF) {
            accumulate_templates(p, batch, a, p.linear.transpose() * u, gy);
          }
        }
        adam_a.step(p.linear, gl, lr);
        if (cfg_.arch == Architecture::kLMF) {
          adam_b.step(p.templates, gy, lr);
          normalize_templates(p.templates, &p.linear);
        }
        break;
      }
      case Architecture::kReLU: {
        Matrix gw1 = Matrix::Zero(p.hidden.rows(), p.hidden.cols());
        Matrix gw2 = Matrix::Zero(p.output.rows(), p.output.cols());
        for (const auto& [a, u] : upstream) {
          const auto ai = static_cast<Eigen::Index>(a);
          gw2 += u * phi.col(ai).transpose();
          const Vector pre = p.hidden * batch.points.col(ai);
          Vector dh = p.output.transpose() * u;
          for (Eigen::Index t = 0; t < dh.size(); ++t)
            if (pre[t] <= 0.0) dh[t] = 0.0;
          gw1 += dh * batch.points.col(ai).transpose();
        }
        adam_a.step(p.hidden, gw1, lr);
        adam_b.step(p.output, gw2, lr);
        break;
      }
    }
  }

  // g.row(k) += u_k * d/dy_k max_g <x, g y_k>, the aligned copy of x.
  void accumulate_templates(const Params& p, const PointBatch& batch, std::size_t a,
                            const Vector& u, Matrix& g) const {
    const Vector x = batch.points.col(static_cast<Eigen::Index>(a));
    for (Eigen::Index k = 0; k < p.templates.rows(); ++k) {
      if (u[k] == 0.0) continue;
      const Vector y = p.templates.row(k).transpose();
      g.row(k) += u[k] * group_.argmax_inner(y, x).maximizer.transpose();
    }
  }

  const TrainConfig& cfg_;
  const GroupSpec& group_;
  const PointSet& x_;
  const PairwiseDistances& q_;
  PointBatch fixed_batch_;
  bool resample_ = false;
};

}  // namespace

std::string to_string(Architecture arch) {
  switch (arch) {
    case Architecture::kMF: return "mf";
    case Architecture::kLRMF: return "lrmf";
    case Architecture::kLMF: return "lmf";
    case Architecture::kReLU: return "relu";
  }
  return "unknown";
}

Architecture architecture_from_string(const std::string& s) {
  for (Architecture a : {Architecture::kMF, Architecture::kLRMF, Architecture::kLMF,
                         Architecture::kReLU}) {
    if (to_string(a) == s) return a;
  }
  throw ParseError("unknown architecture '" + s + "'");
}

void TrainConfig::validate() const {
  if (m < 1) throw InvalidArgument("m must be positive");
  if (n < 1) throw InvalidArgument("n must be positive");
  if ((arch == Architecture::kLMF || arch == Architecture::kLRMF) && m < n) {
    throw InvalidArgument("m must be at least n for lmf and lrmf");
  }
  if (steps < 1) throw InvalidArgument("steps must be at least 1");
  if (restarts < 1) throw InvalidArgument("restarts must be at least 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument("learning_rate must be positive and finite");
  }
  if (augmentation_samples < 1) throw InvalidArgument("augmentation_samples must be at least 1");
}

TrainResult train(const TrainConfig& cfg, const GroupSpec& group, const PointSet& x_train,
                  const std::optional<EmbeddingModel>& warm_start) {
  cfg.validate();
  require_dim(x_train.rows(), group.ambient_dim(), "training points");
  const PairwiseDistances q = PairwiseDistances::compute(group, x_train);
  if (std::none_of(q.values().begin(), q.values().end(),
                   [](double v) { return v > kSameOrbitTolerance; })) {
    throw DegenerateData("all training points lie in one orbit");
  }
  Trainer trainer(cfg, group, x_train, q);

  const auto restarts = static_cast<std::size_t>(cfg.restarts);
  std::vector<Params> best(restarts);
  parallel_for(0, restarts, [&](std::size_t r) {
    Rng rng = make_rng(cfg.seed, "train-restart-" + std::to_string(r));
    Params init = (r == 0 && warm_start) ? params_from_model(cfg, *warm_start, x_train.rows())
                                         : init_params(cfg, x_train.rows(), rng);
    best[r] = trainer.run(std::move(init), rng);
  });

  TrainResult result{to_model(cfg.arch, group, best[0]), {}, {}, {}, 0};
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    EmbeddingModel model = to_model(cfg.arch, group, best[r]);
    const DistortionReport report = empirical_distortion(model.embed(x_train), q);
    result.restart_dists.push_back(report.dist);
    result.restart_models.push_back(model);
    if (report.dist < best_dist || r == 0) {
      best_dist = report.dist;
      result.model = std::move(model);
      result.train_report = report;
      result.best_restart = r;
    }
  }
  return result;
}

DistortionReport evaluate(const EmbeddingModel& model, const GroupSpec& group,
                          const PointSet& x_test) {
  return empirical_distortion(model, group, x_test);
}

RmfResult rmf_search(const GroupSpec& group, int m, std::size_t n_draws, const PointSet& x_test,
                     std::uint64_t seed) {
  if (n_draws < 1) throw InvalidArgument("n_draws must be at least 1");
  if (m < 1) throw InvalidArgument("m must be positive");
  require_dim(x_test.rows(), group.ambient_dim(), "test points");
  const PairwiseDistances q = PairwiseDistances::compute(group, x_test);
  std::optional<RmfResult> best;
  for (std::size_t t = 0; t < n_draws; ++t) {
    Rng rng = make_rng(seed, "rmf-draw-" + std::to_string(t));
    FilterBank bank(group, gaussian_matrix(rng, m, group.ambient_dim()));
    const double bound = best ? best->report.dist : std::numeric_limits<double>::infinity();
    const std::optional<DistortionReport> r = bounded_distortion(bank.apply_all(x_test), q, bound);
    if (r && (!best || r->dist < best->report.dist)) best = RmfResult{std::move(bank), *r, t};
  }
  return *best;
}

LinearOfBankModel staircase_sort_model(int d) {
  if (d < 1) throw InvalidArgument("dimension must be positive");
  Matrix templates = Matrix::Zero(d, d);
  Matrix inverse = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    templates.row(i).head(i + 1).setOnes();
    inverse(i, i) = 1.0;
    if (i > 0) inverse(i, i - 1) = -1.0;
  }
  return {LinearMap(std::move(inverse)), FilterBank(GroupSpec::permutation(d), std::move(templates))};
}

}  // namespace orbitmap
