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


#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "orbitmap/serialization.hpp"
#include "orbitmap/training.hpp"

using namespace orbitmap;

namespace {

TrainConfig small(Architecture arch, int m, int n, int steps, int restarts) {
  TrainConfig cfg;
  cfg.arch = arch;
  cfg.m = m;
  cfg.n = n;
  cfg.steps = steps;
  cfg.restarts = restarts;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  auto cfg = small(Architecture::kLMF, 4, 8, 10, 1);
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = small(Architecture::kLRMF, 4, 8, 10, 1);
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = small(Architecture::kMF, 4, 8, 0, 1);
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = small(Architecture::kMF, 4, 8, 10, 0);
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = small(Architecture::kMF, 4, 8, 10, 1);
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.output_dim() == 4);
  CHECK(architecture_from_string(to_string(Architecture::kLRMF)) == Architecture::kLRMF);
  CHECK_THROWS(architecture_from_string("cnn"));
}

TEST_CASE("degenerate training data is rejected") {
  PointSet x(2, 3);
  x << 1, -1, 2, 0, 0, 0;  // one same-orbit pair, which is dropped
  CHECK_NOTHROW(train(small(Architecture::kMF, 2, 2, 2, 1), GroupSpec::sign_flip(2), x));
  PointSet same(2, 2);
  same << 1, -1, 0, 0;
  CHECK_THROWS(train(small(Architecture::kMF, 2, 2, 2, 1), GroupSpec::sign_flip(2), same));
}

TEST_CASE("training is deterministic") {
  const auto g = GroupSpec::sign_flip(2);
  const auto x = oracle::gaussian(2, 40, 1);
  for (auto arch : {Architecture::kMF, Architecture::kLRMF, Architecture::kLMF, Architecture::kReLU}) {
    CAPTURE(to_string(arch));
    const auto cfg = small(arch, 6, 4, 40, 2);
    const auto a = train(cfg, g, x), b = train(cfg, g, x);
    CHECK(to_json(a.model).dump() == to_json(b.model).dump());
    CHECK(a.train_report.dist == b.train_report.dist);
  }
}

TEST_CASE("best restart is the minimum over restarts") {
  const auto g = GroupSpec::cyclic_shift(3);
  const auto x = oracle::gaussian(3, 40, 2);
  const auto r = train(small(Architecture::kLMF, 6, 3, 60, 4), g, x);
  REQUIRE(r.restart_dists.size() == 4);
  REQUIRE(r.restart_models.size() == 4);
  const double best = *std::min_element(r.restart_dists.begin(), r.restart_dists.end());
  CHECK(r.train_report.dist == best);
  CHECK(r.restart_dists[r.best_restart] == best);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(evaluate(r.restart_models[i], g, x).dist == doctest::Approx(r.restart_dists[i]).epsilon(1e-12));
  // Restart r does not depend on how many restarts follow it.
  const auto r2 = train(small(Architecture::kLMF, 6, 3, 60, 2), g, x);
  CHECK(r2.restart_dists[0] == r.restart_dists[0]);
  CHECK(r2.restart_dists[1] == r.restart_dists[1]);
}

TEST_CASE("trained distortion is invariant to rescaling") {
  const auto g = GroupSpec::sign_flip(3);
  const auto x = oracle::gaussian(3, 50, 3);
  const auto r = train(small(Architecture::kLMF, 8, 4, 60, 1), g, x);
  for (double c : {1e-3, 0.5, 7.0}) CHECK(std::abs(evaluate(r.model.scaled(c), g, x).dist - r.train_report.dist) <= 1e-9);
}

TEST_CASE("architectures produce the expected model kinds") {
  const auto g = GroupSpec::sign_flip(2);
  const auto x = oracle::gaussian(2, 30, 4);
  const auto mf = train(small(Architecture::kMF, 5, 5, 30, 1), g, x).model;
  CHECK(mf.kind_name() == "mf");
  const auto& bank = std::get<MaxFilterModel>(mf.variant()).bank;
  for (Eigen::Index i = 0; i < bank.size(); ++i) CHECK(std::abs(bank.templates().row(i).norm() - 1.0) <= 1e-12);

  const auto lmf = train(small(Architecture::kLMF, 5, 3, 30, 1), g, x).model;
  CHECK(lmf.kind_name() == "lmf");
  CHECK(lmf.output_dim() == 3);

  const auto relu = train(small(Architecture::kReLU, 5, 3, 30, 1), g, x).model;
  CHECK(relu.kind_name() == "relu");
  CHECK_FALSE(relu.is_group_invariant());
}

TEST_CASE("lrmf keeps its templates") {
  const auto g = GroupSpec::sign_flip(3);
  const auto x = oracle::gaussian(3, 30, 5);
  const auto a = train(small(Architecture::kLRMF, 6, 3, 5, 1), g, x).model;
  const auto b = train(small(Architecture::kLRMF, 6, 3, 80, 1), g, x).model;
  CHECK(std::get<LinearOfBankModel>(a.variant()).bank.templates() ==
        std::get<LinearOfBankModel>(b.variant()).bank.templates());
}

TEST_CASE("relu on a continuous group uses sampled augmentation") {
  const auto g = GroupSpec::phase_circle(1);
  const auto x = oracle::gaussian(2, 20, 6);
  auto cfg = small(Architecture::kReLU, 6, 3, 20, 1);
  cfg.augmentation_samples = 4;
  const auto r = train(cfg, g, x);
  CHECK(std::isfinite(r.train_report.dist));
}

TEST_CASE("mini-batches of pairs") {
  const auto g = GroupSpec::sign_flip(2);
  const auto x = oracle::gaussian(2, 60, 7);
  auto cfg = small(Architecture::kLMF, 6, 3, 50, 1);
  cfg.batch_pairs = 100;
  const auto r = train(cfg, g, x);
  CHECK(r.train_report.n_pairs == 60 * 59 / 2);
  CHECK(r.train_report.dist == doctest::Approx(evaluate(r.model, g, x).dist).epsilon(1e-12));
}

TEST_CASE("lmf learns sorting on three coordinates") {
  const auto g = GroupSpec::permutation(3);
  const auto x = oracle::gaussian(3, 300, 8);
  const auto x_test = oracle::gaussian(3, 1000, 9);
  auto cfg = small(Architecture::kLMF, 6, 3, 2000, 2);
  const auto r = train(cfg, g, x);
  CHECK(evaluate(r.model, g, x_test).dist <= 1.05);
}

TEST_CASE("warm start at the staircase templates reaches distortion one") {
  const auto g = GroupSpec::permutation(3);
  CHECK(evaluate(EmbeddingModel(staircase_sort_model(3)), g, oracle::gaussian(3, 200, 10)).dist ==
        doctest::Approx(1.0).epsilon(1e-12));

  orbitmap::Rng rng(11);
  const auto stair = staircase_sort_model(3);
  const EmbeddingModel warm = LinearOfBankModel{LinearMap(gaussian_matrix(rng, 3, 3)), stair.bank};
  const auto x = oracle::gaussian(3, 300, 12);
  const auto r = train(small(Architecture::kLMF, 3, 3, 2000, 1), g, x, warm);
  CHECK(evaluate(r.model, g, oracle::gaussian(3, 1000, 13)).dist <= 1 + 1e-3);
}

TEST_CASE("lmf is at least as good as mf") {
  const auto g = GroupSpec::sign_flip(2);
  const auto x = oracle::gaussian(2, 200, 14);
  const auto x_test = oracle::gaussian(2, 500, 15);
  const auto mf = train(small(Architecture::kMF, 8, 8, 400, 2), g, x);
  const auto lmf = train(small(Architecture::kLMF, 8, 8, 400, 2), g, x);
  CHECK(evaluate(lmf.model, g, x_test).dist <= evaluate(mf.model, g, x_test).dist + 0.05);
}

TEST_CASE("random filter bank search") {
  const auto g = GroupSpec::sign_flip(3);
  const auto x = oracle::gaussian(3, 200, 16);
  const auto one = rmf_search(g, 9, 1, x, 3);
  CHECK(one.best_draw == 0);
  CHECK(one.report.dist >= 1.0);
  CHECK(evaluate(EmbeddingModel(MaxFilterModel{one.bank}), g, x).dist == one.report.dist);

  double prev = one.report.dist;
  for (std::size_t n : {5, 20, 80}) {
    const auto r = rmf_search(g, 9, n, x, 3);
    CHECK(r.report.dist <= prev);
    CHECK(evaluate(EmbeddingModel(MaxFilterModel{r.bank}), g, x).dist == r.report.dist);
    prev = r.report.dist;
  }
  CHECK(rmf_search(g, 9, 20, x, 3).bank.templates() == rmf_search(g, 9, 20, x, 3).bank.templates());
}
