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
#include "orbitmap/distortion.hpp"

using namespace orbitmap;

namespace {

EmbeddingModel random_lmf(const GroupSpec& g, std::uint64_t seed, int m = 6, int n = 4) {
  orbitmap::Rng rng(seed);
  FilterBank bank(g, gaussian_matrix(rng, m, g.ambient_dim()));
  return LinearOfBankModel{LinearMap(gaussian_matrix(rng, n, m)), bank};
}

}  // namespace

TEST_CASE("identity under the trivial group is an isometry") {
  const auto g = GroupSpec::trivial(4);
  const auto pts = oracle::gaussian(4, 50, 1);
  const auto r = empirical_distortion([](const VectorRef& x) { return Vector(x); }, g, pts);
  CHECK(std::abs(r.dist - 1.0) <= 1e-12);
  CHECK(r.n_pairs == 50 * 49 / 2);
  CHECK(r.dropped_pairs == 0);
}

TEST_CASE("weyl sort on permutations has distortion one") {
  const auto g = GroupSpec::permutation(5);
  const auto r = empirical_distortion(EmbeddingModel(WeylSortModel{g}), g, oracle::gaussian(5, 100, 2));
  CHECK(std::abs(r.dist - 1.0) <= 1e-9);
}

TEST_CASE("optimal psd on sign flips") {
  const auto g = GroupSpec::sign_flip(3);
  const auto r = empirical_distortion(EmbeddingModel(OptimalPsdModel{3}), g, oracle::gaussian(3, 500, 3));
  CHECK(r.dist >= 1.30);
  CHECK(r.dist <= 1.4143);
}

TEST_CASE("report agrees with a direct double loop") {
  const auto g = GroupSpec::cyclic_shift(4);
  const auto m = random_lmf(g, 4);
  const auto pts = oracle::gaussian(4, 60, 5);
  const auto r = empirical_distortion(m, g, pts);
  const double direct = oracle::ratio_distortion([&](const Vector& x) { return m(x); },
                                                 [&](const Vector& a, const Vector& b) {
                                                   double best = 1e300;
                                                   for (int s = 0; s < 4; ++s) {
                                                     Vector sb(4);
                                                     for (int i = 0; i < 4; ++i) sb[i] = b[(i - s + 4) % 4];
                                                     best = std::min(best, (a - sb).norm());
                                                   }
                                                   return best;
                                                 },
                                                 pts);
  CHECK(r.dist == doctest::Approx(direct).epsilon(1e-12));
  CHECK(r.alpha <= r.beta);
  const auto i = static_cast<Eigen::Index>(r.argmax_pair.i), j = static_cast<Eigen::Index>(r.argmax_pair.j);
  CHECK(r.argmax_pair.i < r.argmax_pair.j);
  CHECK((m(pts.col(i)) - m(pts.col(j))).norm() / quotient_dist(g, pts.col(i), pts.col(j)) ==
        doctest::Approx(r.beta).epsilon(1e-14));
}

TEST_CASE("same-orbit pairs are dropped") {
  const auto g = GroupSpec::sign_flip(2);
  PointSet pts(2, 4);
  pts << 1, -1, 0, 2, 0, 0, 1, 1;
  const auto r = empirical_distortion(EmbeddingModel(OptimalPsdModel{2}), g, pts);
  CHECK(r.dropped_pairs == 1);
  CHECK(r.n_pairs == 5);
  PointSet same(2, 2);
  same << 1, -1, 0, 0;
  CHECK_THROWS(empirical_distortion(EmbeddingModel(OptimalPsdModel{2}), g, same));
}

TEST_CASE("collapsing map has infinite distortion") {
  const auto g = GroupSpec::sign_flip(2);
  const auto r = empirical_distortion([](const VectorRef&) { return Vector(Vector::Zero(1)); }, g,
                                      oracle::gaussian(2, 5, 6));
  CHECK(std::isinf(r.dist));
}

TEST_CASE("bounded distortion abandons only hopeless maps") {
  const auto g = GroupSpec::sign_flip(3);
  const auto pts = oracle::gaussian(3, 80, 7);
  const auto q = PairwiseDistances::compute(g, pts);
  const auto m = random_lmf(g, 8);
  const Matrix f = m.embed(pts);
  const auto full = empirical_distortion(f, q);
  const auto kept = bounded_distortion(f, q, full.dist * 1.01);
  REQUIRE(kept.has_value());
  CHECK(kept->dist == full.dist);
  CHECK_FALSE(bounded_distortion(f, q, full.dist * 0.99).has_value());
}

TEST_CASE("weyl check examples") {
  const auto g = GroupSpec::sign_flip(3);
  const auto pts = oracle::gaussian(3, 40, 9);
  const auto f = random_lmf(g, 10);
  auto w = weyl_check(f, f, g, pts);
  CHECK(w.beta_diff == 0.0);
  CHECK(w.alpha_f == w.alpha_g);
  CHECK(w.holds());

  const auto q = PairwiseDistances::compute(g, pts);
  const Matrix ff = f.embed(pts);
  const Matrix shifted = ff.colwise() + Vector::Constant(ff.rows(), 3.5);
  w = weyl_check(ff, shifted, q);
  CHECK(w.beta_diff <= 1e-12);
  CHECK(std::abs(w.alpha_f - w.alpha_g) <= 1e-12);
  CHECK(std::abs(w.beta_f - w.beta_g) <= 1e-12);

  orbitmap::Rng rng(11);
  auto& v = std::get<LinearOfBankModel>(f.variant());
  Matrix t = v.bank.templates() + 0.1 * gaussian_matrix(rng, v.bank.size(), 3);
  const EmbeddingModel g2 = LinearOfBankModel{v.linear, FilterBank(g, t)};
  w = weyl_check(f, g2, g, pts);
  CHECK(w.alpha_margin >= -1e-10);
  CHECK(w.beta_margin >= -1e-10);
}

TEST_CASE("property: scale equivariance") {
  const auto g = GroupSpec::permutation(4);
  const auto pts = oracle::gaussian(4, 60, 12);
  const auto m = random_lmf(g, 13);
  const auto a = empirical_distortion(m, g, pts);
  for (double c : {0.25, 3.0}) {
    const auto b = empirical_distortion(m.scaled(c), g, pts);
    CHECK(b.alpha == doctest::Approx(c * a.alpha).epsilon(1e-12));
    CHECK(b.beta == doctest::Approx(c * a.beta).epsilon(1e-12));
    CHECK(std::abs(b.dist - a.dist) <= 1e-12 * a.dist);
  }
}

TEST_CASE("property: adding points never lowers distortion") {
  const auto g = GroupSpec::phase_circle(2);
  const auto pts = oracle::gaussian(4, 120, 14);
  const auto m = random_lmf(g, 15);
  double prev = 0.0;
  for (int n : {10, 30, 60, 120}) {
    const double d = empirical_distortion(m, g, pts.leftCols(n)).dist;
    CHECK(d >= prev);
    prev = d;
  }
}

TEST_CASE("property: quotient distance equals the aligned distance") {
  for (const auto& g : {GroupSpec::sign_flip(3), GroupSpec::permutation(4), GroupSpec::phase_circle(2),
                        GroupSpec::orthogonal_tuple(2, 2), GroupSpec::shape_group(5), GroupSpec::cyclic_shift(4)}) {
    CAPTURE(g.name());
    const auto pts = oracle::gaussian(g.ambient_dim(), 60, 16);
    double worst = 0.0;
    for (Eigen::Index j = 0; j + 1 < pts.cols(); j += 2)
      worst = std::max(worst, std::abs(quotient_dist(g, pts.col(j), pts.col(j + 1)) -
                                       aligned_distance(g, pts.col(j), pts.col(j + 1))));
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("weyl inequality on many random pairs") {
  const auto g = GroupSpec::cyclic_shift(5);
  const auto pts = oracle::gaussian(5, 40, 17);
  const auto q = PairwiseDistances::compute(g, pts);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Matrix ff = random_lmf(g, 100 + s).embed(pts);
    const Matrix fg = random_lmf(g, 200 + s).embed(pts);
    const auto w = weyl_check(ff, fg, q);
    CHECK(w.holds());
  }
}

TEST_CASE("csv rendering") {
  DistortionReport r;
  r.alpha = 0.5;
  r.beta = 0.75;
  r.dist = 1.5;
  CHECK(distortion_csv_header() == "group,model,n,alpha,beta,dist,seed");
  CHECK(distortion_csv_row("sign_flip(3)", "lmf", 16, r, 7) == "\"sign_flip(3)\",lmf,16,0.5,0.75,1.5,7");
}
