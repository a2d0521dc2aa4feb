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
#include <complex>

#include "doctest.h"
#include "oracles.hpp"
#include "orbitmap/embeddings.hpp"
#include "orbitmap/metrics.hpp"

using namespace orbitmap;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Symmetric square root by eigendecomposition, flattened with the isometric
// convention.
Vector sqrt_psd_oracle(const Vector& x) {
  const Matrix s = x * x.transpose();
  const Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  // Rank one: the trailing eigenvalues are zero up to rounding.
  const double top = es.eigenvalues().maxCoeff();
  const Vector ev = es.eigenvalues().unaryExpr([&](double v) { return v > 1e-12 * top ? std::sqrt(v) : 0.0; });
  const Matrix root = es.eigenvectors() * ev.asDiagonal() *
                      es.eigenvectors().transpose();
  const auto d = x.size();
  Vector out(d * (d + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i; j < d; ++j) out[k++] = (i == j ? 1.0 : std::sqrt(2.0)) * root(i, j);
  return out;
}

std::vector<EmbeddingModel> homogeneous_models() {
  orbitmap::Rng rng(3);
  const auto g = GroupSpec::permutation(3);
  std::vector<EmbeddingModel> out;
  out.emplace_back(MaxFilterModel{FilterBank(g, gaussian_matrix(rng, 4, 3))});
  out.emplace_back(LinearOfBankModel{LinearMap(gaussian_matrix(rng, 2, 4)), FilterBank(g, gaussian_matrix(rng, 4, 3))});
  out.emplace_back(ReluNetModel{gaussian_matrix(rng, 5, 3), gaussian_matrix(rng, 2, 5)});
  out.emplace_back(OptimalPlanarModel{3});
  out.emplace_back(OptimalPsdModel{3});
  out.emplace_back(WeylSortModel{g});
  out.emplace_back(HPolyModel{PolyRow{PolyFamily::kPowerSums, 3, 1}});
  return out;
}

}  // namespace

TEST_CASE("optimal planar examples") {
  const double h = std::sqrt(0.5);
  CHECK((optimal_planar(2, vec({1, 0})) - vec({h, h, 0})).norm() <= 1e-15);
  CHECK(optimal_planar(2, vec({0, 0})).norm() == 0.0);
  CHECK((optimal_planar(2, vec({0, 1})) - vec({h, -h, 0})).norm() <= 1e-15);
}

TEST_CASE("optimal psd examples") {
  CHECK((optimal_psd(vec({1, 0})) - vec({1, 0, 0})).norm() == 0.0);
  CHECK(optimal_psd(vec({0, 0, 0})).norm() == 0.0);
  const Vector x = vec({1, 1});
  CHECK((optimal_psd(x) - sqrt_psd_oracle(x)).norm() <= 1e-10);
  CHECK((optimal_psd(x) - vec({std::sqrt(0.5), 1, std::sqrt(0.5)})).norm() <= 1e-15);
  const auto pts = oracle::gaussian(4, 20, 5);
  for (Eigen::Index j = 0; j < pts.cols(); ++j)
    CHECK((optimal_psd(pts.col(j)) - sqrt_psd_oracle(pts.col(j))).norm() <= 1e-10);
}

TEST_CASE("flattening is an isometry") {
  const auto pts = oracle::gaussian(4, 4, 6);
  const Matrix s = pts * pts.transpose();
  CHECK(flatten_symmetric(s).norm() == doctest::Approx(s.norm()).epsilon(1e-14));
}

TEST_CASE("weyl sort examples") {
  CHECK((weyl_sort(GroupSpec::permutation(3), vec({3, 1, 2})) - vec({3, 2, 1})).norm() == 0.0);
  CHECK((weyl_sort(GroupSpec::hyperoctahedral_signs(3), vec({-3, 1, -2})) - vec({3, 2, 1})).norm() == 0.0);
  const Vector w = vec({5, 2, 2, -1});
  CHECK((weyl_sort(GroupSpec::permutation(4), w) - w).norm() == 0.0);
  CHECK_THROWS(weyl_sort(GroupSpec::sign_flip(3), vec({1, 2, 3})));
}

TEST_CASE("poly examples") {
  CHECK((poly_invariant(PolyRow{PolyFamily::kPowerSums, 2, 1}, vec({1, 2})) - vec({3, 5})).norm() == 0.0);
  CHECK((poly_invariant(PolyRow{PolyFamily::kComplexPower, 2, 1}, vec({0, 1})) - vec({-1, 0})).norm() <= 1e-15);
  const Vector bs = poly_invariant(PolyRow{PolyFamily::kBispectrum, 3, 1}, vec({1, 0, 0}));
  REQUIRE(bs.size() == 18);
  for (Eigen::Index i = 0; i < 9; ++i) {
    CHECK(std::abs(bs[2 * i] - 1.0) <= 1e-14);
    CHECK(std::abs(bs[2 * i + 1]) <= 1e-14);
  }
  CHECK_THROWS(poly_invariant(PolyRow{PolyFamily::kPowerSums, 2, 1}, vec({1, 2, 3})));
}

TEST_CASE("poly output sizes follow the table") {
  CHECK(PolyRow{PolyFamily::kOuterProduct, 4, 1}.output_dim() == 10);
  CHECK(PolyRow{PolyFamily::kPowerSums, 5, 1}.output_dim() == 5);
  CHECK(PolyRow{PolyFamily::kBispectrum, 4, 1}.output_dim() == 32);
  CHECK(PolyRow{PolyFamily::kComplexPower, 3, 1}.output_dim() == 2);
  CHECK(PolyRow{PolyFamily::kHermitianOuter, 2, 1}.output_dim() == 4);
  CHECK(PolyRow{PolyFamily::kGram, 2, 3}.output_dim() == 6);
}

TEST_CASE("every polynomial row is invariant under its group") {
  for (const PolyRow row : {PolyRow{PolyFamily::kOuterProduct, 3, 1}, PolyRow{PolyFamily::kPowerSums, 4, 1},
                            PolyRow{PolyFamily::kBispectrum, 4, 1}, PolyRow{PolyFamily::kComplexPower, 3, 1},
                            PolyRow{PolyFamily::kHermitianOuter, 2, 1}, PolyRow{PolyFamily::kGram, 2, 3}}) {
    CAPTURE(row.name());
    const auto g = row.group();
    const auto pts = oracle::gaussian(row.input_dim(), 5, 8);
    for (const auto& e : g.sample(10, 9))
      for (Eigen::Index j = 0; j < pts.cols(); ++j)
        CHECK((poly_invariant(row, g.apply(e, pts.col(j))) - poly_invariant(row, pts.col(j))).norm() <= 1e-10);
  }
}

TEST_CASE("hpoly examples") {
  const PolyRow outer{PolyFamily::kOuterProduct, 3, 1};
  const auto pts = oracle::gaussian(3, 10, 10);
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    const Vector x = pts.col(j);
    CHECK((hpoly_invariant(outer, x) - optimal_psd(x)).norm() <= 1e-12);
    CHECK((hpoly_invariant(outer, 2 * x) - 2 * hpoly_invariant(outer, x)).norm() <= 1e-12);
  }
  CHECK((hpoly_invariant(PolyRow{PolyFamily::kPowerSums, 2, 1}, vec({2, 0})) - vec({2, 2})).norm() <= 1e-15);
  CHECK(hpoly_invariant(outer, Vector::Zero(3)).norm() == 0.0);
}

TEST_CASE("polarization through the sorted representatives") {
  const auto g = GroupSpec::permutation(5);
  const auto pts = oracle::gaussian(5, 100, 11);
  for (Eigen::Index j = 0; j + 1 < pts.cols(); j += 2) {
    const Vector x = pts.col(j), z = pts.col(j + 1);
    CHECK(std::abs(max_filter(g, z, x) - weyl_sort(g, x).dot(weyl_sort(g, z))) <= 1e-10);
  }
}

TEST_CASE("weyl sort is an isometry") {
  const auto g = GroupSpec::permutation(5);
  const auto pts = oracle::gaussian(5, 400, 12);
  for (Eigen::Index j = 0; j + 1 < pts.cols(); j += 2) {
    const Vector x = pts.col(j), y = pts.col(j + 1);
    CHECK(std::abs((weyl_sort(g, x) - weyl_sort(g, y)).norm() - quotient_dist(g, x, y)) <= 1e-12);
  }
}

TEST_CASE("property: invariance and homogeneity of models") {
  for (const auto& m : homogeneous_models()) {
    CAPTURE(m.kind_name());
    CHECK(m.is_positively_homogeneous());
    const auto pts = oracle::gaussian(static_cast<int>(m.input_dim()), 10, 13);
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      const Vector x = pts.col(j), fx = m(x);
      for (double r : {0.0, 0.5, 2.0}) CHECK((m(r * x) - r * fx).norm() <= 1e-9 * (1 + fx.norm()));
    }
  }
  const EmbeddingModel poly = PolyModel{PolyRow{PolyFamily::kPowerSums, 3, 1}};
  CHECK_FALSE(poly.is_positively_homogeneous());
  CHECK(poly.is_group_invariant());
  const EmbeddingModel relu = ReluNetModel{Matrix::Ones(2, 3), Matrix::Ones(1, 2)};
  CHECK_FALSE(relu.is_group_invariant());

  const auto g = GroupSpec::permutation(3);
  for (const auto& m : homogeneous_models()) {
    const auto k = m.kind_name();
    if (k != "mf" && k != "lmf" && k != "weyl_sort" && k != "hpoly") continue;
    CAPTURE(m.kind_name());
    const auto pts = oracle::gaussian(3, 5, 14);
    for (const auto& e : g.enumerate())
      for (Eigen::Index j = 0; j < pts.cols(); ++j)
        CHECK((m(g.apply(e, pts.col(j))) - m(pts.col(j))).norm() <= 1e-10);
  }
}

TEST_CASE("optimal planar distortion") {
  for (int r : {2, 3, 5}) {
    CAPTURE(r);
    const auto g = GroupSpec::planar_rotation(r);
    const double bound = r * std::sin(oracle::kPi / (2 * r));
    orbitmap::Rng rng(15 + static_cast<std::uint64_t>(r));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PointSet pts(2, 150);
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      const double rad = 0.5 + 1.5 * u(rng), t = 2 * oracle::kPi * u(rng);
      pts.col(j) << rad * std::cos(t), rad * std::sin(t);
    }
    const double dist = oracle::ratio_distortion([&](const Vector& x) { return optimal_planar(r, x); },
                                                 [&](const Vector& a, const Vector& b) { return quotient_dist(g, a, b); },
                                                 pts);
    CHECK(dist <= bound * (1 + 1e-6));

    // Unit points at quotient angle pi / r and at a tiny angle.
    PointSet adv(2, 3);
    const double t = oracle::kPi / r;
    adv.col(0) << 1, 0;
    adv.col(1) << std::cos(t), std::sin(t);
    adv.col(2) << std::cos(1e-4), std::sin(1e-4);
    const double a = oracle::ratio_distortion([&](const Vector& x) { return optimal_planar(r, x); },
                                              [&](const Vector& p, const Vector& q) { return quotient_dist(g, p, q); },
                                              adv);
    CHECK(a >= bound * 0.99);
    CHECK(a <= bound * (1 + 1e-6));
  }
}

TEST_CASE("optimal psd pairwise ratios stay within sqrt 2") {
  const auto g = GroupSpec::sign_flip(3);
  const auto pts = oracle::gaussian(3, 150, 16);
  const double dist = oracle::ratio_distortion([](const Vector& x) { return optimal_psd(x); },
                                               [&](const Vector& a, const Vector& b) { return quotient_dist(g, a, b); },
                                               pts);
  CHECK(dist >= 1.0);
  CHECK(dist <= std::sqrt(2.0) + 1e-6);
}

TEST_CASE("model dimensions and scaling") {
  orbitmap::Rng rng(2);
  const EmbeddingModel lmf = LinearOfBankModel{LinearMap(gaussian_matrix(rng, 2, 4)),
                                               FilterBank(GroupSpec::sign_flip(3), gaussian_matrix(rng, 4, 3))};
  CHECK(lmf.input_dim() == 3);
  CHECK(lmf.output_dim() == 2);
  const Vector x = vec({1, -2, 0.5});
  CHECK((lmf.scaled(3.0)(x) - 3.0 * lmf(x)).norm() <= 1e-12);
  const PointSet pts = oracle::gaussian(3, 4, 3);
  const Matrix e = lmf.embed(pts);
  for (Eigen::Index j = 0; j < 4; ++j) CHECK((e.col(j) - lmf(pts.col(j))).norm() == 0.0);
  CHECK(poly_family_from_string(to_string(PolyFamily::kGram)) == PolyFamily::kGram);
}
