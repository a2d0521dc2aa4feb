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
#include "orbitmap/metrics.hpp"

using namespace orbitmap;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("quotient distance examples") {
  CHECK(quotient_dist(GroupSpec::sign_flip(2), vec({1, 0}), vec({-1, 0})) == 0.0);
  CHECK(quotient_dist(GroupSpec::permutation(3), vec({3, 1, 2}), vec({2, 3, 1})) == 0.0);
  const Vector x = vec({1, 0, 0, 0}), y = vec({0, 0, 1, 0});
  const double d = quotient_dist(GroupSpec::phase_circle(2), x, y);
  CHECK(std::abs(d - oracle::phase_dist(x, y)) <= 1e-6);
  CHECK(std::abs(d - std::sqrt(2.0)) <= 1e-12);
}

TEST_CASE("closed forms equal the independent oracles") {
  for (int d = 1; d <= 6; ++d) {
    CAPTURE(d);
    const auto pts = oracle::gaussian(d, 200, 100 + static_cast<std::uint64_t>(d));
    const auto sf = GroupSpec::sign_flip(d);
    const auto pm = GroupSpec::permutation(d);
    for (Eigen::Index j = 0; j + 1 < pts.cols(); j += 2) {
      const Vector x = pts.col(j), y = pts.col(j + 1);
      CHECK(std::abs(quotient_dist(sf, x, y) - oracle::sign_flip_dist(x, y)) <= 1e-12);
      CHECK(std::abs(quotient_dist(pm, x, y) - oracle::permutation_dist(x, y)) <= 1e-12);
      CHECK(std::abs(quotient_dist(sf, x, y) - enumerated_quotient_dist(sf, x, y)) <= 1e-12);
      CHECK(std::abs(quotient_dist(pm, x, y) - enumerated_quotient_dist(pm, x, y)) <= 1e-12);
    }
  }
}

TEST_CASE("phase circle distance matches a dense phase scan") {
  const auto g = GroupSpec::phase_circle(2);
  const auto pts = oracle::gaussian(4, 20, 7);
  for (Eigen::Index j = 0; j + 1 < pts.cols(); j += 2) {
    const double scan = oracle::phase_dist(pts.col(j), pts.col(j + 1), 20000);
    const double d = quotient_dist(g, pts.col(j), pts.col(j + 1));
    CHECK(d <= scan + 1e-12);
    CHECK(scan - d <= 1e-4);
  }
}

TEST_CASE("shape distance: brute force never beats the closed form") {
  const auto g = GroupSpec::shape_group(6);
  const auto pts = oracle::gaussian(12, 2, 8);
  const Vector x = pts.col(0), y = pts.col(1);
  const double closed = quotient_dist(g, x, y);
  double coarse = 1e300, fine = 1e300;
  const auto elems = g.sample(40000, 9);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const double v = (x - g.apply(elems[i], y)).norm();
    if (i < 400) coarse = std::min(coarse, v);
    fine = std::min(fine, v);
  }
  CHECK(fine >= closed - 1e-6);
  CHECK(fine <= coarse);
  CHECK(fine - closed <= 0.05);
  CHECK(std::abs(aligned_distance(g, x, y) - closed) <= 1e-12);
}

TEST_CASE("metric axioms") {
  auto r = check_metric_axioms(GroupSpec::sign_flip(3), oracle::gaussian(3, 10, 1));
  CHECK(r.ok);
  CHECK(r.violations == 0);
  r = check_metric_axioms(GroupSpec::permutation(4), oracle::gaussian(4, 10, 2));
  CHECK(r.ok);
  CHECK(r.violations == 0);
  r = check_metric_axioms(GroupSpec::shape_group(5), oracle::gaussian(10, 8, 3));
  CHECK(r.ok);
  CHECK_THROWS(check_metric_axioms(GroupSpec::sign_flip(3), oracle::gaussian(3, 2, 1)));
}

TEST_CASE("collinear triple gives triangle equality") {
  const Vector x = oracle::gaussian(4, 1, 5).col(0);
  for (const auto& g : {GroupSpec::sign_flip(4), GroupSpec::permutation(4), GroupSpec::cyclic_shift(4),
                        GroupSpec::phase_circle(2), GroupSpec::orthogonal_tuple(2, 2)}) {
    const double ab = quotient_dist(g, x, 2 * x), bc = quotient_dist(g, 2 * x, 3 * x);
    const double ac = quotient_dist(g, x, 3 * x);
    CHECK(std::abs(ac - ab - bc) <= 1e-9);
  }
}

TEST_CASE("property: bounded by the Euclidean distance and invariant") {
  for (const auto& g : {GroupSpec::sign_flip(3), GroupSpec::planar_rotation(5), GroupSpec::permutation(4),
                        GroupSpec::cyclic_shift(5), GroupSpec::phase_circle(2),
                        GroupSpec::orthogonal_tuple(3, 2), GroupSpec::shape_group(5),
                        GroupSpec::hyperoctahedral_signs(3)}) {
    CAPTURE(g.name());
    const auto pts = oracle::gaussian(g.ambient_dim(), 40, 13);
    const auto elems = g.sample(20, 14);
    for (Eigen::Index j = 0; j + 1 < pts.cols(); j += 2) {
      const Vector x = pts.col(j), y = pts.col(j + 1);
      const double d = quotient_dist(g, x, y);
      CHECK(d <= (x - y).norm() + 1e-12);
      CHECK(std::abs(d - quotient_dist(g, y, x)) <= 1e-10);
      CHECK(quotient_dist(g, x, x) <= 1e-12);
      for (const auto& e : elems) CHECK(std::abs(quotient_dist(g, g.apply(e, x), y) - d) <= 1e-10);
    }
  }
}

TEST_CASE("pairwise storage") {
  const auto g = GroupSpec::sign_flip(3);
  const auto pts = oracle::gaussian(3, 7, 4);
  const auto pd = PairwiseDistances::compute(g, pts);
  CHECK(pd.size() == 7);
  CHECK(pd.pair_count() == 21);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = i + 1; j < 7; ++j)
      CHECK(pd(i, j) == quotient_dist(g, pts.col(static_cast<Eigen::Index>(i)),
                                      pts.col(static_cast<Eigen::Index>(j))));
  const auto eu = PairwiseDistances::euclidean(pts);
  CHECK(eu(1, 4) == doctest::Approx((pts.col(1) - pts.col(4)).norm()).epsilon(1e-14));
  CHECK_THROWS(PairwiseDistances::from_values(4, {1.0, 2.0}));
}
