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
#include <variant>

#include "doctest.h"
#include "oracles.hpp"
#include "orbitmap/groups.hpp"

using namespace orbitmap;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

std::vector<GroupSpec> all_kinds() {
  Matrix flip = Matrix::Identity(2, 2);
  flip(1, 1) = -1;
  return {GroupSpec::sign_flip(3),        GroupSpec::planar_rotation(5),
          GroupSpec::permutation(4),      GroupSpec::cyclic_shift(5),
          GroupSpec::phase_circle(2),     GroupSpec::orthogonal_tuple(3, 2),
          GroupSpec::shape_group(6),      GroupSpec::explicit_finite({Matrix::Identity(2, 2), flip}),
          GroupSpec::hyperoctahedral_signs(3)};
}

}  // namespace

TEST_CASE("apply on small examples") {
  const auto sf = GroupSpec::sign_flip(2);
  CHECK(sf.apply(SignElement{-1}, vec({1, 2})).isApprox(vec({-1, -2})));
  const auto cs = GroupSpec::cyclic_shift(3);
  CHECK((cs.apply(ShiftElement{1}, vec({1, 2, 3})) - vec({3, 1, 2})).norm() == 0.0);
  const auto rot = GroupSpec::planar_rotation(4);
  CHECK((rot.apply(RotationElement{1, 4}, vec({1, 0})) - vec({0, 1})).norm() < 1e-15);
}

TEST_CASE("apply rejects wrong dimension") {
  CHECK_THROWS_AS(GroupSpec::sign_flip(2).apply(SignElement{1}, vec({1, 2, 3})), DimensionMismatch);
  CHECK_THROWS_AS(GroupSpec::sign_flip(2).max_inner(vec({1, 2}), vec({1})), DimensionMismatch);
}

TEST_CASE("argmax_inner examples") {
  auto a = GroupSpec::sign_flip(2).argmax_inner(vec({1, 2}), vec({3, -1}));
  CHECK(a.value == doctest::Approx(1.0));
  CHECK((a.maximizer - vec({3, -1})).norm() == 0.0);

  // The 1 of y lands on the largest coordinate of x.
  a = GroupSpec::permutation(3).argmax_inner(vec({3, 1, 2}), vec({1, 0, 0}));
  CHECK(a.value == 3.0);
  CHECK((a.maximizer - vec({1, 0, 0})).norm() == 0.0);

  const Vector x = vec({0, 1}), y = vec({1, 0});
  a = GroupSpec::phase_circle(1).argmax_inner(x, y);
  CHECK(std::abs(a.value - oracle::phase_max_inner(x, y)) <= 1e-6);
  CHECK(std::abs(a.value - 1.0) <= 1e-12);
  CHECK((a.maximizer - x).norm() <= 1e-12);
}

TEST_CASE("zero template gives zero") {
  for (const auto& g : all_kinds()) {
    const Vector x = oracle::gaussian(g.ambient_dim(), 1, 3).col(0);
    const auto a = g.argmax_inner(x, Vector::Zero(g.ambient_dim()));
    CHECK(a.value == 0.0);
    CHECK(a.maximizer.norm() == 0.0);
  }
}

TEST_CASE("enumerate") {
  CHECK(GroupSpec::sign_flip(4).enumerate().size() == 2);
  CHECK(GroupSpec::permutation(4).enumerate().size() == 24);
  CHECK(GroupSpec::cyclic_shift(7).enumerate().size() == 7);
  CHECK(GroupSpec::planar_rotation(6).enumerate().size() == 6);
  CHECK(GroupSpec::hyperoctahedral_signs(5).enumerate().size() == 32);
  CHECK_THROWS_AS(GroupSpec::phase_circle(2).enumerate(), ContinuousGroupError);
  CHECK_THROWS_AS(GroupSpec::orthogonal_tuple(2, 2).enumerate(), ContinuousGroupError);
  CHECK_THROWS_AS(GroupSpec::shape_group(4).enumerate(), ContinuousGroupError);
  CHECK_THROWS_AS(GroupSpec::phase_circle(2).order(), ContinuousGroupError);
}

TEST_CASE("explicit groups must be closed under inversion") {
  Matrix r = Matrix::Zero(2, 2);
  r(0, 1) = -1;
  r(1, 0) = 1;  // quarter turn, whose inverse is missing
  CHECK_THROWS(GroupSpec::explicit_finite({Matrix::Identity(2, 2), r}));
  Matrix s = Matrix::Identity(2, 2) * 2.0;
  CHECK_THROWS(GroupSpec::explicit_finite({Matrix::Identity(2, 2), s}));
}

TEST_CASE("sample") {
  const auto sf = GroupSpec::sign_flip(2).sample(4, 9);
  CHECK(sf.size() == 4);
  for (const auto& g : sf) {
    const int s = std::get<SignElement>(g).sign;
    CHECK((s == 1 || s == -1));
  }

  const auto p1 = GroupSpec::phase_circle(3).sample(2, 42);
  const auto p2 = GroupSpec::phase_circle(3).sample(2, 42);
  for (int i = 0; i < 2; ++i)
    CHECK(std::get<PhaseElement>(p1[i]).angle == std::get<PhaseElement>(p2[i]).angle);

  const auto o = GroupSpec::orthogonal_tuple(3, 2).sample(1, 5);
  const Matrix& r = std::get<OrthogonalElement>(o[0]).rotation;
  CHECK((r.transpose() * r - Matrix::Identity(3, 3)).norm() <= 1e-12);
}

TEST_CASE("every element is orthogonal") {
  for (const auto& g : all_kinds()) {
    CAPTURE(g.name());
    const auto pts = oracle::gaussian(g.ambient_dim(), 5, 11);
    const auto elems = g.is_enumerable() ? g.enumerate() : g.sample(50, 12);
    for (const auto& e : elems)
      for (Eigen::Index j = 0; j < pts.cols(); ++j)
        CHECK(std::abs(g.apply(e, pts.col(j)).norm() - pts.col(j).norm()) <= 1e-12);
  }
}

TEST_CASE("property: argmax dominates every sampled element") {
  for (const auto& g : all_kinds()) {
    CAPTURE(g.name());
    const auto pts = oracle::gaussian(g.ambient_dim(), 20, 21);
    const auto elems = g.is_enumerable() ? g.enumerate() : g.sample(100, 22);
    for (Eigen::Index j = 0; j + 1 < pts.cols(); j += 2) {
      const Vector x = pts.col(j), y = pts.col(j + 1);
      const auto a = g.argmax_inner(x, y);
      CHECK(std::abs(x.dot(a.maximizer) - a.value) <= 1e-10);
      CHECK(std::abs(a.maximizer.norm() - y.norm()) <= 1e-10);
      CHECK(std::abs(g.max_inner(x, y) - a.value) <= 1e-10);
      for (const auto& e : elems) CHECK(a.value >= x.dot(g.apply(e, y)) - 1e-10);
    }
  }
}

TEST_CASE("property: argmax value is symmetric") {
  for (const auto& g : all_kinds()) {
    CAPTURE(g.name());
    const auto pts = oracle::gaussian(g.ambient_dim(), 40, 31);
    for (Eigen::Index j = 0; j + 1 < pts.cols(); j += 2)
      CHECK(std::abs(g.max_inner(pts.col(j), pts.col(j + 1)) -
                     g.max_inner(pts.col(j + 1), pts.col(j))) <= 1e-10);
  }
}

TEST_CASE("property: enumerable kinds equal brute force exactly") {
  for (const auto& g : all_kinds()) {
    if (!g.is_enumerable()) continue;
    CAPTURE(g.name());
    const auto pts = oracle::gaussian(g.ambient_dim(), 40, 41);
    const auto elems = g.enumerate();
    for (Eigen::Index j = 0; j + 1 < pts.cols(); j += 2) {
      double best = -1e300;
      for (const auto& e : elems) best = std::max(best, pts.col(j).dot(g.apply(e, pts.col(j + 1))));
      CHECK(g.max_inner(pts.col(j), pts.col(j + 1)) == best);
    }
  }
}

TEST_CASE("permutation argmax matches the rearrangement oracle") {
  const auto g = GroupSpec::permutation(5);
  const auto pts = oracle::gaussian(5, 40, 51);
  for (Eigen::Index j = 0; j + 1 < pts.cols(); j += 2)
    CHECK(std::abs(g.max_inner(pts.col(j), pts.col(j + 1)) -
                   oracle::permutation_max_inner(pts.col(j), pts.col(j + 1))) <= 1e-12);
}

TEST_CASE("phase circle argmax matches a dense phase scan") {
  const auto g = GroupSpec::phase_circle(3);
  const auto pts = oracle::gaussian(6, 10, 61);
  for (Eigen::Index j = 0; j + 1 < pts.cols(); j += 2) {
    const double scan = oracle::phase_max_inner(pts.col(j), pts.col(j + 1), 20000);
    const double v = g.max_inner(pts.col(j), pts.col(j + 1));
    CHECK(v >= scan - 1e-12);
    CHECK(v - scan <= 1e-6);
  }
}

TEST_CASE("orthogonal tuple and shape argmax beat random search") {
  for (const auto& g : {GroupSpec::orthogonal_tuple(2, 3), GroupSpec::shape_group(5)}) {
    CAPTURE(g.name());
    const auto pts = oracle::gaussian(g.ambient_dim(), 2, 71);
    const double v = g.max_inner(pts.col(0), pts.col(1));
    double best = -1e300;
    for (const auto& e : g.sample(20000, 72)) best = std::max(best, pts.col(0).dot(g.apply(e, pts.col(1))));
    CHECK(v >= best - 1e-12);
    CHECK(v - best <= 1e-2);
  }
}

TEST_CASE("procrustes in the plane") {
  Eigen::Matrix2d m;
  m << 2.0, 0.5, -1.0, 0.3;
  Eigen::Matrix2d r;
  const double v = procrustes_2d(m, &r);
  const Eigen::JacobiSVD<Eigen::Matrix2d> svd(m);
  CHECK(v == doctest::Approx(svd.singularValues().sum()).epsilon(1e-12));
  CHECK((r.transpose() * r - Eigen::Matrix2d::Identity()).norm() <= 1e-12);
  CHECK((r * m).trace() == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("quotient dimension and names") {
  CHECK(GroupSpec::phase_circle(2).ambient_dim() == 4);
  CHECK(GroupSpec::shape_group(5).ambient_dim() == 10);
  CHECK(GroupSpec::orthogonal_tuple(3, 2).ambient_dim() == 6);
  CHECK(group_kind_from_string(to_string(GroupKind::kPhaseCircle)) == GroupKind::kPhaseCircle);
  CHECK_THROWS(group_kind_from_string("nope"));
}
