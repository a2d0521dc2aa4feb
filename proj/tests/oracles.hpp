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


#ifndef ORBITMAP_TESTS_ORACLES_HPP_
#define ORBITMAP_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "orbitmap/common.hpp"
#include "orbitmap/rng.hpp"

// Reference computations written without the library's group machinery.
namespace oracle {

using orbitmap::Matrix;
using orbitmap::Vector;

inline constexpr double kPi = std::numbers::pi;

inline orbitmap::PointSet gaussian(int dim, int n, std::uint64_t seed) {
  orbitmap::Rng rng(seed);
  return orbitmap::gaussian_matrix(rng, dim, n);
}

// Calls fn(perm) for all d! permutations of 0..d-1.
inline void for_each_permutation(int d, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> p(static_cast<std::size_t>(d));
  std::iota(p.begin(), p.end(), 0);
  do fn(p);
  while (std::next_permutation(p.begin(), p.end()));
}

inline Vector permute(const Vector& x, const std::vector<int>& p) {
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = x[p[static_cast<std::size_t>(i)]];
  return out;
}

inline double permutation_dist(const Vector& x, const Vector& y) {
  double best = std::numeric_limits<double>::infinity();
  for_each_permutation(static_cast<int>(x.size()),
                       [&](const std::vector<int>& p) { best = std::min(best, (x - permute(y, p)).norm()); });
  return best;
}

inline double permutation_max_inner(const Vector& x, const Vector& y) {
  double best = -std::numeric_limits<double>::infinity();
  for_each_permutation(static_cast<int>(x.size()),
                       [&](const std::vector<int>& p) { best = std::max(best, x.dot(permute(y, p))); });
  return best;
}

inline double sign_flip_dist(const Vector& x, const Vector& y) {
  return std::min((x - y).norm(), (x + y).norm());
}

// e^{i t} applied to every interleaved (re, im) pair.
inline Vector phase(const Vector& x, double t) {
  Vector out(x.size());
  const double c = std::cos(t), s = std::sin(t);
  for (Eigen::Index j = 0; j + 1 < x.size(); j += 2) {
    out[j] = c * x[j] - s * x[j + 1];
    out[j + 1] = s * x[j] + c * x[j + 1];
  }
  return out;
}

inline double phase_max_inner(const Vector& x, const Vector& y, int samples = 10000) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) best = std::max(best, x.dot(phase(y, 2 * kPi * i / samples)));
  return best;
}

inline double phase_dist(const Vector& x, const Vector& y, int samples = 10000) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) best = std::min(best, (x - phase(y, 2 * kPi * i / samples)).norm());
  return best;
}

// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Central differences with step h.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                          double h = 1e-6) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector a = x, b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (f(a) - f(b)) / (2 * h);
  }
  return g;
}

// beta / alpha of f over all pairs, by a direct double loop with a
// caller-supplied quotient metric.
inline double ratio_distortion(const std::function<Vector(const Vector&)>& f,
                               const std::function<double(const Vector&, const Vector&)>& d,
                               const orbitmap::PointSet& pts) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    const Vector fi = f(pts.col(i));
    for (Eigen::Index j = i + 1; j < pts.cols(); ++j) {
      const double q = d(pts.col(i), pts.col(j));
      if (q <= 1e-9) continue;
      const double r = (fi - f(pts.col(j))).norm() / q;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  return hi / lo;
}

}  // namespace oracle

#endif  // ORBITMAP_TESTS_ORACLES_HPP_
