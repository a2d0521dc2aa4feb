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

#include "orbitmap/rng.hpp"

namespace orbitmap {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t root, std::string_view purpose) {
  // FNV-1a over the purpose string, then mixed with the root seed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : purpose) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(root) ^ h);
}

Vector gaussian_vector(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

Matrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  // Fill column by column so the draw order is layout independent.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

Matrix haar_orthogonal(Rng& rng, int d) {
  const Matrix a = gaussian_matrix(rng, d, d);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Vector sphere_point(Rng& rng, Eigen::Index d) {
  Vector v = gaussian_vector(rng, d);
  double n = v.norm();
  while (n == 0.0) {
    v = gaussian_vector(rng, d);
    n = v.norm();
  }
  return v / n;
}

}  // namespace orbitmap
