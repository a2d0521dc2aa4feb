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

#ifndef ORBITMAP_RNG_HPP_
#define ORBITMAP_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

#include "orbitmap/common.hpp"

namespace orbitmap {

using Rng = std::mt19937_64;

/// Derives an independent 64-bit seed for a named purpose from a root seed.
/// Streams with different names never share state, so adding a new consumer
/// of randomness does not perturb existing ones.
std::uint64_t stream_seed(std::uint64_t root, std::string_view purpose);

inline Rng make_rng(std::uint64_t root, std::string_view purpose) {
  return Rng(stream_seed(root, purpose));
}

Vector gaussian_vector(Rng& rng, Eigen::Index n);
Matrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);

/// Haar-distributed element of O(d): QR of a Gaussian matrix with the sign of
/// R's diagonal folded into Q.
Matrix haar_orthogonal(Rng& rng, int d);

/// Uniform point on the unit sphere S^{d-1}.
Vector sphere_point(Rng& rng, Eigen::Index d);

}  // namespace orbitmap

#endif  // ORBITMAP_RNG_HPP_
