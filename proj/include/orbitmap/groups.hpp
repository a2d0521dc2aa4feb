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

#ifndef ORBITMAP_GROUPS_HPP_
#define ORBITMAP_GROUPS_HPP_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "orbitmap/common.hpp"
#include "orbitmap/rng.hpp"

namespace orbitmap {

enum class GroupKind {
  kSignFlip,              // {+I, -I} on R^d
  kPlanarRotation,        // cyclic C_r <= SO(2) on R^2
  kPermutation,           // S_d permuting coordinates of R^d
  kCyclicShift,           // C_d circularly shifting R^d
  kPhaseCircle,           // S^1 acting on C^d = R^{2d} by a global phase
  kOrthogonalTuple,       // O(d) acting diagonally on (R^d)^k
  kShapeGroup,            // O(2) x C_k acting on (R^2)^k
  kExplicitFinite,        // user supplied orthogonal matrices
  kHyperoctahedralSigns,  // (+-1)^d coordinate sign flips
};

// Group elements. Structured kinds keep a compact description so that applying
// them never materializes a matrix.
struct SignElement {
  int sign = 1;
};
struct RotationElement {
  int step = 0;  // rotation by 2*pi*step/order
  int order = 1;
};
struct PermutationElement {
  std::vector<int> perm;  // (g x)[i] = x[perm[i]]
};
struct ShiftElement {
  int shift = 0;  // (g x)[i] = x[(i - shift) mod d]
};
struct PhaseElement {
  double angle = 0.0;  // multiplies every complex coordinate by e^{i angle}
};
struct OrthogonalElement {
  Matrix rotation;  // d x d, applied to every block
};
struct ShapeElement {
  Eigen::Matrix2d rotation = Eigen::Matrix2d::Identity();
  int shift = 0;  // (g x)_i = R x_{(i - shift) mod k}
};
struct MatrixElement {
  Matrix matrix;
};
struct SignsElement {
  std::uint32_t mask = 0;  // bit i set: coordinate i negated
};

using GroupElement =
    std::variant<SignElement, RotationElement, PermutationElement,
                 ShiftElement, PhaseElement, OrthogonalElement, ShapeElement,
                 MatrixElement, SignsElement>;

/// Result of maximizing <x, g y> over the group: the value and the attaining
/// point g* y of the orbit [y].
struct Alignment {
  double value = 0.0;
  Vector maximizer;
};

/// A group acting orthogonally on a real inner-product space V = R^D.
///
/// Complex spaces are modeled as R^{2d} with interleaved (re, im) pairs and
/// tuples (R^d)^k as k consecutive blocks of length d.
class GroupSpec {
 public:
  static GroupSpec sign_flip(int d);
  static GroupSpec planar_rotation(int order);
  static GroupSpec permutation(int d);
  static GroupSpec cyclic_shift(int d);
  static GroupSpec phase_circle(int d);
  static GroupSpec orthogonal_tuple(int d, int k);
  static GroupSpec shape_group(int k);
  static GroupSpec explicit_finite(std::vector<Matrix> elements);
  static GroupSpec hyperoctahedral_signs(int d);
  /// The trivial group {I} on R^d.
  static GroupSpec trivial(int d);

  GroupKind kind() const { return kind_; }
  int ambient_dim() const { return ambient_dim_; }
  /// Base dimension d (vector length for R^d kinds, complex dimension for the
  /// phase circle, block length for tuples; 2 for shapes and rotations).
  int dim() const { return dim_; }
  /// Rotation order r for planar rotations.
  int order_param() const { return order_; }
  /// Number of blocks k for tuples and shapes.
  int tuple_size() const { return tuple_size_; }
  const std::vector<Matrix>& matrices() const { return matrices_; }

  bool is_finite() const;
  /// Finite and small enough to list (permutations up to d = 8, sign
  /// patterns up to d = 16).
  bool is_enumerable() const;
  /// Group order; throws ContinuousGroupError for infinite groups.
  std::size_t order() const;
  /// Dimension of the orbit space V/G.
  int quotient_dim() const;

  /// All elements in a fixed order; ties everywhere are broken by the first
  /// element of this order.
  std::vector<GroupElement> enumerate() const;
  std::vector<GroupElement> sample(std::size_t n, std::uint64_t seed) const;
  std::vector<GroupElement> sample(std::size_t n, Rng& rng) const;

  Vector apply(const GroupElement& g, const VectorRef& x) const;

  /// max_g <x, g y> and the maximizer g* y.
  Alignment argmax_inner(const VectorRef& x, const VectorRef& y) const;
  /// Same value as argmax_inner without forming the maximizer.
  double max_inner(const VectorRef& x, const VectorRef& y) const;

  /// Short identifier, e.g. "sign_flip(d=3)".
  std::string name() const;

  friend bool operator==(const GroupSpec& a, const GroupSpec& b);

 private:
  GroupSpec(GroupKind kind, int ambient, int dim, int order, int tuple)
      : kind_(kind),
        ambient_dim_(ambient),
        dim_(dim),
        order_(order),
        tuple_size_(tuple) {}

  GroupKind kind_;
  int ambient_dim_;
  int dim_;
  int order_;
  int tuple_size_;
  std::vector<Matrix> matrices_;
};

/// Kind identifiers used in config files and JSON ("sign_flip", ...).
std::string to_string(GroupKind kind);
GroupKind group_kind_from_string(const std::string& s);

/// Maximizes tr(R m) over R in O(2) in closed form. Returns the value
/// (the nuclear norm of m) and writes the maximizing R. Rotations win ties
/// against reflections.
double procrustes_2d(const Eigen::Matrix2d& m, Eigen::Matrix2d* best);

}  // namespace orbitmap

#endif  // ORBITMAP_GROUPS_HPP_
