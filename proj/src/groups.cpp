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

#include "orbitmap/groups.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

namespace orbitmap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(int v, const char* what) {
  if (v < 1) throw InvalidArgument(std::string(what) + " must be positive");
}

// Indices of x sorted so that x[idx[0]] >= x[idx[1]] >= ...; stable.
std::vector<int> decreasing_order(const VectorRef& x) {
  std::vector<int> idx(static_cast<std::size_t>(x.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return x[a] > x[b]; });
  return idx;
}

std::complex<double> complex_inner(const VectorRef& x, const VectorRef& y) {
  // sum_j conj(x_j) y_j with interleaved (re, im) storage.
  double re = 0.0;
  double im = 0.0;
  for (Eigen::Index j = 0; j + 1 < x.size(); j += 2) {
    re += x[j] * y[j] + x[j + 1] * y[j + 1];
    im += x[j] * y[j + 1] - x[j + 1] * y[j];
  }
  return {re, im};
}

Vector rotate_phase(const VectorRef& y, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Vector out(y.size());
  for (Eigen::Index j = 0; j + 1 < y.size(); j += 2) {
    out[j] = c * y[j] - s * y[j + 1];
    out[j + 1] = s * y[j] + c * y[j + 1];
  }
  return out;
}

Eigen::Matrix2d rotation2(double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

// Cross-covariance sum_i y_{(i - s) mod k} x_i^T for planar k-tuples.
Eigen::Matrix2d shifted_cross(const VectorRef& x, const VectorRef& y, int k,
                              int s) {
  double m00 = 0, m01 = 0, m10 = 0, m11 = 0;
  for (int i = 0; i < k; ++i) {
    int j = i - s;
    if (j < 0) j += k;
    const double x0 = x[2 * i], x1 = x[2 * i + 1];
    const double y0 = y[2 * j], y1 = y[2 * j + 1];
    m00 += y0 * x0;
    m01 += y0 * x1;
    m10 += y1 * x0;
    m11 += y1 * x1;
  }
  Eigen::Matrix2d m;
  m << m00, m01, m10, m11;
  return m;
}

Vector shape_apply(const Eigen::Matrix2d& r, int shift, const VectorRef& y,
                   int k) {
  Vector out(2 * k);
  for (int i = 0; i < k; ++i) {
    int j = (i - shift) % k;
    if (j < 0) j += k;
    const Eigen::Vector2d v(y[2 * j], y[2 * j + 1]);
    out.segment<2>(2 * i) = r * v;
  }
  return out;
}

Vector shift_apply(int shift, const VectorRef& y) {
  const auto d = static_cast<int>(y.size());
  Vector out(d);
  for (int i = 0; i < d; ++i) {
    int j = (i - shift) % d;
    if (j < 0) j += d;
    out[i] = y[j];
  }
  return out;
}

}  // namespace

double procrustes_2d(const Eigen::Matrix2d& m, Eigen::Matrix2d* best) {
  // Rotation [[c,-s],[s,c]]: tr(R m) = c (m00 + m11) + s (m01 - m10).
  // Reflection [[c,s],[s,-c]]: tr(R m) = c (m00 - m11) + s (m01 + m10).
  const double rc = m(0, 0) + m(1, 1);
  const double rs = m(0, 1) - m(1, 0);
  const double fc = m(0, 0) - m(1, 1);
  const double fs = m(0, 1) + m(1, 0);
  const double rot = std::hypot(rc, rs);
  const double ref = std::hypot(fc, fs);
  if (rot >= ref) {
    if (best != nullptr) {
      const double c = rot > 0.0 ? rc / rot : 1.0;
      const double s = rot > 0.0 ? rs / rot : 0.0;
      *best << c, -s, s, c;
    }
    return rot;
  }
  if (best != nullptr) {
    const double c = fc / ref;
    const double s = fs / ref;
    *best << c, s, s, -c;
  }
  return ref;
}

GroupSpec GroupSpec::sign_flip(int d) {
  require_positive(d, "sign_flip dimension");
  return GroupSpec(GroupKind::kSignFlip, d, d, 2, 1);
}

GroupSpec GroupSpec::planar_rotation(int order) {
  require_positive(order, "rotation order");
  return GroupSpec(GroupKind::kPlanarRotation, 2, 2, order, 1);
}

GroupSpec GroupSpec::permutation(int d) {
  require_positive(d, "permutation dimension");
  return GroupSpec(GroupKind::kPermutation, d, d, 1, 1);
}

GroupSpec GroupSpec::cyclic_shift(int d) {
  require_positive(d, "cyclic shift dimension");
  return GroupSpec(GroupKind::kCyclicShift, d, d, d, 1);
}

GroupSpec GroupSpec::phase_circle(int d) {
  require_positive(d, "complex dimension");
  return GroupSpec(GroupKind::kPhaseCircle, 2 * d, d, 0, 1);
}

GroupSpec GroupSpec::orthogonal_tuple(int d, int k) {
  require_positive(d, "tuple block dimension");
  require_positive(k, "tuple size");
  return GroupSpec(GroupKind::kOrthogonalTuple, d * k, d, 0, k);
}

GroupSpec GroupSpec::shape_group(int k) {
  require_positive(k, "shape vertex count");
  return GroupSpec(GroupKind::kShapeGroup, 2 * k, 2, k, k);
}

GroupSpec GroupSpec::explicit_finite(std::vector<Matrix> elements) {
  if (elements.empty()) throw InvalidArgument("explicit group has no elements");
  const auto d = static_cast<int>(elements.front().rows());
  for (const Matrix& m : elements) {
    if (m.rows() != d || m.cols() != d) {
      throw DimensionMismatch("explicit group elements must be square and of equal size");
    }
    const double err =
        (m.transpose() * m - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (err > 1e-10) throw InvalidArgument("explicit group element is not orthogonal");
  }
  for (const Matrix& m : elements) {
    const Matrix inv = m.transpose();
    const bool found = std::any_of(elements.begin(), elements.end(), [&](const Matrix& n) {
      return (n - inv).cwiseAbs().maxCoeff() <= 1e-9;
    });
    if (!found) throw InvalidArgument("explicit group is not closed under inversion");
  }
  GroupSpec g(GroupKind::kExplicitFinite, d, d, static_cast<int>(elements.size()), 1);
  g.matrices_ = std::move(elements);
  return g;
}

GroupSpec GroupSpec::hyperoctahedral_signs(int d) {
  require_positive(d, "sign pattern dimension");
  if (d > 30) throw InvalidArgument("sign pattern dimension above 30 is unsupported");
  return GroupSpec(GroupKind::kHyperoctahedralSigns, d, d, 0, 1);
}

GroupSpec GroupSpec::trivial(int d) {
  return explicit_finite({Matrix::Identity(d, d)});
}

bool GroupSpec::is_finite() const {
  switch (kind_) {
    case GroupKind::kPhaseCircle:
    case GroupKind::kOrthogonalTuple:
    case GroupKind::kShapeGroup:
      return false;
    default:
      return true;
  }
}

bool GroupSpec::is_enumerable() const {
  switch (kind_) {
    case GroupKind::kPermutation:
      return dim_ <= 8;
    case GroupKind::kHyperoctahedralSigns:
      return dim_ <= 16;
    default:
      return is_finite();
  }
}

std::size_t GroupSpec::order() const {
  switch (kind_) {
    case GroupKind::kSignFlip:
      return 2;
    case GroupKind::kPlanarRotation:
    case GroupKind::kCyclicShift:
      return static_cast<std::size_t>(order_);
    case GroupKind::kPermutation: {
      std::size_t f = 1;
      for (int i = 2; i <= dim_; ++i) f *= static_cast<std::size_t>(i);
      return f;
    }
    case GroupKind::kExplicitFinite:
      return matrices_.size();
    case GroupKind::kHyperoctahedralSigns:
      return std::size_t{1} << dim_;
    default:
      throw ContinuousGroupError(name() + " is not finite");
  }
}

int GroupSpec::quotient_dim() const {
  switch (kind_) {
    case GroupKind::kPhaseCircle:
      return 2 * dim_ - 1;
    case GroupKind::kOrthogonalTuple: {
      // dim O(d) minus the stabilizer dimension of a generic k-tuple.
      const int free = std::max(dim_ - tuple_size_, 0);
      return dim_ * tuple_size_ - (dim_ * (dim_ - 1) / 2 - free * (free - 1) / 2);
    }
    case GroupKind::kShapeGroup:
      return 2 * tuple_size_ - 1;
    default:
      return ambient_dim_;
  }
}

std::vector<GroupElement> GroupSpec::enumerate() const {
  if (!is_finite()) throw ContinuousGroupError(name() + " cannot be enumerated");
  if (!is_enumerable()) throw InvalidArgument(name() + " is too large to enumerate");
  std::vector<GroupElement> out;
  switch (kind_) {
    case GroupKind::kSignFlip:
      out.emplace_back(SignElement{1});
      out.emplace_back(SignElement{-1});
      break;
    case GroupKind::kPlanarRotation:
      for (int j = 0; j < order_; ++j) out.emplace_back(RotationElement{j, order_});
      break;
    case GroupKind::kPermutation: {
      std::vector<int> p(static_cast<std::size_t>(dim_));
      std::iota(p.begin(), p.end(), 0);
      do {
        out.emplace_back(PermutationElement{p});
      } while (std::next_permutation(p.begin(), p.end()));
      break;
    }
    case GroupKind::kCyclicShift:
      for (int s = 0; s < dim_; ++s) out.emplace_back(ShiftElement{s});
      break;
    case GroupKind::kExplicitFinite:
      for (const Matrix& m : matrices_) out.emplace_back(MatrixElement{m});
      break;
    case GroupKind::kHyperoctahedralSigns:
      for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << dim_); ++mask)
        out.emplace_back(SignsElement{mask});
      break;
    default:
      break;
  }
  return out;
}

std::vector<GroupElement> GroupSpec::sample(std::size_t n, std::uint64_t seed) const {
  Rng rng = make_rng(seed, "group-sample");
  return sample(n, rng);
}

std::vector<GroupElement> GroupSpec::sample(std::size_t n, Rng& rng) const {
  std::vector<GroupElement> out;
  out.reserve(n);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (std::size_t t = 0; t < n; ++t) {
    switch (kind_) {
      case GroupKind::kSignFlip:
        out.emplace_back(SignElement{std::bernoulli_distribution(0.5)(rng) ? 1 : -1});
        break;
      case GroupKind::kPlanarRotation:
        out.emplace_back(RotationElement{
            std::uniform_int_distribution<int>(0, order_ - 1)(rng), order_});
        break;
      case GroupKind::kPermutation: {
        std::vector<int> p(static_cast<std::size_t>(dim_));
        std::iota(p.begin(), p.end(), 0);
        for (int i = dim_ - 1; i > 0; --i) {
          std::swap(p[static_cast<std::size_t>(i)],
                    p[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, i)(rng))]);
        }
        out.emplace_back(PermutationElement{std::move(p)});
        break;
      }
      case GroupKind::kCyclicShift:
        out.emplace_back(ShiftElement{std::uniform_int_distribution<int>(0, dim_ - 1)(rng)});
        break;
      case GroupKind::kPhaseCircle:
        out.emplace_back(PhaseElement{angle(rng)});
        break;
      case GroupKind::kOrthogonalTuple:
        out.emplace_back(OrthogonalElement{haar_orthogonal(rng, dim_)});
        break;
      case GroupKind::kShapeGroup: {
        const Matrix r = haar_orthogonal(rng, 2);
        ShapeElement e;
        e.rotation = r;
        e.shift = std::uniform_int_distribution<int>(0, tuple_size_ - 1)(rng);
        out.emplace_back(e);
        break;
      }
      case GroupKind::kExplicitFinite:
        out.emplace_back(MatrixElement{matrices_[std::uniform_int_distribution<std::size_t>(
            0, matrices_.size() - 1)(rng)]});
        break;
      case GroupKind::kHyperoctahedralSigns: {
        std::uint32_t mask = 0;
        for (int i = 0; i < dim_; ++i)
          if (std::bernoulli_distribution(0.5)(rng)) mask |= std::uint32_t{1} << i;
        out.emplace_back(SignsElement{mask});
        break;
      }
    }
  }
  return out;
}

Vector GroupSpec::apply(const GroupElement& g, const VectorRef& x) const {
  require_dim(x.size(), ambient_dim_, "group apply");
  auto wrong = [&]() -> Vector {
    throw InvalidArgument("group element does not belong to " + name());
  };
  return std::visit(
      Overloaded{
          [&](const SignElement& e) -> Vector {
            if (kind_ != GroupKind::kSignFlip) return wrong();
            return static_cast<double>(e.sign) * x;
          },
          [&](const RotationElement& e) -> Vector {
            if (kind_ != GroupKind::kPlanarRotation) return wrong();
            return rotation2(kTwoPi * e.step / e.order) * x;
          },
          [&](const PermutationElement& e) -> Vector {
            if (kind_ != GroupKind::kPermutation ||
                static_cast<int>(e.perm.size()) != ambient_dim_)
              return wrong();
            Vector out(x.size());
            for (std::size_t i = 0; i < e.perm.size(); ++i)
              out[static_cast<Eigen::Index>(i)] = x[e.perm[i]];
            return out;
          },
          [&](const ShiftElement& e) -> Vector {
            if (kind_ != GroupKind::kCyclicShift) return wrong();
            return shift_apply(e.shift, x);
          },
          [&](const PhaseElement& e) -> Vector {
            if (kind_ != GroupKind::kPhaseCircle) return wrong();
            return rotate_phase(x, e.angle);
          },
          [&](const OrthogonalElement& e) -> Vector {
            if (kind_ != GroupKind::kOrthogonalTuple || e.rotation.rows() != dim_)
              return wrong();
            Vector out(x.size());
            Eigen::Map<Matrix>(out.data(), dim_, tuple_size_) =
                e.rotation * Eigen::Map<const Matrix>(x.data(), dim_, tuple_size_);
            return out;
          },
          [&](const ShapeElement& e) -> Vector {
            if (kind_ != GroupKind::kShapeGroup) return wrong();
            return shape_apply(e.rotation, e.shift, x, tuple_size_);
          },
          [&](const MatrixElement& e) -> Vector {
            if (kind_ != GroupKind::kExplicitFinite || e.matrix.cols() != ambient_dim_)
              return wrong();
            return e.matrix * x;
          },
          [&](const SignsElement& e) -> Vector {
            if (kind_ != GroupKind::kHyperoctahedralSigns) return wrong();
            Vector out = x;
            for (int i = 0; i < dim_; ++i)
              if ((e.mask >> i) & 1U) out[i] = -out[i];
            return out;
          },
      },
      g);
}

Alignment GroupSpec::argmax_inner(const VectorRef& x, const VectorRef& y) const {
  require_dim(x.size(), ambient_dim_, "argmax_inner x");
  require_dim(y.size(), ambient_dim_, "argmax_inner y");
  switch (kind_) {
    case GroupKind::kSignFlip: {
      const double ip = x.dot(y);
      // Enumeration order is (+I, -I): +I wins ties.
      if (ip >= 0.0) return {ip, y};
      return {-ip, -y};
    }
    case GroupKind::kPermutation: {
      // Rearrangement: pair the k-th largest entry of y with the k-th largest
      // entry of x.
      const std::vector<int> ox = decreasing_order(x);
      const std::vector<int> oy = decreasing_order(y);
      Alignment a{0.0, Vector(x.size())};
      for (std::size_t i = 0; i < ox.size(); ++i) a.maximizer[ox[i]] = y[oy[i]];
      a.value = x.dot(a.maximizer);
      return a;
    }
    case GroupKind::kHyperoctahedralSigns: {
      Alignment a{0.0, Vector(x.size())};
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        a.maximizer[i] = x[i] * y[i] < 0.0 ? -y[i] : y[i];
      }
      a.value = x.dot(a.maximizer);
      return a;
    }
    case GroupKind::kPhaseCircle: {
      const std::complex<double> z = complex_inner(x, y);
      const double value = std::abs(z);
      if (value == 0.0) return {0.0, y};
      return {value, rotate_phase(y, -std::arg(z))};
    }
    case GroupKind::kOrthogonalTuple: {
      const Eigen::Map<const Matrix> xm(x.data(), dim_, tuple_size_);
      const Eigen::Map<const Matrix> ym(y.data(), dim_, tuple_size_);
      const Matrix m = ym * xm.transpose();
      Alignment a{0.0, Vector(y.size())};
      Matrix r;
      if (dim_ == 2) {
        Eigen::Matrix2d r2;
        a.value = procrustes_2d(m, &r2);
        r = r2;
      } else {
        Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        a.value = svd.singularValues().sum();
        r = svd.matrixV() * svd.matrixU().transpose();
      }
      Eigen::Map<Matrix>(a.maximizer.data(), dim_, tuple_size_) = r * ym;
      return a;
    }
    case GroupKind::kShapeGroup: {
      double best = -1.0;
      int best_shift = 0;
      Eigen::Matrix2d best_r = Eigen::Matrix2d::Identity();
      for (int s = 0; s < tuple_size_; ++s) {
        Eigen::Matrix2d r;
        const double v = procrustes_2d(shifted_cross(x, y, tuple_size_, s), &r);
        if (v > best) {
          best = v;
          best_shift = s;
          best_r = r;
        }
      }
      return {best, shape_apply(best_r, best_shift, y, tuple_size_)};
    }
    case GroupKind::kCyclicShift: {
      double best = -std::numeric_limits<double>::infinity();
      Vector best_gy;
      for (int s = 0; s < dim_; ++s) {
        Vector gy = shift_apply(s, y);
        const double v = x.dot(gy);
        if (v > best) {
          best = v;
          best_gy = std::move(gy);
        }
      }
      return {best, best_gy};
    }
    case GroupKind::kPlanarRotation:
    case GroupKind::kExplicitFinite: {
      double best = -std::numeric_limits<double>::infinity();
      Vector best_gy;
      for (const GroupElement& g : enumerate()) {
        Vector gy = apply(g, y);
        const double v = x.dot(gy);
        if (v > best) {
          best = v;
          best_gy = std::move(gy);
        }
      }
      return {best, best_gy};
    }
  }
  throw InvalidArgument("unknown group kind");
}

double GroupSpec::max_inner(const VectorRef& x, const VectorRef& y) const {
  switch (kind_) {
    case GroupKind::kSignFlip:
      require_dim(x.size(), ambient_dim_, "max_inner x");
      require_dim(y.size(), ambient_dim_, "max_inner y");
      return std::abs(x.dot(y));
    case GroupKind::kHyperoctahedralSigns:
      require_dim(x.size(), ambient_dim_, "max_inner x");
      require_dim(y.size(), ambient_dim_, "max_inner y");
      return x.cwiseAbs().dot(y.cwiseAbs());
    case GroupKind::kPhaseCircle:
      require_dim(x.size(), ambient_dim_, "max_inner x");
      require_dim(y.size(), ambient_dim_, "max_inner y");
      return std::abs(complex_inner(x, y));
    case GroupKind::kShapeGroup: {
      require_dim(x.size(), ambient_dim_, "max_inner x");
      require_dim(y.size(), ambient_dim_, "max_inner y");
      double best = 0.0;
      for (int s = 0; s < tuple_size_; ++s) {
        const Eigen::Matrix2d m = shifted_cross(x, y, tuple_size_, s);
        best = std::max(best, procrustes_2d(m, nullptr));
      }
      return best;
    }
    case GroupKind::kPlanarRotation: {
      require_dim(x.size(), 2, "max_inner x");
      require_dim(y.size(), 2, "max_inner y");
      double best = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < order_; ++j) {
        const double a = kTwoPi * j / order_;
        const double c = std::cos(a), s = std::sin(a);
        best = std::max(best, x[0] * (c * y[0] - s * y[1]) + x[1] * (s * y[0] + c * y[1]));
      }
      return best;
    }
    default:
      return argmax_inner(x, y).value;
  }
}

std::string to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::kSignFlip: return "sign_flip";
    case GroupKind::kPlanarRotation: return "planar_rotation";
    case GroupKind::kPermutation: return "permutation";
    case GroupKind::kCyclicShift: return "cyclic_shift";
    case GroupKind::kPhaseCircle: return "phase_circle";
    case GroupKind::kOrthogonalTuple: return "orthogonal_tuple";
    case GroupKind::kShapeGroup: return "shape_group";
    case GroupKind::kExplicitFinite: return "explicit_finite";
    case GroupKind::kHyperoctahedralSigns: return "hyperoctahedral_signs";
  }
  return "unknown";
}

GroupKind group_kind_from_string(const std::string& s) {
  for (GroupKind k : {GroupKind::kSignFlip, GroupKind::kPlanarRotation,
                      GroupKind::kPermutation, GroupKind::kCyclicShift,
                      GroupKind::kPhaseCircle, GroupKind::kOrthogonalTuple,
                      GroupKind::kShapeGroup, GroupKind::kExplicitFinite,
                      GroupKind::kHyperoctahedralSigns}) {
    if (to_string(k) == s) return k;
  }
  throw ParseError("unknown group kind '" + s + "'");
}

std::string GroupSpec::name() const {
  switch (kind_) {
    case GroupKind::kPlanarRotation:
      return "planar_rotation(r=" + std::to_string(order_) + ")";
    case GroupKind::kOrthogonalTuple:
      return "orthogonal_tuple(d=" + std::to_string(dim_) + ",k=" + std::to_string(tuple_size_) + ")";
    case GroupKind::kShapeGroup:
      return "shape_group(k=" + std::to_string(tuple_size_) + ")";
    case GroupKind::kExplicitFinite:
      return "explicit_finite(d=" + std::to_string(dim_) + ",|G|=" + std::to_string(matrices_.size()) + ")";
    default:
      return to_string(kind_) + "(d=" + std::to_string(dim_) + ")";
  }
}

bool operator==(const GroupSpec& a, const GroupSpec& b) {
  if (a.kind_ != b.kind_ || a.ambient_dim_ != b.ambient_dim_ || a.dim_ != b.dim_ ||
      a.order_ != b.order_ || a.tuple_size_ != b.tuple_size_ ||
      a.matrices_.size() != b.matrices_.size())
    return false;
  for (std::size_t i = 0; i < a.matrices_.size(); ++i)
    if (a.matrices_[i] != b.matrices_[i]) return false;
  return true;
}

}  // namespace orbitmap
