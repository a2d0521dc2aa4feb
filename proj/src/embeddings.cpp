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

#include "orbitmap/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "orbitmap/parallel.hpp"

namespace orbitmap {

namespace {

using Complex = std::complex<double>;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vector power_sums(const VectorRef& x) {
  const Eigen::Index d = x.size();
  Vector out = Vector::Zero(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double p = 1.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      p *= x[j];
      out[k] += p;
    }
  }
  return out;
}

Vector bispectrum(const VectorRef& x) {
  const auto d = static_cast<int>(x.size());
  std::vector<Complex> xh(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    Complex s = 0.0;
    for (int j = 0; j < d; ++j) {
      const double t = -2.0 * std::numbers::pi * a * j / d;
      s += x[j] * Complex(std::cos(t), std::sin(t));
    }
    xh[static_cast<std::size_t>(a)] = s;
  }
  Vector out(2 * d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const int c = ((-a - b) % d + d) % d;
      const Complex v = xh[static_cast<std::size_t>(a)] * xh[static_cast<std::size_t>(b)] *
                        xh[static_cast<std::size_t>(c)];
      out[2 * (a * d + b)] = v.real();
      out[2 * (a * d + b) + 1] = v.imag();
    }
  }
  return out;
}

Vector hermitian_outer(const VectorRef& x) {
  const auto d = static_cast<int>(x.size() / 2);
  Vector out(d * d);
  Eigen::Index t = 0;
  for (int a = 0; a < d; ++a) {
    const Complex xa(x[2 * a], x[2 * a + 1]);
    out[t++] = std::norm(xa);
    for (int b = a + 1; b < d; ++b) {
      const Complex v = xa * std::conj(Complex(x[2 * b], x[2 * b + 1]));
      out[t++] = std::numbers::sqrt2 * v.real();
      out[t++] = std::numbers::sqrt2 * v.imag();
    }
  }
  return out;
}

}  // namespace

int PolyRow::input_dim() const {
  switch (family) {
    case PolyFamily::kComplexPower: return 2;
    case PolyFamily::kHermitianOuter: return 2 * d;
    case PolyFamily::kGram: return d * k;
    default: return d;
  }
}

int PolyRow::output_dim() const {
  switch (family) {
    case PolyFamily::kOuterProduct: return d * (d + 1) / 2;
    case PolyFamily::kPowerSums: return d;
    case PolyFamily::kBispectrum: return 2 * d * d;
    case PolyFamily::kComplexPower: return 2;
    case PolyFamily::kHermitianOuter: return d * d;
    case PolyFamily::kGram: return k * (k + 1) / 2;
  }
  return 0;
}

GroupSpec PolyRow::group() const {
  switch (family) {
    case PolyFamily::kOuterProduct: return GroupSpec::sign_flip(d);
    case PolyFamily::kPowerSums: return GroupSpec::permutation(d);
    case PolyFamily::kBispectrum: return GroupSpec::cyclic_shift(d);
    case PolyFamily::kComplexPower: return GroupSpec::planar_rotation(d);
    case PolyFamily::kHermitianOuter: return GroupSpec::phase_circle(d);
    case PolyFamily::kGram: return GroupSpec::orthogonal_tuple(d, k);
  }
  throw InvalidArgument("unknown polynomial family");
}

std::string to_string(PolyFamily family) {
  switch (family) {
    case PolyFamily::kOuterProduct: return "outer_product";
    case PolyFamily::kPowerSums: return "power_sums";
    case PolyFamily::kBispectrum: return "bispectrum";
    case PolyFamily::kComplexPower: return "complex_power";
    case PolyFamily::kHermitianOuter: return "hermitian_outer";
    case PolyFamily::kGram: return "gram";
  }
  return "unknown";
}

PolyFamily poly_family_from_string(const std::string& s) {
  for (PolyFamily f : {PolyFamily::kOuterProduct, PolyFamily::kPowerSums,
                       PolyFamily::kBispectrum, PolyFamily::kComplexPower,
                       PolyFamily::kHermitianOuter, PolyFamily::kGram}) {
    if (to_string(f) == s) return f;
  }
  throw ParseError("unknown polynomial family '" + s + "'");
}

std::string PolyRow::name() const {
  std::string s = to_string(family) + "(d=" + std::to_string(d);
  if (family == PolyFamily::kGram) s += ",k=" + std::to_string(k);
  return s + ")";
}

Vector flatten_symmetric(const MatrixRef& s) {
  const Eigen::Index d = s.rows();
  Vector out(d * (d + 1) / 2);
  Eigen::Index t = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    out[t++] = s(i, i);
    for (Eigen::Index j = i + 1; j < d; ++j) out[t++] = std::numbers::sqrt2 * s(i, j);
  }
  return out;
}

Vector optimal_planar(int order, const VectorRef& x) {
  require_dim(x.size(), 2, "optimal_planar input");
  if (order < 2) throw InvalidArgument("optimal_planar needs order r >= 2");
  const double norm = x.norm();
  if (norm == 0.0) return Vector::Zero(3);
  const double a = std::numbers::pi / (2.0 * order);
  const Complex phase = std::pow(Complex(x[0], x[1]) / norm, order);
  Vector h(3);
  h << norm * std::cos(a), norm * phase.real() * std::sin(a), norm * phase.imag() * std::sin(a);
  return h;
}

Vector optimal_psd(const VectorRef& x) {
  const double norm = x.norm();
  if (norm == 0.0) return Vector::Zero(x.size() * (x.size() + 1) / 2);
  return flatten_symmetric(x * x.transpose() / norm);
}

Vector weyl_sort(const GroupSpec& group, const VectorRef& x) {
  require_dim(x.size(), group.ambient_dim(), "weyl_sort input");
  Vector s;
  switch (group.kind()) {
    case GroupKind::kPermutation:
      s = x;
      break;
    case GroupKind::kHyperoctahedralSigns:
      s = x.cwiseAbs();
      break;
    default:
      throw InvalidArgument("weyl_sort does not support " + group.name());
  }
  std::sort(s.data(), s.data() + s.size(), std::greater<>());
  return s;
}

Vector poly_invariant(const PolyRow& row, const VectorRef& x) {
  require_dim(x.size(), row.input_dim(), "polynomial invariant input");
  switch (row.family) {
    case PolyFamily::kOuterProduct:
      return flatten_symmetric(x * x.transpose());
    case PolyFamily::kPowerSums:
      return power_sums(x);
    case PolyFamily::kBispectrum:
      return bispectrum(x);
    case PolyFamily::kComplexPower: {
      const Complex v = std::pow(Complex(x[0], x[1]), row.d);
      Vector out(2);
      out << v.real(), v.imag();
      return out;
    }
    case PolyFamily::kHermitianOuter:
      return hermitian_outer(x);
    case PolyFamily::kGram: {
      const Eigen::Map<const Matrix> xm(x.data(), row.d, row.k);
      return flatten_symmetric(xm.transpose() * xm);
    }
  }
  throw InvalidArgument("unknown polynomial family");
}

Vector hpoly_invariant(const PolyRow& row, const VectorRef& x) {
  require_dim(x.size(), row.input_dim(), "polynomial invariant input");
  const double norm = x.norm();
  if (norm == 0.0) return Vector::Zero(row.output_dim());
  return norm * poly_invariant(row, x / norm);
}

Vector EmbeddingModel::operator()(const VectorRef& x) const {
  return std::visit(
      Overloaded{
          [&](const MaxFilterModel& m) -> Vector { return m.bank.apply(x); },
          [&](const LinearOfBankModel& m) -> Vector { return lmf_apply(m.linear, m.bank, x); },
          [&](const ReluNetModel& m) -> Vector {
            require_dim(x.size(), m.hidden.cols(), "relu input");
            return m.output * (m.hidden * x).cwiseMax(0.0);
          },
          [&](const OptimalPlanarModel& m) -> Vector { return optimal_planar(m.order, x); },
          [&](const OptimalPsdModel& m) -> Vector {
            require_dim(x.size(), m.dim, "optimal_psd input");
            return optimal_psd(x);
          },
          [&](const WeylSortModel& m) -> Vector { return weyl_sort(m.group, x); },
          [&](const PolyModel& m) -> Vector { return poly_invariant(m.row, x); },
          [&](const HPolyModel& m) -> Vector { return hpoly_invariant(m.row, x); },
      },
      v_);
}

Matrix EmbeddingModel::embed(const PointSet& points) const {
  if (const auto* mf = std::get_if<MaxFilterModel>(&v_)) return mf->bank.apply_all(points);
  if (const auto* lmf = std::get_if<LinearOfBankModel>(&v_)) {
    return lmf->linear.matrix() * lmf->bank.apply_all(points);
  }
  if (const auto* relu = std::get_if<ReluNetModel>(&v_)) {
    require_dim(points.rows(), relu->hidden.cols(), "relu input");
    return relu->output * (relu->hidden * points).cwiseMax(0.0);
  }
  Matrix out(output_dim(), points.cols());
  parallel_for(0, static_cast<std::size_t>(points.cols()), [&](std::size_t j) {
    out.col(static_cast<Eigen::Index>(j)) = (*this)(points.col(static_cast<Eigen::Index>(j)));
  });
  return out;
}

Eigen::Index EmbeddingModel::input_dim() const {
  return std::visit(
      Overloaded{
          [](const MaxFilterModel& m) -> Eigen::Index { return m.bank.input_dim(); },
          [](const LinearOfBankModel& m) -> Eigen::Index { return m.bank.input_dim(); },
          [](const ReluNetModel& m) -> Eigen::Index { return m.hidden.cols(); },
          [](const OptimalPlanarModel&) -> Eigen::Index { return 2; },
          [](const OptimalPsdModel& m) -> Eigen::Index { return m.dim; },
          [](const WeylSortModel& m) -> Eigen::Index { return m.group.ambient_dim(); },
          [](const PolyModel& m) -> Eigen::Index { return m.row.input_dim(); },
          [](const HPolyModel& m) -> Eigen::Index { return m.row.input_dim(); },
      },
      v_);
}

Eigen::Index EmbeddingModel::output_dim() const {
  return std::visit(
      Overloaded{
          [](const MaxFilterModel& m) -> Eigen::Index { return m.bank.size(); },
          [](const LinearOfBankModel& m) -> Eigen::Index { return m.linear.rows(); },
          [](const ReluNetModel& m) -> Eigen::Index { return m.output.rows(); },
          [](const OptimalPlanarModel&) -> Eigen::Index { return 3; },
          [](const OptimalPsdModel& m) -> Eigen::Index { return m.dim * (m.dim + 1) / 2; },
          [](const WeylSortModel& m) -> Eigen::Index { return m.group.ambient_dim(); },
          [](const PolyModel& m) -> Eigen::Index { return m.row.output_dim(); },
          [](const HPolyModel& m) -> Eigen::Index { return m.row.output_dim(); },
      },
      v_);
}

std::string EmbeddingModel::kind_name() const {
  static constexpr const char* kNames[] = {"mf",          "lmf",       "relu", "optimal_planar",
                                           "optimal_psd", "weyl_sort", "poly", "hpoly"};
  return kNames[v_.index()];
}

bool EmbeddingModel::is_group_invariant() const {
  return !std::holds_alternative<ReluNetModel>(v_);
}

bool EmbeddingModel::is_positively_homogeneous() const {
  // The ReLU network has no biases, so it is homogeneous as well.
  return !std::holds_alternative<PolyModel>(v_);
}

EmbeddingModel EmbeddingModel::scaled(double c) const {
  if (!(c > 0.0)) throw InvalidArgument("model scale must be positive");
  if (const auto* mf = std::get_if<MaxFilterModel>(&v_)) {
    return MaxFilterModel{FilterBank(mf->bank.group(), c * mf->bank.templates())};
  }
  if (const auto* lmf = std::get_if<LinearOfBankModel>(&v_)) {
    return LinearOfBankModel{LinearMap(c * lmf->linear.matrix()), lmf->bank};
  }
  if (const auto* relu = std::get_if<ReluNetModel>(&v_)) {
    return ReluNetModel{relu->hidden, c * relu->output};
  }
  throw InvalidArgument("scaling is only defined for trainable models");
}

}  // namespace orbitmap
