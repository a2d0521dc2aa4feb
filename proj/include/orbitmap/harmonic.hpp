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

#ifndef ORBITMAP_HARMONIC_HPP_
#define ORBITMAP_HARMONIC_HPP_

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "orbitmap/common.hpp"
#include "orbitmap/embeddings.hpp"
#include "orbitmap/filters.hpp"
#include "orbitmap/groups.hpp"

namespace orbitmap {

// ---------------------------------------------------------------------------
// Planar rotations: Fourier deconvolution against the max filter kernel.
// ---------------------------------------------------------------------------

/// The max filter of (cos t, sin t) against e_1 under C_r, as a function of
/// t: cos t on [-pi/r, pi/r], extended 2 pi / r periodically.
double max_filter_kernel(int order, double theta);

/// Fourier coefficient (1/2pi) int f(t) e^{-ikt} dt of the kernel above at
/// frequency k. Zero unless r divides k; for k = r m it is
/// (-1)^{m+1} (r/pi) sin(pi/r) / ((r m)^2 - 1).
double kernel_fourier(int order, int k);

/// A real trigonometric polynomial sum_{|k|<=K} c_k e^{ik t} stored by its
/// coefficients; c_{-k} = conj(c_k) is maintained by set_coefficient.
class TrigPolynomial {
 public:
  explicit TrigPolynomial(int max_frequency = 0);

  /// Coefficients for k = 0..K; the negative half is the conjugate.
  static TrigPolynomial from_coefficients(const std::vector<std::complex<double>>& nonnegative);
  /// a0 + sum_k (a_k cos k t + b_k sin k t), with a, b indexed from k = 1.
  static TrigPolynomial from_cos_sin(double a0, const std::vector<double>& a,
                                     const std::vector<double>& b);
  /// Projects a real function onto frequencies |k| <= K with the n-point
  /// trapezoid rule (exact for trigonometric polynomials of degree < n - K).
  static TrigPolynomial from_samples(const std::function<double(double)>& fn, int max_frequency,
                                     int n_samples);

  int max_frequency() const { return max_frequency_; }
  std::complex<double> coefficient(int k) const;
  void set_coefficient(int k, std::complex<double> value);
  double operator()(double theta) const;

  /// True when every coefficient at a frequency not divisible by r is within
  /// tolerance of zero.
  bool is_invariant(int order, double tolerance = 1e-12) const;
  double max_coefficient_difference(const TrigPolynomial& other) const;

 private:
  int max_frequency_;
  std::vector<std::complex<double>> coeffs_;  // index k + K
};

/// Coefficient function c with g = (1/2pi) int c(phi) f(t - phi) dphi:
/// c_k = g_k / f_k on frequencies divisible by r. Throws InvalidArgument when
/// g is not C_r-invariant.
TrigPolynomial deconvolve(int order, const TrigPolynomial& g);
/// The forward map c -> (1/2pi) c * f, coefficientwise.
TrigPolynomial convolve(int order, const TrigPolynomial& c);

/// (1/2pi) int_0^{2pi} c(phi) f(theta - phi) dphi by composite Gauss-Legendre
/// on the pieces where the kernel is smooth, using about n_quad nodes.
double kernel_convolution(int order, const TrigPolynomial& c, double theta, int n_quad);

/// Sup over an n_theta grid of |(1/2pi) c * f - g|.
double verify_integral_identity(int order, const TrigPolynomial& g, const TrigPolynomial& c,
                                int n_theta, int n_quad);

// ---------------------------------------------------------------------------
// Real phase retrieval: Gegenbauer reduction of |<x, .>| on S^{d-1}.
// ---------------------------------------------------------------------------

/// Surface measure of the unit sphere S^{m} in R^{m+1}.
double sphere_measure(int m);

/// Gegenbauer polynomials G_0..G_K for weight (1-t^2)^{(d-3)/2} on [-1,1],
/// normalized by G_k(1) = 1, together with the coefficients
/// c_k = omega_{d-2} int |t| G_k(t) (1-t^2)^{(d-3)/2} dt.
class GegenbauerTable {
 public:
  static constexpr int kMaxDegree = 20;

  GegenbauerTable(int d, int max_degree);

  int dimension() const { return d_; }
  double alpha() const { return (d_ - 2) / 2.0; }
  int max_degree() const { return static_cast<int>(polys_.size()) - 1; }

  /// Monomial coefficients of G_k, lowest degree first.
  const std::vector<long double>& polynomial(int k) const { return polys_.at(static_cast<std::size_t>(k)); }
  double evaluate(int k, double t) const;

  /// int_{-1}^{1} |t| G_k(t) (1-t^2)^{(d-3)/2} dt (no equator factor).
  double reduced_coefficient(int k) const { return reduced_.at(static_cast<std::size_t>(k)); }
  /// c_k including the equator measure omega_{d-2}.
  double coefficient(int k) const { return equator_ * reduced_coefficient(k); }
  double equator_measure() const { return equator_; }

 private:
  int d_;
  double equator_;
  std::vector<std::vector<long double>> polys_;
  std::vector<double> reduced_;
};

/// Polynomial on R^d as a sum of monomials.
class Polynomial {
 public:
  struct Term {
    double coefficient = 0.0;
    std::vector<int> exponents;
  };

  explicit Polynomial(int dim) : dim_(dim) {}
  Polynomial& add(double coefficient, std::vector<int> exponents);
  static Polynomial constant(int dim, double value);

  int dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }
  double operator()(const VectorRef& x) const;
  Vector gradient(const VectorRef& x) const;
  /// Degree if every term has the same total degree, otherwise nullopt.
  std::optional<int> homogeneous_degree() const;
  Polynomial laplacian() const;
  bool is_zero(double tolerance = 0.0) const;
  Polynomial scaled(double c) const;

 private:
  int dim_;
  std::vector<Term> terms_;
};

/// q = p / c_k for an even-degree homogeneous harmonic p, so that
/// int q(y) |<x, y>| domega(y) = p(x) on the sphere (unnormalized measure).
struct HarmonicDensity {
  Polynomial p;
  int degree = 0;
  double c_k = 0.0;
  double operator()(const VectorRef& y) const { return p(y) / c_k; }
};

HarmonicDensity pr_coefficient_q(int d, const Polynomial& p);

// ---------------------------------------------------------------------------
// Riemann sums of integral combinations of max filters.
// ---------------------------------------------------------------------------

struct SphereCell {
  Vector representative;
  double measure = 0.0;
  double diameter = 0.0;  // chordal diameter bound of the cell
};

struct SpherePartition {
  int dim = 0;
  std::vector<SphereCell> cells;
  double diameter_bound = 0.0;  // epsilon: every cell diameter is at most this
  double total_measure() const;
};

/// d = 2: n equal arcs with midpoint representatives (exact). d = 3: spherical
/// Fibonacci lattice cells with equal nominal measure 4 pi / n.
SpherePartition make_partition(int d, int n);

using SphereFunction = std::function<double(const VectorRef&)>;

/// Bank with the cell representatives as templates and one linear row
/// (q_j(y_k) |I_k|)_k per density q_j.
struct RiemannBank {
  FilterBank bank;
  LinearMap weights;
};

RiemannBank riemann_bank(const GroupSpec& group, const std::vector<SphereFunction>& densities,
                         const SpherePartition& partition);
RiemannBank riemann_bank(const GroupSpec& group, const SphereFunction& density,
                         const SpherePartition& partition);

/// Density q(y) = c(angle(y)) / 2pi on S^1 for a coefficient function c, so
/// that integrating against the unnormalized arc measure reproduces g.
SphereFunction circle_density(const TrigPolynomial& c);

/// A scalar map with an optional analytic (sub)gradient. The gradient may
/// return nullopt to flag a detected point of nondifferentiability.
struct ScalarMap {
  std::function<double(const VectorRef&)> value;
  std::function<std::optional<Vector>(const VectorRef&)> gradient;
};

struct LipschitzEstimate {
  double value = 0.0;
  std::size_t samples_used = 0;
  std::size_t skipped = 0;
};

/// Largest gradient norm over n_samples uniform points of S^{dim-1}. Valid for
/// positively homogeneous maps. Uses the analytic gradient when present and
/// central differences (step 1e-6) otherwise.
LipschitzEstimate lip_norm_estimate(const ScalarMap& f, int dim, std::size_t n_samples,
                                    std::uint64_t seed);
/// Vector-valued version: largest spectral norm of the central-difference
/// Jacobian.
LipschitzEstimate lip_norm_estimate(const EmbeddingModel& f, std::size_t n_samples,
                                    std::uint64_t seed);

/// The scalar map x -> row(bank(x)) - target(x), with gradient
/// row * subgradient(x) - target_gradient(x). Points where some template has
/// two group elements within 1e-9 of its max are flagged nondifferentiable.
ScalarMap riemann_error_map(const RiemannBank& rb, Eigen::Index row,
                            std::function<double(const VectorRef&)> target,
                            std::function<Vector(const VectorRef&)> target_gradient);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace orbitmap

#endif  // ORBITMAP_HARMONIC_HPP_
