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

#include "orbitmap/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "orbitmap/rng.hpp"

namespace orbitmap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kGaussNodes = 30;

template <class F>
double composite_gauss(const F& f, double a, double b, int pieces) {
  using Rule = boost::math::quadrature::gauss<double, kGaussNodes>;
  const double h = (b - a) / pieces;
  double sum = 0.0;
  for (int p = 0; p < pieces; ++p) sum += Rule::integrate(f, a + p * h, a + (p + 1) * h);
  return sum;
}

}  // namespace

double max_filter_kernel(int order, double theta) {
  if (order < 1) throw InvalidArgument("kernel order must be positive");
  const double period = kTwoPi / order;
  return std::cos(theta - period * std::round(theta / period));
}

double kernel_fourier(int order, int k) {
  if (order < 2) throw InvalidArgument("kernel_fourier needs order r >= 2");
  if (k % order != 0) return 0.0;
  const int m = k / order;
  const double sign = (m % 2 == 0) ? -1.0 : 1.0;  // (-1)^{m+1}
  const double rm = static_cast<double>(k);
  return sign * (order / kPi) * std::sin(kPi / order) / (rm * rm - 1.0);
}

TrigPolynomial::TrigPolynomial(int max_frequency)
    : max_frequency_(max_frequency),
      coeffs_(static_cast<std::size_t>(2 * max_frequency + 1), {0.0, 0.0}) {
  if (max_frequency < 0) throw InvalidArgument("negative maximum frequency");
}

TrigPolynomial TrigPolynomial::from_coefficients(
    const std::vector<std::complex<double>>& nonnegative) {
  if (nonnegative.empty()) return TrigPolynomial(0);
  TrigPolynomial p(static_cast<int>(nonnegative.size()) - 1);
  for (std::size_t k = 0; k < nonnegative.size(); ++k) {
    p.set_coefficient(static_cast<int>(k), nonnegative[k]);
  }
  return p;
}

TrigPolynomial TrigPolynomial::from_cos_sin(double a0, const std::vector<double>& a,
                                            const std::vector<double>& b) {
  const auto k_max = static_cast<int>(std::max(a.size(), b.size()));
  TrigPolynomial p(k_max);
  p.set_coefficient(0, a0);
  for (int k = 1; k <= k_max; ++k) {
    const double ak = static_cast<std::size_t>(k) <= a.size() ? a[static_cast<std::size_t>(k - 1)] : 0.0;
    const double bk = static_cast<std::size_t>(k) <= b.size() ? b[static_cast<std::size_t>(k - 1)] : 0.0;
    // a cos + b sin = (a - i b)/2 e^{ikt} + (a + i b)/2 e^{-ikt}
    p.set_coefficient(k, {ak / 2.0, -bk / 2.0});
  }
  return p;
}

TrigPolynomial TrigPolynomial::from_samples(const std::function<double(double)>& fn,
                                            int max_frequency, int n_samples) {
  if (n_samples <= 2 * max_frequency) {
    throw InvalidArgument("need more than 2K samples to resolve frequency K");
  }
  std::vector<double> values(static_cast<std::size_t>(n_samples));
  for (int j = 0; j < n_samples; ++j) values[static_cast<std::size_t>(j)] = fn(kTwoPi * j / n_samples);
  TrigPolynomial p(max_frequency);
  for (int k = 0; k <= max_frequency; ++k) {
    std::complex<double> s = 0.0;
    for (int j = 0; j < n_samples; ++j) {
      const double t = -kTwoPi * k * j / n_samples;
      s += values[static_cast<std::size_t>(j)] * std::complex<double>(std::cos(t), std::sin(t));
    }
    p.set_coefficient(k, s / static_cast<double>(n_samples));
  }
  return p;
}

std::complex<double> TrigPolynomial::coefficient(int k) const {
  if (k < -max_frequency_ || k > max_frequency_) return {0.0, 0.0};
  return coeffs_[static_cast<std::size_t>(k + max_frequency_)];
}

void TrigPolynomial::set_coefficient(int k, std::complex<double> value) {
  if (k < -max_frequency_ || k > max_frequency_) {
    throw InvalidArgument("frequency " + std::to_string(k) + " outside the stored range");
  }
  if (k == 0) value = {value.real(), 0.0};
  coeffs_[static_cast<std::size_t>(k + max_frequency_)] = value;
  coeffs_[static_cast<std::size_t>(-k + max_frequency_)] = std::conj(value);
}

double TrigPolynomial::operator()(double theta) const {
  double s = coefficient(0).real();
  for (int k = 1; k <= max_frequency_; ++k) {
    const std::complex<double> e(std::cos(k * theta), std::sin(k * theta));
    s += 2.0 * (coefficient(k) * e).real();
  }
  return s;
}

bool TrigPolynomial::is_invariant(int order, double tolerance) const {
  for (int k = 1; k <= max_frequency_; ++k) {
    if (k % order != 0 && std::abs(coefficient(k)) > tolerance) return false;
  }
  return true;
}

double TrigPolynomial::max_coefficient_difference(const TrigPolynomial& other) const {
  const int k_max = std::max(max_frequency_, other.max_frequency_);
  double worst = 0.0;
  for (int k = -k_max; k <= k_max; ++k) {
    worst = std::max(worst, std::abs(coefficient(k) - other.coefficient(k)));
  }
  return worst;
}

TrigPolynomial deconvolve(int order, const TrigPolynomial& g) {
  if (!g.is_invariant(order)) {
    throw InvalidArgument("input is not invariant under rotations of order " +
                          std::to_string(order));
  }
  TrigPolynomial c(g.max_frequency());
  for (int k = 0; k <= g.max_frequency(); k += order) {
    c.set_coefficient(k, g.coefficient(k) / kernel_fourier(order, k));
  }
  return c;
}

TrigPolynomial convolve(int order, const TrigPolynomial& c) {
  TrigPolynomial g(c.max_frequency());
  for (int k = 0; k <= c.max_frequency(); ++k) {
    g.set_coefficient(k, c.coefficient(k) * kernel_fourier(order, k));
  }
  return g;
}

double kernel_convolution(int order, const TrigPolynomial& c, double theta, int n_quad) {
  // With psi = theta - phi the kernel is cos(psi - 2 pi j / r) on the j-th
  // piece [(2j - 1) pi / r, (2j + 1) pi / r], smooth on each piece.
  const int pieces = std::max(1, n_quad / (order * kGaussNodes));
  double total = 0.0;
  for (int j = 0; j < order; ++j) {
    const double center = kTwoPi * j / order;
    const auto integrand = [&](double psi) { return c(theta - psi) * std::cos(psi - center); };
    total += composite_gauss(integrand, center - kPi / order, center + kPi / order, pieces);
  }
  return total / kTwoPi;
}

double verify_integral_identity(int order, const TrigPolynomial& g, const TrigPolynomial& c,
                                int n_theta, int n_quad) {
  double worst = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    const double theta = kTwoPi * i / n_theta;
    worst = std::max(worst, std::abs(kernel_convolution(order, c, theta, n_quad) - g(theta)));
  }
  return worst;
}

double sphere_measure(int m) {
  // |S^m| = 2 pi^{(m+1)/2} / Gamma((m+1)/2)
  const double h = (m + 1) / 2.0;
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

GegenbauerTable::GegenbauerTable(int d, int max_degree) : d_(d) {
  if (d < 3) throw InvalidArgument("Gegenbauer tables need d >= 3");
  if (max_degree < 0 || max_degree > kMaxDegree) {
    throw InvalidArgument("Gegenbauer degree must lie in [0, " + std::to_string(kMaxDegree) + "]");
  }
  equator_ = sphere_measure(d - 2);
  const long double a = (d - 3) / 2.0L;

  // Exact moments of the weight: int t^n (1-t^2)^a dt = B((n+1)/2, a+1).
  std::vector<long double> mu(static_cast<std::size_t>(2 * max_degree + 3), 0.0L);
  for (std::size_t n = 0; n < mu.size(); n += 2) {
    const long double h = (static_cast<long double>(n) + 1.0L) / 2.0L;
    mu[n] = std::exp(std::lgamma(h) + std::lgamma(a + 1.0L) - std::lgamma(h + a + 1.0L));
  }
  const auto inner = [&](const std::vector<long double>& p, const std::vector<long double>& q) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < q.size(); ++j) s += p[i] * q[j] * mu[i + j];
    return s;
  };

  // Gram-Schmidt on the sequence t G_{j-1}, which has leading term t^j and
  // spans the same space as the monomials; two passes for stability.
  polys_.push_back({1.0L});
  for (int j = 1; j <= max_degree; ++j) {
    std::vector<long double> v(static_cast<std::size_t>(j + 1), 0.0L);
    const auto& prev = polys_.back();
    for (std::size_t i = 0; i < prev.size(); ++i) v[i + 1] = prev[i];
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& gi : polys_) {
        const long double coef = inner(v, gi) / inner(gi, gi);
        for (std::size_t i = 0; i < gi.size(); ++i) v[i] -= coef * gi[i];
      }
    }
    long double at_one = 0.0L;
    for (long double x : v) at_one += x;
    for (long double& x : v) x /= at_one;
    polys_.push_back(std::move(v));
  }

  // Reduced coefficients by adaptive Gauss-Kronrod in t = cos(theta), where
  // the weight becomes sin^{d-2}(theta); split at the kink of |t|.
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
  for (int k = 0; k <= max_degree; ++k) {
    const auto integrand = [&, k](double theta) {
      const double t = std::cos(theta);
      return std::abs(t) * evaluate(k, t) * std::pow(std::sin(theta), d - 2);
    };
    const double left = Kronrod::integrate(integrand, 0.0, kPi / 2.0, 15, 1e-15);
    const double right = Kronrod::integrate(integrand, kPi / 2.0, kPi, 15, 1e-15);
    reduced_.push_back(left + right);
  }
}

double GegenbauerTable::evaluate(int k, double t) const {
  const auto& c = polynomial(k);
  long double s = 0.0L, one = 0.0L;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    s = s * t + *it;
    one = one + *it;
  }
  return static_cast<double>(s / one);
}

Polynomial& Polynomial::add(double coefficient, std::vector<int> exponents) {
  require_dim(static_cast<Eigen::Index>(exponents.size()), dim_, "polynomial term");
  for (int e : exponents)
    if (e < 0) throw InvalidArgument("negative exponent");
  terms_.push_back({coefficient, std::move(exponents)});
  return *this;
}

Polynomial Polynomial::constant(int dim, double value) {
  Polynomial p(dim);
  p.add(value, std::vector<int>(static_cast<std::size_t>(dim), 0));
  return p;
}

double Polynomial::operator()(const VectorRef& x) const {
  require_dim(x.size(), dim_, "polynomial argument");
  double s = 0.0;
  for (const Term& t : terms_) {
    double v = t.coefficient;
    for (int i = 0; i < dim_; ++i) v *= std::pow(x[i], t.exponents[static_cast<std::size_t>(i)]);
    s += v;
  }
  return s;
}

Vector Polynomial::gradient(const VectorRef& x) const {
  require_dim(x.size(), dim_, "polynomial argument");
  Vector g = Vector::Zero(dim_);
  for (const Term& t : terms_) {
    for (int i = 0; i < dim_; ++i) {
      const int ei = t.exponents[static_cast<std::size_t>(i)];
      if (ei == 0) continue;
      double v = t.coefficient * ei;
      for (int j = 0; j < dim_; ++j) {
        const int ej = t.exponents[static_cast<std::size_t>(j)] - (j == i ? 1 : 0);
        v *= std::pow(x[j], ej);
      }
      g[i] += v;
    }
  }
  return g;
}

std::optional<int> Polynomial::homogeneous_degree() const {
  std::optional<int> deg;
  for (const Term& t : terms_) {
    if (t.coefficient == 0.0) continue;
    int s = 0;
    for (int e : t.exponents) s += e;
    if (deg && *deg != s) return std::nullopt;
    deg = s;
  }
  return deg ? deg : std::optional<int>(0);
}

Polynomial Polynomial::laplacian() const {
  std::map<std::vector<int>, double> acc;
  for (const Term& t : terms_) {
    for (int i = 0; i < dim_; ++i) {
      const int e = t.exponents[static_cast<std::size_t>(i)];
      if (e < 2) continue;
      std::vector<int> ex = t.exponents;
      ex[static_cast<std::size_t>(i)] -= 2;
      acc[ex] += t.coefficient * e * (e - 1);
    }
  }
  Polynomial out(dim_);
  for (auto& [ex, c] : acc) out.add(c, ex);
  return out;
}

bool Polynomial::is_zero(double tolerance) const {
  std::map<std::vector<int>, double> acc;
  for (const Term& t : terms_) acc[t.exponents] += t.coefficient;
  return std::all_of(acc.begin(), acc.end(),
                     [&](const auto& kv) { return std::abs(kv.second) <= tolerance; });
}

Polynomial Polynomial::scaled(double c) const {
  Polynomial out = *this;
  for (Term& t : out.terms_) t.coefficient *= c;
  return out;
}

HarmonicDensity pr_coefficient_q(int d, const Polynomial& p) {
  if (p.dim() != d) throw DimensionMismatch("polynomial dimension does not match d");
  const std::optional<int> degree = p.homogeneous_degree();
  if (!degree) throw InvalidArgument("polynomial is not homogeneous");
  if (*degree % 2 != 0) throw InvalidArgument("odd-degree polynomials are not sign invariant");
  if (!p.laplacian().is_zero(1e-12)) throw InvalidArgument("polynomial is not harmonic");
  const GegenbauerTable table(d, *degree);
  const double ck = table.coefficient(*degree);
  if (std::abs(ck) < 1e-12) {
    throw Error("Gegenbauer coefficient c_" + std::to_string(*degree) + " vanishes numerically");
  }
  return HarmonicDensity{p, *degree, ck};
}

double SpherePartition::total_measure() const {
  double s = 0.0;
  for (const SphereCell& c : cells) s += c.measure;
  return s;
}

SpherePartition make_partition(int d, int n) {
  if (n < 4) throw InvalidArgument("partitions need at least four cells");
  SpherePartition p;
  p.dim = d;
  p.cells.reserve(static_cast<std::size_t>(n));
  if (d == 2) {
    const double width = kTwoPi / n;
    p.diameter_bound = 2.0 * std::sin(kPi / n);
    for (int k = 0; k < n; ++k) {
      const double mid = (k + 0.5) * width;
      Vector y(2);
      y << std::cos(mid), std::sin(mid);
      p.cells.push_back({std::move(y), width, p.diameter_bound});
    }
    return p;
  }
  if (d == 3) {
    // Cells are the Voronoi regions of the lattice; their diameter is at most
    // twice the covering radius. Measured 2 * radius * sqrt(n) peaks near 5.45
    // over n = 4..4096.
    p.diameter_bound = std::min(2.0, 6.0 / std::sqrt(static_cast<double>(n)));
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    const double measure = 4.0 * kPi / n;
    for (int k = 0; k < n; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * k;
      Vector y(3);
      y << r * std::cos(phi), r * std::sin(phi), z;
      p.cells.push_back({std::move(y), measure, p.diameter_bound});
    }
    return p;
  }
  throw InvalidArgument("partitions are only available for d = 2 and d = 3");
}

RiemannBank riemann_bank(const GroupSpec& group, const std::vector<SphereFunction>& densities,
                         const SpherePartition& partition) {
  require_dim(group.ambient_dim(), partition.dim, "riemann_bank group");
  const auto n = static_cast<Eigen::Index>(partition.cells.size());
  Matrix templates(n, partition.dim);
  Matrix weights(static_cast<Eigen::Index>(densities.size()), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const SphereCell& cell = partition.cells[static_cast<std::size_t>(k)];
    templates.row(k) = cell.representative.transpose();
    for (std::size_t j = 0; j < densities.size(); ++j) {
      weights(static_cast<Eigen::Index>(j), k) = densities[j](cell.representative) * cell.measure;
    }
  }
  return {FilterBank(group, std::move(templates)), LinearMap(std::move(weights))};
}

RiemannBank riemann_bank(const GroupSpec& group, const SphereFunction& density,
                         const SpherePartition& partition) {
  return riemann_bank(group, std::vector<SphereFunction>{density}, partition);
}

SphereFunction circle_density(const TrigPolynomial& c) {
  return [c](const VectorRef& y) { return c(std::atan2(y[1], y[0])) / kTwoPi; };
}

LipschitzEstimate lip_norm_estimate(const ScalarMap& f, int dim, std::size_t n_samples,
                                    std::uint64_t seed) {
  Rng rng = make_rng(seed, "lipschitz-samples");
  LipschitzEstimate est;
  constexpr double h = 1e-6;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const Vector x = sphere_point(rng, dim);
    std::optional<Vector> grad;
    if (f.gradient) {
      grad = f.gradient(x);
    } else {
      Vector g(dim);
      for (int i = 0; i < dim; ++i) {
        Vector xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f.value(xp) - f.value(xm)) / (2.0 * h);
      }
      grad = std::move(g);
    }
    if (!grad) {
      ++est.skipped;
      continue;
    }
    ++est.samples_used;
    est.value = std::max(est.value, grad->norm());
  }
  return est;
}

LipschitzEstimate lip_norm_estimate(const EmbeddingModel& f, std::size_t n_samples,
                                    std::uint64_t seed) {
  Rng rng = make_rng(seed, "lipschitz-samples");
  const auto dim = f.input_dim();
  LipschitzEstimate est;
  constexpr double h = 1e-6;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const Vector x = sphere_point(rng, dim);
    Matrix jac(f.output_dim(), dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      Vector xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      jac.col(i) = (f(xp) - f(xm)) / (2.0 * h);
    }
    ++est.samples_used;
    est.value = std::max(est.value, Eigen::JacobiSVD<Matrix>(jac).singularValues()(0));
  }
  return est;
}

ScalarMap riemann_error_map(const RiemannBank& rb, Eigen::Index row,
                            std::function<double(const VectorRef&)> target,
                            std::function<Vector(const VectorRef&)> target_gradient) {
  if (row < 0 || row >= rb.weights.rows()) throw InvalidArgument("weight row out of range");
  const std::vector<GroupElement> elements = rb.bank.group().enumerate();
  ScalarMap m;
  m.value = [rb, row, target](const VectorRef& x) {
    return rb.weights.matrix().row(row).dot(rb.bank.apply(x)) - target(x);
  };
  m.gradient = [rb, row, target_gradient, elements](const VectorRef& x) -> std::optional<Vector> {
    const GroupSpec& g = rb.bank.group();
    for (Eigen::Index k = 0; k < rb.bank.size(); ++k) {
      const Vector y = rb.bank.templates().row(k).transpose();
      double best = -std::numeric_limits<double>::infinity();
      Vector best_gy;
      for (const GroupElement& e : elements) {
        Vector gy = g.apply(e, y);
        const double v = x.dot(gy);
        if (std::abs(v - best) <= 1e-9 && (gy - best_gy).norm() > 1e-12) return std::nullopt;
        if (v > best) {
          // A new leader may still tie with the previous one.
          if (best - v > -1e-9 && best_gy.size() > 0 && (gy - best_gy).norm() > 1e-12)
            return std::nullopt;
          best = v;
          best_gy = std::move(gy);
        }
      }
    }
    const Matrix sub = rb.bank.subgradient(x);
    return Vector(sub.transpose() * rb.weights.matrix().row(row).transpose() - target_gradient(x));
  };
  return m;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope needs two or more points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace orbitmap
