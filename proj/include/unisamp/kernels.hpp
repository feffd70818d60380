// Copyright 2026 The unisamp Authors
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
#ifndef UNISAMP_KERNELS_HPP
#define UNISAMP_KERNELS_HPP

#include <Eigen/Core>

#include <cmath>
#include <concepts>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "unisamp/quadrature.hpp"

namespace unisamp {

// ---------------------------------------------------------------------------
// Scalar kernel formulas. Each has an Eigen array overload that returns a
// lazy coefficient-wise expression.
// ---------------------------------------------------------------------------

template<std::floating_point Scalar>
Scalar sinc(Scalar x)
{
  if (x == Scalar(0)) {
    return Scalar(1);
  }
  const Scalar px = std::numbers::pi_v<Scalar> * x;
  return std::sin(px) / px;
}

/// Fejer kernel F(x) = sinc(x/2)^2 / 2.
template<std::floating_point Scalar>
Scalar fejer(Scalar x)
{
  const Scalar s = sinc(x / Scalar(2));
  return Scalar(0.5) * s * s;
}

/**
 * Central B-spline of order n, support [-n/2, n/2]:
 *   M_n(x) = 1/(n-1)! sum_{j=0}^{n} (-1)^j C(n,j) (n/2 + x - j)_+^{n-1}
 * with (y)_+^0 = 1 for y > 0 and 0 otherwise, so M_1 is the indicator of (-1/2, 1/2].
 */
template<std::floating_point Scalar>
Scalar bspline(int n, Scalar x)
{
  if (n < 1) {
    throw std::domain_error("bspline: order must be at least 1");
  }
  const Scalar half = Scalar(n) / Scalar(2);
  if (x <= -half || x > half) {
    return Scalar(0);
  }
  // even for n >= 2; the left half needs fewer truncated powers and cancels less
  if (n >= 2 && x > Scalar(0)) {
    x = -x;
  }
  Scalar sum = 0;
  Scalar binom = 1;
  for (int j = 0; j <= n; ++j) {
    const Scalar y = half + x - Scalar(j);
    if (y > Scalar(0)) {
      const Scalar term = binom * (n == 1 ? Scalar(1) : std::pow(y, n - 1));
      sum += (j % 2 == 0) ? term : -term;
    }
    binom = binom * Scalar(n - j) / Scalar(j + 1);
  }
  Scalar factorial = 1;
  for (int i = 2; i < n; ++i) {
    factorial *= Scalar(i);
  }
  return sum / factorial;
}

/// M(x) = 4 M_3(x) - 3 M_4(x), supported on [-2, 2].
template<std::floating_point Scalar>
Scalar combined_m(Scalar x)
{
  return Scalar(4) * bspline(3, x) - Scalar(3) * bspline(4, x);
}

template<typename Derived>
auto sinc(const Eigen::ArrayBase<Derived> & x)
{
  using S = typename Derived::Scalar;
  return x.unaryExpr([](S v) { return sinc(v); });
}

template<typename Derived>
auto fejer(const Eigen::ArrayBase<Derived> & x)
{
  using S = typename Derived::Scalar;
  return x.unaryExpr([](S v) { return fejer(v); });
}

template<typename Derived>
auto bspline(int n, const Eigen::ArrayBase<Derived> & x)
{
  using S = typename Derived::Scalar;
  if (n < 1) {
    throw std::domain_error("bspline: order must be at least 1");
  }
  return x.unaryExpr([n](S v) { return bspline(n, v); });
}

template<typename Derived>
auto combined_m(const Eigen::ArrayBase<Derived> & x)
{
  using S = typename Derived::Scalar;
  return x.unaryExpr([](S v) { return combined_m(v); });
}

// ---------------------------------------------------------------------------
// Kernel: an unscaled chi with support metadata and its L1 norm.
// ---------------------------------------------------------------------------

struct CompactSupport
{
  double a;
  double b;
};

/// |chi(x)| <= tail_bound_constant / x^2 for |x| >= 1.
struct FullLineSupport
{
  double tail_bound_constant;
};

using KernelSupport = std::variant<CompactSupport, FullLineSupport>;

struct KernelDefinition
{
  std::string name;
  std::function<double(double)> eval;
  KernelSupport support;
  /// points where chi is not smooth; used as quadrature panel boundaries
  std::vector<double> knots;
  /// panel width used to resolve oscillation on wide windows
  double feature_scale = 1.0;
  /// full-line only: int_R^inf |chi| for R >= analytic_tail_start
  std::function<double(double)> upper_tail_mass;
  double analytic_tail_start = 0.0;
  /// regular grid only: sum_{k outside [k_lo, k_hi]} |chi(u - k)|
  std::function<double(double, long, long)> lattice_tail;
};

class Kernel
{
public:
  /// Validates the support invariants and computes ||chi||_1; full-line kernels must be even.
  explicit Kernel(KernelDefinition definition);

  double operator()(double x) const { return impl_->def.eval(x); }

  /// chi_w(x) = chi(w x)
  double scaled(double w, double x) const { return impl_->def.eval(w * x); }

  const std::string & name() const { return impl_->def.name; }
  const KernelSupport & support() const { return impl_->def.support; }
  bool is_compact() const { return std::holds_alternative<CompactSupport>(impl_->def.support); }
  /// [a, b] for compact kernels, (-inf, inf) otherwise
  std::pair<double, double> support_interval() const;
  std::span<const double> knots() const { return impl_->def.knots; }
  double feature_scale() const { return impl_->def.feature_scale; }
  double l1_norm() const { return impl_->l1_norm; }
  double integral() const { return impl_->integral; }
  bool nonnegative() const { return impl_->nonnegative; }

  /// int_{x > a} |chi(x)| dx
  double mass_above(double a) const;
  /// int_{x < a} |chi(x)| dx
  double mass_below(double a) const { return mass_above(-a); }

  /// Upper bound on sum_{|u - t_k| > radius} |chi(u - t_k)| for nodes with gaps > min_gap.
  double lattice_tail_bound(double radius, double min_gap) const;

  /// Exact lattice tail on the integer grid when the kernel provides one.
  std::optional<double> lattice_tail(double u, long k_lo, long k_hi) const;

  /// int_{|x| <= radius} |chi(x)| in the variable x (unscaled), by quadrature.
  double l1_on(double lo, double hi, const QuadratureConfig & config = {}) const;

  /// Quadrature of |chi(w x)| over the real line; should equal l1_norm() / w.
  double scaled_l1_norm(double w, const QuadratureConfig & config = {}) const;

private:
  struct Impl
  {
    KernelDefinition def;
    double l1_norm = 0.0;
    double integral = 0.0;
    bool nonnegative = true;
  };
  std::shared_ptr<const Impl> impl_;
};

/// Look up "fejer", "bspline:<n>", "combined-m". "sinc" is rejected as not integrable;
/// "mellin" lives on the half-line, see MellinKernel.
Kernel kernel_by_name(std::string_view name);

/// Names accepted by kernel_by_name (bspline listed for orders 1..6).
std::vector<std::string> kernel_catalog();

/// Catalog function lookup by name, including non-integrable "sinc".
std::function<double(double)> kernel_function_by_name(std::string_view name);

/// Mellin kernel M_w(u) = w u^w on (0, 1), zero elsewhere.
class MellinKernel
{
public:
  /// Checks int_0^1 M_w(u) du/u = 1 within 1e-8.
  explicit MellinKernel(double w);

  double operator()(double u) const
  {
    return (u > 0.0 && u < 1.0) ? w_ * std::pow(u, w_) : 0.0;
  }

  double w() const { return w_; }
  double normalization() const { return normalization_; }
  /// Smallest u with M_w(u) >= cutoff; mass below it is cutoff / w.
  double lower_cut(double cutoff) const { return std::pow(cutoff / w_, 1.0 / w_); }

private:
  double w_;
  double normalization_;
};

}  // namespace unisamp

#endif  // UNISAMP_KERNELS_HPP
