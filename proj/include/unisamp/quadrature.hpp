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
#ifndef UNISAMP_QUADRATURE_HPP
#define UNISAMP_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace unisamp {

/// A non-finite integrand value, carrying the abscissa where it was produced.
class EvaluationError : public std::runtime_error
{
public:
  EvaluationError(const std::string & what, double abscissa)
      : std::runtime_error(what), abscissa_(abscissa)
  {}

  double abscissa() const noexcept { return abscissa_; }

private:
  double abscissa_;
};

struct FiniteInterval
{
  double a;
  double b;
};

/// [-truncation_radius, truncation_radius]; the caller owns the tail estimate.
struct RealLine
{
  double truncation_radius;
};

/// \f$\int_0^\infty g(u)\,du/u\f$ evaluated as \f$\int_{v_{min}}^{v_{max}} g(e^v)\,dv\f$.
struct LogHalfLine
{
  double v_min;
  double v_max;
};

using IntegrationDomain = std::variant<FiniteInterval, RealLine, LogHalfLine>;

/// Validating constructors; these throw std::invalid_argument on a degenerate domain.
IntegrationDomain finite(double a, double b);
IntegrationDomain real_line(double truncation_radius);
IntegrationDomain log_half_line(double v_min, double v_max);
/// log_half_line over u in [u_min, u_max].
IntegrationDomain log_half_line_u(double u_min, double u_max);

struct QuadratureConfig
{
  double abs_tol = 1e-9;
  /// stop once the error estimate is below rel_tol |value| as well; 0 disables
  double rel_tol = 0.0;
  std::size_t max_subdivisions = std::size_t{1} << 20;
};

void validate(const QuadratureConfig & config);

struct QuadratureResult
{
  double value = 0.0;
  double error_estimate = 0.0;
  /// false when the subdivision budget ran out before abs_tol was met
  bool certified = true;
  std::size_t subdivisions = 0;
};

using RealFunction = std::function<double(double)>;

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
inline constexpr std::array<double, 8> kronrod_nodes = {
  0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
  0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
  0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
  0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
  0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
  0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
  0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
  0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights = {
  0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment
{
  double a;
  double b;
  double value;
  double error;
};

inline bool operator<(const Segment & lhs, const Segment & rhs) { return lhs.error < rhs.error; }

template<typename F>
double checked_call(F & f, double x)
{
  const double y = f(x);
  if (!std::isfinite(y)) {
    throw EvaluationError("non-finite integrand value", x);
  }
  return y;
}

template<typename F>
Segment gauss_kronrod(F & f, double a, double b)
{
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked_call(f, center);
  double kronrod = fc * kronrod_weights[7];
  double gauss = fc * gauss_weights[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kronrod_nodes[i];
    const double sum = checked_call(f, center - dx) + checked_call(f, center + dx);
    kronrod += kronrod_weights[i] * sum;
    if (i % 2 == 1) {
      gauss += gauss_weights[i / 2] * sum;
    }
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

/// Globally adaptive bisection over the initial panels given by `cuts` (sorted, size >= 2).
template<typename F>
QuadratureResult adaptive(F & f, const std::vector<double> & cuts, const QuadratureConfig & config)
{
  std::vector<Segment> heap;
  heap.reserve(cuts.size() + 64);
  double total_error = 0.0;
  double total_value = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] > cuts[i]) {
      heap.push_back(gauss_kronrod(f, cuts[i], cuts[i + 1]));
      total_error += heap.back().error;
      total_value += heap.back().value;
    }
  }
  std::make_heap(heap.begin(), heap.end());

  auto tolerance = [&] { return std::max(config.abs_tol, config.rel_tol * std::abs(total_value)); };
  QuadratureResult result;
  while (total_error > tolerance()) {
    if (result.subdivisions >= config.max_subdivisions) {
      result.certified = false;
      break;
    }
    std::pop_heap(heap.begin(), heap.end());
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // panel is at floating-point resolution
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end());
      result.certified = false;
      break;
    }
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
    total_error += left.error + right.error - worst.error;
    total_value += left.value + right.value - worst.value;
    ++result.subdivisions;
    if (total_error <= tolerance()) {
      // guard against drift in the running sums
      total_error = 0.0;
      total_value = 0.0;
      for (const auto & s : heap) {
        total_error += s.error;
        total_value += s.value;
      }
    }
  }

  std::sort(heap.begin(), heap.end(), [](const Segment & l, const Segment & r) { return l.a < r.a; });
  double value = 0.0;
  double compensation = 0.0;
  double error = 0.0;
  for (const auto & s : heap) {
    const double y = s.value - compensation;
    const double t = value + y;
    compensation = (t - value) - y;
    value = t;
    error += s.error;
  }
  result.value = value;
  result.error_estimate = error;
  return result;
}

/// Panel boundaries in the integration variable for `domain`, with breakpoints mapped and clipped.
std::vector<double> panel_cuts(const IntegrationDomain & domain, std::span<const double> breakpoints);

}  // namespace detail

/**
 * Adaptive Gauss-Kronrod (7/15) integration with a global error budget.
 *
 * For LogHalfLine the integrand is written in the natural variable u > 0 and
 * the measure is du/u; internally u = e^v. Refinement stops when the summed
 * local error estimates drop below abs_tol; running out of subdivisions
 * returns the current value with certified = false. A non-finite sample
 * throws EvaluationError.
 */
template<typename F>
QuadratureResult integrate_piecewise(F && f,
  std::span<const double> breakpoints,
  const IntegrationDomain & domain,
  const QuadratureConfig & config = {})
{
  validate(config);
  const std::vector<double> cuts = detail::panel_cuts(domain, breakpoints);
  if (std::holds_alternative<LogHalfLine>(domain)) {
    auto g = [&f](double v) { return f(std::exp(v)); };
    return detail::adaptive(g, cuts, config);
  }
  return detail::adaptive(f, cuts, config);
}

template<typename F>
QuadratureResult integrate(F && f, const IntegrationDomain & domain, const QuadratureConfig & config = {})
{
  return integrate_piecewise(std::forward<F>(f), std::span<const double>{}, domain, config);
}

/// Lower and upper end of the domain in the natural variable.
std::pair<double, double> natural_bounds(const IntegrationDomain & domain);

}  // namespace unisamp

#endif  // UNISAMP_QUADRATURE_HPP
