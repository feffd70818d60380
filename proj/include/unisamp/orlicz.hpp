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
#ifndef UNISAMP_ORLICZ_HPP
#define UNISAMP_ORLICZ_HPP

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unisamp/quadrature.hpp"
#include "unisamp/signals.hpp"

namespace unisamp {

/// A convex phi-function from one of three families.
class PhiFunction
{
public:
  enum class Family { power, exponential, zygmund };

  /// x^p, p >= 1
  static PhiFunction power(double p);
  /// exp(x^alpha) - 1; only alpha >= 1 is convex
  static PhiFunction exponential(double alpha);
  /// x^alpha ln^beta(e + x), alpha >= 1, beta > 0
  static PhiFunction zygmund(double alpha, double beta);

  /// "power:p=2", "exp:alpha=1", "zygmund:alpha=1,beta=1"
  static PhiFunction parse(std::string_view spec);

  /// Throws std::domain_error for x < 0.
  double operator()(double x) const;

  Family family() const { return family_; }
  double p() const { return p_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  /// canonical spec string, parseable by parse()
  std::string spec() const;
  /// Whether the family satisfies the Delta_2 condition for all x > 0.
  bool analytic_delta2() const { return family_ != Family::exponential; }

private:
  PhiFunction(Family family, double p, double alpha, double beta);
  void check_axioms() const;

  Family family_;
  double p_ = 1.0;
  double alpha_ = 1.0;
  double beta_ = 0.0;
};

double phi_eval(const PhiFunction & phi, double x);

/// Integrands above this are reported as an infinite modular.
inline constexpr double kModularOverflow = 1e300;

struct ModularValue
{
  double value = 0.0;
  bool infinite = false;
  double lambda = 1.0;
  bool certified = true;

  /// value when finite, +inf otherwise
  double as_double() const;
};

/// I^phi(lambda f) = int phi(lambda |f|) over the domain.
ModularValue modular(const RealFunction & f, std::span<const double> breakpoints, const PhiFunction & phi,
  double lambda, const IntegrationDomain & domain, const QuadratureConfig & config = {});
ModularValue modular(const PiecewiseSignal & f, const PhiFunction & phi, double lambda,
  const IntegrationDomain & domain, const QuadratureConfig & config = {});

struct LuxemburgOptions
{
  double lambda_min = 0x1p-40;
  double lambda_max = 0x1p40;
  double relative_width = 1e-8;
};

struct LuxemburgNorm
{
  double value = 0.0;
  bool certified = true;
};

/**
 * inf{lambda > 0 : I^phi(f / lambda) <= 1} by geometric bisection.
 * Returns 0 when even lambda_min satisfies the bound. Throws std::domain_error
 * ("not in L^phi") when lambda_max does not.
 */
LuxemburgNorm luxemburg_norm(const RealFunction & f, std::span<const double> breakpoints, const PhiFunction & phi,
  const IntegrationDomain & domain, const QuadratureConfig & config = {}, const LuxemburgOptions & options = {});
LuxemburgNorm luxemburg_norm(const PiecewiseSignal & f, const PhiFunction & phi, const IntegrationDomain & domain,
  const QuadratureConfig & config = {}, const LuxemburgOptions & options = {});

struct Delta2Classification
{
  bool satisfied = false;
  double sup_ratio = 0.0;
  bool ratio_infinite = false;
  /// x where the sup was attained
  double argmax = 0.0;
  bool analytic = false;
  /// numeric and analytic verdicts disagree
  bool needs_review = false;
};

inline constexpr double kDelta2Threshold = 1e6;

/// n log-spaced points on [lo, hi].
std::vector<double> log_spaced(double lo, double hi, std::size_t n);

/// sup over the grid of phi(2x)/phi(x), compared with kDelta2Threshold and the family flag.
Delta2Classification delta2_classify(const PhiFunction & phi, std::span<const double> x_grid);
/// Grid of 801 points on [1e-6, 1e2].
Delta2Classification delta2_classify(const PhiFunction & phi);

struct ConvergenceCell
{
  ModularValue modular;
  /// non-empty when the cell could not be computed
  std::string error;
};

struct ConvergenceTable
{
  std::vector<double> lambdas;
  std::vector<double> ws;
  /// cells[i][j] for lambdas[i], ws[j]
  std::vector<std::vector<ConvergenceCell>> cells;
  /// row i is nonincreasing in w within the slack
  std::vector<bool> decreasing;
};

inline constexpr double kConvergenceSlack = 0.05;

/// Whether v[j+1] <= (1 + slack) v[j] for all j; infinite or failed cells break the chain.
bool nonincreasing_within(std::span<const ConvergenceCell> row, double slack = kConvergenceSlack);

/// Table of I^phi(lambda (f_w - f)) over (lambda, w). Cell failures are recorded, not thrown.
ConvergenceTable modular_convergence_table(const std::function<RealFunction(double)> & f_family,
  const RealFunction & f_target, std::span<const double> breakpoints, const PhiFunction & phi,
  std::span<const double> lambdas, std::span<const double> ws, const IntegrationDomain & domain,
  const QuadratureConfig & config = {});

}  // namespace unisamp

#endif  // UNISAMP_ORLICZ_HPP
