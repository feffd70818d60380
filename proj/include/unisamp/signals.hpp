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
#ifndef UNISAMP_SIGNALS_HPP
#define UNISAMP_SIGNALS_HPP

#include <Eigen/Core>

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unisamp/quadrature.hpp"

namespace unisamp {

/// One elementary formula; a piece evaluates the sum of its terms.
struct Term
{
  enum class Kind {
    constant,  ///< a
    linear,    ///< a + b u
    power,     ///< a u^b
    gaussian,  ///< a exp(-(u - b)^2 / (2 c^2))
  };
  Kind kind = Kind::constant;
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;

  double operator()(double u) const;
  /// sup |term| over [lo, hi); bounds may be infinite
  double sup_abs(double lo, double hi) const;
};

/// Formula on the half-open interval [lo, hi).
struct Piece
{
  double lo;
  double hi;
  std::vector<Term> terms;

  double operator()(double u) const;
  double sup_abs(double lo, double hi) const;
};

enum class SignalDomain { real_line, positive_half_line };

/**
 * A piecewise-defined signal. Pieces are half-open [a, b) and partition the
 * domain; evaluation at a shared endpoint uses the piece to its right.
 */
class PiecewiseSignal
{
public:
  PiecewiseSignal(std::string name, std::vector<Piece> pieces,
    SignalDomain domain = SignalDomain::real_line);

  double operator()(double x) const;

  template<typename Derived>
  Eigen::ArrayXd operator()(const Eigen::ArrayBase<Derived> & x) const
  {
    Eigen::ArrayXd out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      out[i] = (*this)(x[i]);
    }
    return out;
  }

  const std::string & name() const { return name_; }
  SignalDomain domain() const { return domain_; }
  bool in_domain(double x) const;
  std::span<const Piece> pieces() const { return pieces_; }

  /// Finite shared endpoints of adjacent pieces.
  std::span<const double> breakpoints() const { return breakpoints_; }
  /// Breakpoints where the left limit differs from the value.
  std::span<const double> discontinuities() const { return discontinuities_; }
  /// Maximal open intervals on which the signal is continuous.
  std::span<const std::pair<double, double>> continuity_intervals() const { return continuity_; }

  /// Closed hull of the region where the signal may be nonzero; nullopt when unbounded.
  std::optional<std::pair<double, double>> support() const { return support_; }

  /// sup |f| over [lo, hi) intersected with the domain.
  double sup_abs(double lo, double hi) const;
  double sup_norm() const { return sup_norm_; }
  /// sup |f(u)| over |u| >= r.
  double envelope(double r) const;
  /// Smallest radius (among powers of two times 1) with envelope below tol; infinity if none up to 2^60.
  double truncation_radius(double tol) const;

  /// Integral over the domain with breakpoints as panel boundaries.
  QuadratureResult integrate(const IntegrationDomain & domain, const QuadratureConfig & config = {}) const;

  /// a f + b g on the merged partition.
  friend PiecewiseSignal linear_combination(double a, const PiecewiseSignal & f, double b,
    const PiecewiseSignal & g, std::string name);
  /// f restricted to [lo, hi), zero elsewhere.
  PiecewiseSignal restricted(double lo, double hi) const;

private:
  std::string name_;
  std::vector<Piece> pieces_;
  SignalDomain domain_;
  std::vector<double> breakpoints_;
  std::vector<double> discontinuities_;
  std::vector<std::pair<double, double>> continuity_;
  std::optional<std::pair<double, double>> support_;
  double sup_norm_ = 0.0;
};

PiecewiseSignal linear_combination(double a, const PiecewiseSignal & f, double b, const PiecewiseSignal & g,
  std::string name);

/// fig2, fig3, fig4, const:<c>, indicator:<a>,<b>, ramp, gauss.
PiecewiseSignal signal_by_name(std::string_view spec);
std::vector<std::string> signal_catalog();

/// CSV rows "breakpoint,formula,p1,p2" with formula in {const, linear, power, none}.
/// Row i defines [breakpoint_i, breakpoint_{i+1}); "-inf" is allowed on the first row.
PiecewiseSignal load_signal_csv(std::istream & in, std::string name);
PiecewiseSignal load_signal_csv_file(const std::string & path);

}  // namespace unisamp

#endif  // UNISAMP_SIGNALS_HPP
