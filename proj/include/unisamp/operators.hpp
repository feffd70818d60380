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
#ifndef UNISAMP_OPERATORS_HPP
#define UNISAMP_OPERATORS_HPP

#include <Eigen/Core>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unisamp/assumptions.hpp"
#include "unisamp/grid.hpp"
#include "unisamp/kernels.hpp"
#include "unisamp/orlicz.hpp"
#include "unisamp/quadrature.hpp"
#include "unisamp/signals.hpp"

namespace unisamp {

/**
 * t1  generalized sampling series        sum_k chi(w x - t_k) f(t_k / w)
 * t2  Kantorovich sampling series        sum_k chi(w x - t_k) w/Delta_k int_{t_k/w}^{t_{k+1}/w} f
 * t3  Durrmeyer sampling series          sum_k chi(w x - t_k) w int psi(w u - t_k) f(u) du
 * t4  convolution                        int w chi(w (x - t)) f(t) dt
 * t5  Kantorovich convolution            int w chi(w (x - t)) w/2 int_{t-1/w}^{t+1/w} f dt
 * t6  Mellin convolution                 int M_w(x / t) f(t) dt / t
 * t7  Mellin-Kantorovich convolution     int M_w(x / t) L_t f dt / t
 */
enum class OperatorId { t1, t2, t3, t4, t5, t6, t7 };

OperatorId parse_operator_id(std::string_view text);
std::string to_string(OperatorId id);
bool is_discrete(OperatorId id);
bool is_mellin(OperatorId id);

enum class FunctionalKind { point, average, durrmeyer, mellin_point, mellin_average };

std::string to_string(FunctionalKind kind);

/// The family L_{h_w(t)} together with its declared operator-norm bound.
class SampleFunctional
{
public:
  static SampleFunctional point();
  static SampleFunctional average();
  /// Requires int psi = 1 within 1e-6.
  static SampleFunctional durrmeyer(Kernel psi);
  static SampleFunctional mellin_point();
  static SampleFunctional mellin_average();

  FunctionalKind kind() const { return kind_; }
  const std::optional<Kernel> & psi() const { return psi_; }
  /// 1, or ||psi||_1 for Durrmeyer
  double upsilon_bound() const { return upsilon_; }

private:
  SampleFunctional(FunctionalKind kind, std::optional<Kernel> psi, double upsilon)
      : kind_(kind), psi_(std::move(psi)), upsilon_(upsilon)
  {}
  FunctionalKind kind_;
  std::optional<Kernel> psi_;
  double upsilon_;
};

struct TruncationPolicy
{
  /// discarded part of any sum or integral stays below this times ||f||_inf
  double relative_tolerance = 1e-8;
  /// cap on the number of terms of a full-line lattice sum
  long max_terms = 1'000'000;
  /// cap on the half-width of a full-line kernel integral, in unscaled units
  double max_integral_radius = 1e4;
  /// Mellin integrals stop where w (x/t)^w drops below this
  double mellin_cutoff = 1e-16;
  /// quadrature tolerance, multiplied by max(1, ||f||_inf)
  double abs_tol = 1e-11;
  /// t7 prefactor w/2 in place of 1/(2 ln(1 + 1/w))
  bool t7_simple_prefactor = false;
};

struct OperatorSpec
{
  OperatorId id;
  /// chi for t1..t5; Mellin operators build M_w from w
  std::optional<Kernel> kernel;
  /// t1..t3 only
  std::optional<SamplingGrid> grid;
  SampleFunctional functional;
  TruncationPolicy truncation;
};

/// Checks the id/functional/kernel/grid combination.
OperatorSpec make_operator(OperatorId id, std::optional<Kernel> kernel, std::optional<SamplingGrid> grid,
  std::optional<Kernel> psi = std::nullopt, TruncationPolicy truncation = {});
/// String form used by the CLI; grid defaults to "regular" and psi to "fejer" for t3.
OperatorSpec make_operator(std::string_view id, std::string_view kernel, std::string_view grid = "regular",
  std::string_view psi = "");

/// Short label such as "t2/combined-m/regular".
std::string describe(const OperatorSpec & spec);

struct Evaluation
{
  double value = 0.0;
  /// quadrature tolerances met and truncation within budget
  bool certified = true;
  /// bound on the discarded tail of the outer sum or integral
  double truncation_bound = 0.0;
};

/// A non-finite sample, tagged with the functional kind, the index or point, and w.
class SampleError : public std::runtime_error
{
public:
  SampleError(const std::string & what, FunctionalKind kind, double where, double w)
      : std::runtime_error(what), kind_(kind), where_(where), w_(w)
  {}
  FunctionalKind kind() const noexcept { return kind_; }
  double where() const noexcept { return where_; }
  double w() const noexcept { return w_; }

private:
  FunctionalKind kind_;
  double where_;
  double w_;
};

/// L f at index k (t1..t3, k_or_t is rounded) or at the point t (t4..t7).
Evaluation sample_functional_eval(const OperatorSpec & spec, double w, double k_or_t, const PiecewiseSignal & f);

Evaluation apply_operator(const OperatorSpec & spec, double w, const PiecewiseSignal & f, double x);

/// T_w f on every point of xs; discrete operators share samples across points.
std::vector<Evaluation> apply_on_grid(const OperatorSpec & spec, double w, const PiecewiseSignal & f,
  std::span<const double> xs);
Eigen::ArrayXd apply_on_grid(const OperatorSpec & spec, double w, const PiecewiseSignal & f,
  const Eigen::ArrayXd & xs, bool * certified);

/// t1 on a jittered grid: samples at t_k/w + j_k(w). Throws unless the grid is jittered.
Evaluation jittered_operator(const OperatorSpec & spec, double w, const PiecewiseSignal & f, double x);

/// Kernel conditions for any operator: lattice sums for t1..t3, integrals for t4..t7.
AssumptionReport check_kernel_assumptions(const OperatorSpec & spec, std::span<const double> w_list,
  std::size_t probe_count = 200, const ChiCheckOptions & options = {});

/// The constant M of the moment condition: from the report for t1..t3, ||chi||_1 for t4/t5, 1 for t6/t7.
double moment_bound(const OperatorSpec & spec, const AssumptionReport & report);

struct LCheckRow
{
  double w = 0.0;
  /// max over probes of |L f| / ||f||_inf
  double upsilon_measured = 0.0;
  /// sup |L_h f - f(z)| over |z - h| < radius / 2 away from jumps
  double l2_deviation = 0.0;
  double l2_radius = 0.0;
  /// tail of phi(|L f|) outside K at alpha = 1
  double l3_tail_outside_k = 0.0;
  bool l3_exact_zero = false;
  /// t3: smallest window [-M_n, M_n] in z with tail below epsilon
  double l3_window = 0.0;
  double l3_tail_at_window = 0.0;
  bool l3_window_found = false;
  /// t3 non-locality witness: largest |L_k f| with t_k / w outside K
  double nonlocal_value = 0.0;
  double nonlocal_at = 0.0;
  double l4_lhs = 0.0;
  double l4_rhs = 0.0;
  bool l4_holds = false;
  bool certified = true;
};

struct LReport
{
  std::string op;
  std::string signal;
  std::string phi;
  double epsilon = 0.0;
  double upsilon_bound = 0.0;
  bool l1_ok = true;
  /// K used for the tail check
  std::pair<double, double> k_set{0.0, 0.0};
  /// the signal had no compact support and its breakpoint hull was used
  bool used_compact_core = false;
  double l4_c = 1.0;
  double l4_beta = 1.0;
  double l4_lambda = 1.0;
  std::vector<LCheckRow> rows;
  /// some tail outside K is nonzero: modular convergence only
  bool modular_only = false;
  std::vector<std::string> notes;
};

struct LCheckOptions
{
  double lambda = 1.0;
  std::size_t probe_count = 200;
  std::uint64_t seed = 0x5eed2026;
  bool check_l4 = true;
};

LReport check_L_assumptions(const OperatorSpec & spec, const PiecewiseSignal & f, const PhiFunction & phi,
  std::span<const double> w_list, double epsilon, const LCheckOptions & options = {});

}  // namespace unisamp

#endif  // UNISAMP_OPERATORS_HPP
