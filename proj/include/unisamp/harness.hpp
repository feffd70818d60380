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
#ifndef UNISAMP_HARNESS_HPP
#define UNISAMP_HARNESS_HPP

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unisamp/assumptions.hpp"
#include "unisamp/operators.hpp"
#include "unisamp/orlicz.hpp"

namespace unisamp {

struct SweepConfig
{
  std::string op = "t2";
  std::string kernel = "combined-m";
  /// t3 only; empty selects fejer
  std::string psi;
  std::string grid = "regular";
  std::string signal = "fig2";
  std::vector<double> w_list;
  double lo = -6.0;
  double hi = 3.0;
  double step = 1e-3;
  std::string phi = "power:p=1";
  std::vector<double> lambda_list{1.0};
  double exclusion_radius = 0.05;
  /// empty: no files are written
  std::filesystem::path output_dir;
  /// run the sample-functional checks as well
  bool check_assumptions = true;
  double epsilon = 1e-3;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// x_i = lo + i step for i = 0..round((hi - lo) / step).
Eigen::ArrayXd evaluation_grid(double lo, double hi, double step);

struct SweepRow
{
  double w = 0.0;
  double sup_error_continuity = 0.0;
  double l1_grid_error = 0.0;
  /// per lambda in the config
  std::vector<ModularValue> modular_error;
  double luxemburg_error = 0.0;
  bool luxemburg_ok = true;
  /// sup over the grid of |T_w f|
  double max_abs_T = 0.0;
  double max_abs_error = 0.0;
  bool certified = true;
  std::filesystem::path file;
};

struct ApproximationReport
{
  SweepConfig config;
  std::string op_label;
  std::vector<SweepRow> rows;
  AssumptionReport kernel_report;
  std::optional<LReport> l_report;
  double moment_M = 0.0;
  double upsilon = 1.0;
  double signal_sup = 0.0;
  /// max |T_w f(x)| - M Upsilon ||f||_inf over all evaluations
  double boundedness_margin = 0.0;
  bool boundedness_holds = true;
  /// lambda rows of the modular errors, tagged nonincreasing within slack
  std::vector<bool> modular_rows_decreasing;
  std::vector<std::filesystem::path> files;

  bool all_certified() const;
};

/// Evaluates T_w f on the grid for every w, computes the error metrics, and writes CSVs when asked.
ApproximationReport run_sweep(const SweepConfig & config);

/// sup over grid points farther than radius from every breakpoint.
double sup_error_outside(const Eigen::ArrayXd & x, const Eigen::ArrayXd & err, std::span<const double> breakpoints,
  double radius);
/// Trapezoid rule on a grid.
double trapezoid(const Eigen::ArrayXd & x, const Eigen::ArrayXd & y);

/// The sweep configuration each figure uses.
SweepConfig figure_config(std::string_view id);

/// fig1 writes M3.csv, M4.csv, M.csv; fig2..fig4 one CSV per w plus report.csv.
std::vector<std::filesystem::path> reproduce_figure(std::string_view id, const std::filesystem::path & out_dir,
  ApproximationReport * report = nullptr);

struct AssumptionSummary
{
  AssumptionReport kernel_report;
  LReport l_report;
  /// some check could not be completed within tolerance
  bool uncertified = false;
};

/// Runs both checkers, prints a pass/warn matrix, and writes assumptions.csv if out_dir is not empty.
AssumptionSummary check_assumptions_cmd(const OperatorSpec & spec, const PiecewiseSignal & f,
  const PhiFunction & phi, std::span<const double> w_list, std::ostream & out,
  const std::filesystem::path & out_dir = {}, double epsilon = 1e-3);

/// Writes one row per w to report.csv in dir.
std::filesystem::path write_report_csv(const ApproximationReport & report, const std::filesystem::path & dir);

}  // namespace unisamp

#endif  // UNISAMP_HARNESS_HPP
