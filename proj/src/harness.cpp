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
#include "unisamp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "unisamp/kernels.hpp"
#include "unisamp/signals.hpp"

namespace unisamp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v, const char * spec = "%.17g")
{
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string short_num(double v) { return fmt(v, "%g"); }

std::ofstream open_out(const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

void close_checked(std::ofstream & out, const std::filesystem::path & path)
{
  out.close();
  if (!out) {
    throw std::runtime_error("error while writing " + path.string());
  }
}

void ensure_dir(const std::filesystem::path & dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
  }
}

/// Piecewise-linear interpolant of samples on a uniform grid, zero outside it.
struct Interpolant
{
  const Eigen::ArrayXd & x;
  const Eigen::ArrayXd & y;

  double operator()(double t) const
  {
    const Eigen::Index n = x.size();
    if (n == 0 || t < x[0] || t > x[n - 1]) {
      return 0.0;
    }
    if (n == 1) {
      return y[0];
    }
    const double step = (x[n - 1] - x[0]) / static_cast<double>(n - 1);
    auto i = static_cast<Eigen::Index>(std::floor((t - x[0]) / step));
    i = std::clamp<Eigen::Index>(i, 0, n - 2);
    // guard against rounding in the index
    while (i > 0 && t < x[i]) {
      --i;
    }
    while (i < n - 2 && t > x[i + 1]) {
      ++i;
    }
    const double s = (t - x[i]) / (x[i + 1] - x[i]);
    return (1.0 - s) * y[i] + s * y[i + 1];
  }
};

}  // namespace

void SweepConfig::validate() const
{
  if (w_list.empty()) {
    throw std::invalid_argument("w list is empty");
  }
  for (std::size_t i = 0; i < w_list.size(); ++i) {
    if (!(w_list[i] > 0.0) || !std::isfinite(w_list[i])) {
      throw std::invalid_argument("w values must be positive");
    }
    if (i > 0 && !(w_list[i] > w_list[i - 1])) {
      throw std::invalid_argument("w list must be strictly increasing");
    }
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("grid step must be positive");
  }
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("grid needs lo < hi");
  }
  if ((hi - lo) / step > 2e7) {
    throw std::invalid_argument("grid has too many points");
  }
  if (lambda_list.empty()) {
    throw std::invalid_argument("lambda list is empty");
  }
  for (double l : lambda_list) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw std::invalid_argument("lambda values must be positive");
    }
  }
  if (!(exclusion_radius >= 0.0)) {
    throw std::invalid_argument("exclusion radius must be nonnegative");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
}

Eigen::ArrayXd evaluation_grid(double lo, double hi, double step)
{
  const auto n = static_cast<Eigen::Index>(std::llround((hi - lo) / step));
  Eigen::ArrayXd x(n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) {
    x[i] = lo + static_cast<double>(i) * step;
  }
  return x;
}

double sup_error_outside(const Eigen::ArrayXd & x, const Eigen::ArrayXd & err, std::span<const double> breakpoints,
  double radius)
{
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    bool excluded = false;
    for (double b : breakpoints) {
      if (std::abs(x[i] - b) <= radius) {
        excluded = true;
        break;
      }
    }
    if (!excluded) {
      s = std::max(s, err[i]);
    }
  }
  return s;
}

double trapezoid(const Eigen::ArrayXd & x, const Eigen::ArrayXd & y)
{
  double s = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    s += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  }
  return s;
}

bool ApproximationReport::all_certified() const
{
  for (const auto & r : rows) {
    if (!r.certified) {
      return false;
    }
  }
  return true;
}

ApproximationReport run_sweep(const SweepConfig & config)
{
  config.validate();
  const OperatorSpec spec = make_operator(config.op, config.kernel, config.grid, config.psi);
  const PiecewiseSignal f = signal_by_name(config.signal);
  const PhiFunction phi = PhiFunction::parse(config.phi);
  const bool mellin = is_mellin(spec.id);
  if (mellin && !(config.lo > 0.0)) {
    throw std::invalid_argument(to_string(spec.id) + " needs an evaluation grid in x > 0");
  }
  if (f.domain() == SignalDomain::positive_half_line && !(config.lo > 0.0)) {
    throw std::invalid_argument("signal " + f.name() + " lives on x > 0");
  }

  ApproximationReport report;
  report.config = config;
  report.op_label = describe(spec);
  report.kernel_report = check_kernel_assumptions(spec, config.w_list);
  report.moment_M = moment_bound(spec, report.kernel_report);
  report.upsilon = spec.functional.upsilon_bound();
  report.signal_sup = f.sup_norm();
  report.boundedness_margin = -kInf;

  const Eigen::ArrayXd x = evaluation_grid(config.lo, config.hi, config.step);
  const Eigen::ArrayXd fx = f(x);
  const IntegrationDomain domain = mellin ? log_half_line_u(config.lo, config.hi) : finite(config.lo, config.hi);
  const std::vector<double> nodes(x.data(), x.data() + x.size());
  const std::string kernel_label = spec.kernel ? spec.kernel->name() : std::string("mellin");

  if (!config.output_dir.empty()) {
    ensure_dir(config.output_dir);
  }
  for (double w : config.w_list) {
    SweepRow row;
    row.w = w;
    bool certified = true;
    const Eigen::ArrayXd Tx = apply_on_grid(spec, w, f, x, &certified);
    const Eigen::ArrayXd err = (Tx - fx).abs();
    row.certified = certified;
    row.max_abs_T = Tx.abs().maxCoeff();
    row.max_abs_error = err.maxCoeff();
    row.sup_error_continuity = sup_error_outside(x, err, f.breakpoints(), config.exclusion_radius);
    row.l1_grid_error = trapezoid(x, err);

    const Interpolant e{x, err};
    for (double lambda : config.lambda_list) {
      try {
        const ModularValue m = modular(e, nodes, phi, lambda, domain);
        row.certified = row.certified && m.certified;
        row.modular_error.push_back(m);
      } catch (const std::exception &) {
        ModularValue bad;
        bad.lambda = lambda;
        bad.infinite = true;
        bad.value = kInf;
        bad.certified = false;
        row.modular_error.push_back(bad);
        row.certified = false;
      }
    }
    try {
      const LuxemburgNorm n = luxemburg_norm(e, nodes, phi, domain);
      row.luxemburg_error = n.value;
      row.certified = row.certified && n.certified;
    } catch (const std::domain_error &) {
      row.luxemburg_error = kInf;
      row.luxemburg_ok = false;
      row.certified = false;
    }

    const double bound = report.moment_M * report.upsilon * report.signal_sup;
    report.boundedness_margin = std::max(report.boundedness_margin, row.max_abs_T - bound);
    if (row.max_abs_T > bound + 1e-9) {
      report.boundedness_holds = false;
    }

    if (!config.output_dir.empty()) {
      const std::filesystem::path path =
        config.output_dir / (config.signal + "_" + to_string(spec.id) + "_w" + short_num(w) + ".csv");
      std::ofstream out = open_out(path);
      out << "# operator=" << to_string(spec.id) << ", kernel=" << kernel_label << ", w=" << short_num(w)
          << ", phi=" << phi.spec() << "\n";
      out << "x,f,Tf\n";
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        out << fmt(x[i]) << ',' << fmt(fx[i]) << ',' << fmt(Tx[i]) << '\n';
      }
      close_checked(out, path);
      row.file = path;
      report.files.push_back(path);
    }
    report.rows.push_back(std::move(row));
  }

  for (std::size_t i = 0; i < config.lambda_list.size(); ++i) {
    std::vector<ConvergenceCell> cells;
    for (const auto & r : report.rows) {
      cells.push_back({r.modular_error[i], {}});
    }
    report.modular_rows_decreasing.push_back(nonincreasing_within(cells));
  }

  if (config.check_assumptions) {
    report.l_report = check_L_assumptions(spec, f, phi, config.w_list, config.epsilon);
  }
  if (!config.output_dir.empty()) {
    report.files.push_back(write_report_csv(report, config.output_dir));
  }
  return report;
}

std::filesystem::path write_report_csv(const ApproximationReport & report, const std::filesystem::path & dir)
{
  const std::filesystem::path path = dir / "report.csv";
  std::ofstream out = open_out(path);
  out << "# operator=" << report.op_label << ", signal=" << report.config.signal << ", phi=" << report.config.phi
      << "\n";
  out << "w,sup_error_continuity,l1_grid_error";
  for (double l : report.config.lambda_list) {
    out << ",modular_error_lambda_" << short_num(l);
  }
  out << ",luxemburg_error,certified\n";
  for (const auto & r : report.rows) {
    out << short_num(r.w) << ',' << fmt(r.sup_error_continuity) << ',' << fmt(r.l1_grid_error);
    for (const auto & m : r.modular_error) {
      out << ',' << (m.infinite ? std::string("inf") : fmt(m.value));
    }
    out << ',' << (std::isfinite(r.luxemburg_error) ? fmt(r.luxemburg_error) : std::string("inf")) << ','
        << (r.certified ? "true" : "false") << '\n';
  }
  close_checked(out, path);
  return path;
}

SweepConfig figure_config(std::string_view id)
{
  SweepConfig c;
  if (id == "fig2") {
    c.op = "t2";
    c.kernel = "combined-m";
    c.signal = "fig2";
    c.w_list = {5, 10, 15, 20, 40};
    c.lo = -6.0;
    c.hi = 3.0;
    c.phi = "zygmund:alpha=1,beta=1";
    c.lambda_list = {0.5, 1.0};
  } else if (id == "fig3") {
    c.op = "t3";
    c.kernel = "combined-m";
    c.psi = "fejer";
    c.signal = "fig3";
    c.w_list = {5, 10, 20};
    c.lo = -3.0;
    c.hi = 4.0;
  } else if (id == "fig4") {
    c.op = "t7";
    c.kernel = "";
    c.grid = "";
    c.signal = "fig4";
    c.w_list = {5, 20, 30};
    c.lo = 0.2;
    c.hi = 8.0;
  } else {
    throw std::invalid_argument("unknown figure '" + std::string(id) + "' (expected fig1..fig4)");
  }
  c.step = 1e-3;
  return c;
}

std::vector<std::filesystem::path> reproduce_figure(std::string_view id, const std::filesystem::path & out_dir,
  ApproximationReport * report)
{
  if (id == "fig1") {
    ensure_dir(out_dir);
    const Eigen::ArrayXd x = evaluation_grid(-5.0, 5.0, 1e-3);
    struct Curve
    {
      const char * file;
      const char * name;
      Eigen::ArrayXd y;
    };
    const Curve curves[] = {
      {"M3.csv", "bspline:3", bspline(3, x)},
      {"M4.csv", "bspline:4", bspline(4, x)},
      {"M.csv", "combined-m", combined_m(x)},
    };
    std::vector<std::filesystem::path> files;
    for (const auto & c : curves) {
      const std::filesystem::path path = out_dir / c.file;
      std::ofstream out = open_out(path);
      out << "# kernel=" << c.name << "\n";
      out << "x,value\n";
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        out << fmt(x[i]) << ',' << fmt(c.y[i]) << '\n';
      }
      close_checked(out, path);
      files.push_back(path);
    }
    return files;
  }
  SweepConfig c = figure_config(id);
  c.output_dir = out_dir;
  ApproximationReport r = run_sweep(c);
  std::vector<std::filesystem::path> files = r.files;
  if (report != nullptr) {
    *report = std::move(r);
  }
  return files;
}

namespace {

struct MatrixRow
{
  std::string check;
  std::string w;
  std::string value;
  std::string status;
};

}  // namespace

AssumptionSummary check_assumptions_cmd(const OperatorSpec & spec, const PiecewiseSignal & f,
  const PhiFunction & phi, std::span<const double> w_list, std::ostream & out, const std::filesystem::path & out_dir,
  double epsilon)
{
  AssumptionSummary s{check_kernel_assumptions(spec, w_list), check_L_assumptions(spec, f, phi, w_list, epsilon),
    false};
  const AssumptionReport & k = s.kernel_report;
  const LReport & l = s.l_report;
  std::vector<MatrixRow> rows;
  auto pass = [](bool ok) { return std::string(ok ? "pass" : "warn"); };

  rows.push_back({"chi2 partition defect", "all", fmt(k.chi2_partition_defect, "%.3e"),
    pass(k.chi2_partition_defect + k.chi2_truncation_bound <= 1e-6)});
  rows.push_back({"chi3 moment M", "all", fmt(k.chi3_moment_M, "%.6g"), pass(std::isfinite(k.chi3_moment_M))});
  for (const auto & t : k.chi4_tail_profile) {
    rows.push_back({"chi4 tail mass", short_num(t.w), fmt(t.tail_mass, "%.3e"), pass(k.chi4_monotone)});
  }
  rows.push_back({"chi5 compact C", "max",
    k.chi5_verified ? "R=" + fmt(k.chi5_radius, "%.4g") : std::string("not found"), pass(k.chi5_verified)});
  rows.push_back({"Gamma", "all", fmt(k.gamma_l1_bound, "%.6g"), pass(std::isfinite(k.gamma_l1_bound))});
  const double ref = k.scaled_l1_profile.empty() ? 0.0 : k.scaled_l1_profile.front().w_times_l1;
  for (const auto & p : k.scaled_l1_profile) {
    rows.push_back({"w*||chi_w||_1", short_num(p.w), fmt(p.w_times_l1, "%.12g"),
      pass(std::abs(p.w_times_l1 - ref) <= 1e-8)});
  }
  if (!k.valid) {
    rows.push_back({"kernel sums", "all", k.invalid_reason, "warn"});
  }

  double prev_dev = kInf;
  for (const auto & r : l.rows) {
    const std::string w = short_num(r.w);
    rows.push_back({"L1 upsilon", w, fmt(r.upsilon_measured, "%.6g") + " (bound " + fmt(l.upsilon_bound, "%.6g") + ")",
      pass(r.upsilon_measured <= l.upsilon_bound * (1.0 + 1e-12) + 1e-12)});
    rows.push_back({"L2 deviation", w, fmt(r.l2_deviation, "%.3e") + " (radius " + fmt(r.l2_radius, "%.3g") + ")",
      pass(r.l2_deviation <= prev_dev * (1.0 + 1e-9) + 1e-12)});
    prev_dev = r.l2_deviation;
    std::string l3 = r.l3_exact_zero ? "0 (exact)" : fmt(r.l3_tail_outside_k, "%.3e");
    std::string l3_status = r.l3_exact_zero ? "pass" : "warn: modular-only convergence";
    rows.push_back({"L3 tail outside K", w, l3, l3_status});
    if (spec.id == OperatorId::t3) {
      rows.push_back({"L3 window M_n", w,
        r.l3_window_found ? fmt(r.l3_window, "%.6g") + " (tail " + fmt(r.l3_tail_at_window, "%.3e") + ")"
                          : std::string("not found"),
        pass(r.l3_window_found)});
      rows.push_back({"non-locality |L f| off K", w,
        fmt(r.nonlocal_value, "%.3e") + " at " + fmt(r.nonlocal_at, "%.4g"), pass(r.nonlocal_value > 1e-4)});
    }
    rows.push_back({"L4 lhs vs c I(lambda beta f)", w,
      fmt(r.l4_lhs, "%.6g") + " <= " + fmt(r.l4_rhs, "%.6g"), pass(r.l4_holds)});
    if (!r.certified) {
      s.uncertified = true;
    }
  }

  out << "operator " << l.op << ", signal " << l.signal << ", phi " << l.phi << "\n";
  out << "K = [" << l.k_set.first << ", " << l.k_set.second << "], c = " << l.l4_c << ", beta = " << l.l4_beta
      << "\n";
  std::size_t wc = 5;
  std::size_t wv = 5;
  for (const auto & r : rows) {
    wc = std::max(wc, r.check.size());
    wv = std::max(wv, r.value.size());
  }
  for (const auto & r : rows) {
    out << r.check << std::string(wc + 2 - r.check.size(), ' ') << r.w << std::string(r.w.size() < 6 ? 6 - r.w.size() : 1, ' ')
        << r.value << std::string(wv + 2 - r.value.size(), ' ') << r.status << "\n";
  }
  for (const auto & n : l.notes) {
    out << "note: " << n << "\n";
  }

  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    const std::filesystem::path path = out_dir / "assumptions.csv";
    std::ofstream csv = open_out(path);
    csv << "check,w,value,status\n";
    for (const auto & r : rows) {
      csv << '"' << r.check << "\"," << r.w << ",\"" << r.value << "\"," << r.status << '\n';
    }
    close_checked(csv, path);
  }
  return s;
}

}  // namespace unisamp
