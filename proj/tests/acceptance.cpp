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

// Acceptance run: one PASS/FAIL line per criterion.
// usage: acceptance [output-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "unisamp/harness.hpp"
#include "unisamp/kernels.hpp"
#include "unisamp/operators.hpp"
#include "unisamp/orlicz.hpp"

using namespace unisamp;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
  bool pass = true;
  std::string detail;
};

int failures = 0;
// largest |T_w f(x)| - M Upsilon ||f||_inf seen by any criterion
double worst_bound_margin = -1e300;
std::size_t bound_evaluations = 0;

std::string fmt(const char * spec, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void run(int id, const char * title, double budget_s, const std::function<Outcome()> & body)
{
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception & e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string detail = o.detail;
  if (budget_s > 0.0) {
    detail += (detail.empty() ? "" : "; ") + fmt("%.2f s", secs) + fmt(" (budget %g s)", budget_s);
    if (secs > budget_s) {
      o.pass = false;
    }
  }
  std::printf("%s criterion %2d: %s [%s]\n", o.pass ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!o.pass) {
    ++failures;
  }
}

void record_bound(double value, double bound)
{
  worst_bound_margin = std::max(worst_bound_margin, std::abs(value) - bound);
  ++bound_evaluations;
}

void record_sweep(const ApproximationReport & r)
{
  worst_bound_margin = std::max(worst_bound_margin, r.boundedness_margin);
  bound_evaluations += r.rows.size() * static_cast<std::size_t>(std::llround((r.config.hi - r.config.lo) / r.config.step) + 1);
}

bool strictly_decreasing_l1(const ApproximationReport & r, std::string & detail)
{
  bool ok = true;
  detail += "l1:";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    detail += fmt(" %.4g", r.rows[i].l1_grid_error);
    if (i > 0 && !(r.rows[i].l1_grid_error < r.rows[i - 1].l1_grid_error)) {
      ok = false;
    }
  }
  return ok;
}

std::string slurp(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

SweepConfig figure2_sweep(const fs::path & dir)
{
  SweepConfig c = figure_config("fig2");
  c.w_list = {5, 10, 20, 40};
  c.exclusion_radius = 0.05;
  c.phi = "zygmund:alpha=1,beta=1";
  c.lambda_list = {0.5, 1.0};
  c.output_dir = dir;
  return c;
}

}  // namespace

int main(int argc, char ** argv)
{
  const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "unisamp_acceptance";
  fs::remove_all(out);
  fs::create_directories(out);

  run(1, "partition of unity", 1.0, [] {
    const auto us = oracle::uniform_probes(1000, -10.0, 10.0, 0x5eed2026);
    double worst = 0.0;
    std::vector<std::function<double(double)>> kernels;
    for (int n = 1; n <= 4; ++n) {
      kernels.push_back([n](double x) { return bspline(n, x); });
    }
    kernels.push_back([](double x) { return combined_m(x); });
    for (const auto & k : kernels) {
      for (double u : us) {
        double s = 0.0;
        for (int j = -25; j <= 25; ++j) {
          s += k(u - j);
        }
        worst = std::max(worst, std::abs(s - 1.0));
      }
    }
    return Outcome{worst <= 1e-10, fmt("max defect %.3e", worst)};
  });

  run(2, "kernel normalizations", 5.0, [] {
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-12;
    double bs = 0.0;
    for (int n = 1; n <= 6; ++n) {
      const Kernel k = kernel_by_name("bspline:" + std::to_string(n));
      const auto knots = k.knots();
      const auto r = integrate_piecewise(k, knots, finite(-0.5 * n, 0.5 * n), cfg);
      bs = std::max(bs, std::abs(r.value - 1.0));
    }
    const Kernel f = kernel_by_name("fejer");
    std::vector<double> cuts;
    for (int j = -10000; j <= 10000; j += 2) {
      cuts.push_back(j);
    }
    QuadratureConfig fc;
    fc.abs_tol = 1e-10;
    const double fe = std::abs(integrate_piecewise(f, cuts, finite(-1e4, 1e4), fc).value - 1.0);
    double me = 0.0;
    for (double w : {5.0, 20.0, 30.0}) {
      const MellinKernel mk(w);
      for (double x : {0.5, 1.0, 2.0}) {
        // M_w(x/t) vanishes for t <= x; beyond ln(t/x) = 40/w it is below w e^-40
        const auto r = integrate([&](double t) { return mk(x / t); }, log_half_line(std::log(x), std::log(x) + 40.0),
          cfg);
        me = std::max(me, std::abs(r.value - 1.0));
      }
    }
    const bool ok = bs <= 1e-9 && fe <= 2e-4 && me <= 1e-8;
    return Outcome{ok, fmt("bspline %.2e", bs) + fmt(", fejer %.2e", fe) + fmt(", mellin %.2e", me)};
  });

  run(3, "constant reproduction", 10.0, [] {
    const auto two = signal_by_name("const:2");
    double worst = 0.0;
    bool certified = true;
    for (const char * op : {"t1", "t2", "t4", "t5", "t6", "t7"}) {
      const OperatorId id = parse_operator_id(op);
      const auto spec = is_mellin(id) ? make_operator(op, "", "")
                                      : make_operator(op, "combined-m", is_discrete(id) ? "regular" : "");
      const double lo = is_mellin(id) ? 0.1 : -5.0;
      const double hi = 5.0;
      for (double w : {5.0, 40.0}) {
        const std::vector<double> ws{w};
        const double bound =
          moment_bound(spec, check_kernel_assumptions(spec, ws, 50)) * spec.functional.upsilon_bound() * 2.0 + 1e-9;
        for (int i = 0; i < 100; ++i) {
          const double x = lo + (hi - lo) * i / 99.0;
          const Evaluation e = apply_operator(spec, w, two, x);
          certified = certified && e.certified;
          worst = std::max(worst, std::abs(e.value - 2.0));
          record_bound(e.value, bound);
        }
      }
    }
    return Outcome{worst <= 1e-8 && certified, fmt("max |T 2 - 2| = %.3e", worst)};
  });

  ApproximationReport fig2;
  ApproximationReport fig3;
  ApproximationReport fig4;

  run(5, "figure-2 surrogate (t2/combined-m/fig2)", 60.0, [&] {
    fig2 = run_sweep(figure2_sweep(out / "c5_run1"));
    record_sweep(fig2);
    std::string d;
    const bool dec = strictly_decreasing_l1(fig2, d);
    const double sup40 = fig2.rows.back().sup_error_continuity;
    d += fmt("; sup at w=40 %.4g", sup40);
    return Outcome{dec && sup40 < 0.05 && fig2.all_certified(), d};
  });

  run(6, "figure-3 surrogate (t3/fejer/combined-m/fig3)", 120.0, [&] {
    SweepConfig c = figure_config("fig3");
    c.output_dir = out / "c6";
    fig3 = run_sweep(c);
    record_sweep(fig3);
    std::string d;
    const bool dec = strictly_decreasing_l1(fig3, d);
    bool nonlocal = false;
    const auto & L = *fig3.l_report;
    for (const auto & row : L.rows) {
      if (row.w == 10.0) {
        const bool outside = row.nonlocal_at < L.k_set.first || row.nonlocal_at > L.k_set.second;
        nonlocal = outside && row.nonlocal_value > 1e-4;
        d += fmt("; |L f| = %.3g", row.nonlocal_value) + fmt(" at %.4g", row.nonlocal_at);
      }
    }
    d += L.modular_only ? "; flagged modular-only convergence" : "; not flagged";
    return Outcome{dec && nonlocal && L.modular_only && fig3.all_certified(), d};
  });

  run(7, "figure-4 surrogate (t7/fig4)", 60.0, [&] {
    SweepConfig c = figure_config("fig4");
    c.output_dir = out / "c7";
    fig4 = run_sweep(c);
    record_sweep(fig4);
    std::string d;
    const bool dec = strictly_decreasing_l1(fig4, d);
    return Outcome{dec && fig4.all_certified(), d};
  });

  run(4, "boundedness |T f| <= M Upsilon ||f|| + 1e-9", 0.0, [&] {
    const bool ok = worst_bound_margin <= 1e-9 && fig2.boundedness_holds && fig3.boundedness_holds &&
      fig4.boundedness_holds;
    return Outcome{ok, fmt("%.0f evaluations", static_cast<double>(bound_evaluations)) +
        fmt(", worst margin %.3e", worst_bound_margin)};
  });

  run(8, "Orlicz layer", 0.0, [] {
    const auto ind = signal_by_name("indicator:0,1");
    double worst = 0.0;
    for (double p : {1.0, 2.0, 4.0}) {
      for (double c : {1.0, 0.5, 2.0}) {
        const auto f = linear_combination(c, ind, 0.0, ind, "c*ind");
        const double n = luxemburg_norm(f, PhiFunction::power(p), finite(-1.0, 2.0)).value;
        worst = std::max(worst, std::abs(n - c));
      }
      // length-4 indicator: ||1_[a,b]||_p = 4^(1/p)
      const double n = luxemburg_norm(signal_by_name("indicator:-1,3"), PhiFunction::power(p), finite(-2, 4)).value;
      worst = std::max(worst, std::abs(n - std::pow(4.0, 1.0 / p)));
    }
    bool d2 = true;
    for (double p : {1.0, 2.0, 4.0}) {
      const auto c = delta2_classify(PhiFunction::power(p));
      d2 = d2 && c.satisfied && std::abs(c.sup_ratio - std::pow(2.0, p)) <= 1e-12;
    }
    d2 = d2 && delta2_classify(PhiFunction::zygmund(1.0, 1.0)).satisfied;
    d2 = d2 && !delta2_classify(PhiFunction::exponential(1.0)).satisfied;
    return Outcome{worst <= 1e-5 && d2, fmt("max Luxemburg error %.2e", worst) + (d2 ? ", delta2 ok" : ", delta2 wrong")};
  });

  run(9, "modular convergence table (zygmund(1,1), lambda 0.5 and 1)", 0.0, [&] {
    bool rows_ok = !fig2.modular_rows_decreasing.empty();
    for (bool b : fig2.modular_rows_decreasing) {
      rows_ok = rows_ok && b;
    }
    bool lambda_ok = true;
    std::string d;
    for (const auto & row : fig2.rows) {
      lambda_ok = lambda_ok && row.modular_error[0].value <= row.modular_error[1].value;
      d += fmt(" w=%g:", row.w) + fmt("%.3g", row.modular_error[0].value) + fmt("/%.3g", row.modular_error[1].value);
    }
    return Outcome{rows_ok && lambda_ok, "cells" + d};
  });

  run(10, "w ||chi(w .)||_1 constant in w", 0.0, [] {
    double worst = 0.0;
    for (const auto & name : kernel_catalog()) {
      const Kernel k = kernel_by_name(name);
      const double ref = k.scaled_l1_norm(1.0);
      for (double w : {5.0, 40.0}) {
        worst = std::max(worst, std::abs(w * k.scaled_l1_norm(w) - ref));
      }
    }
    // the Mellin family in its Haar measure
    const std::vector<double> ws{1.0, 5.0, 40.0};
    const auto t6 = make_operator("t6", "", "");
    const auto r = check_kernel_assumptions(t6, ws, 20);
    for (const auto & p : r.scaled_l1_profile) {
      worst = std::max(worst, std::abs(p.w_times_l1 - r.scaled_l1_profile.front().w_times_l1));
    }
    return Outcome{worst <= 1e-8, fmt("max spread %.3e", worst)};
  });

  run(11, "determinism of the figure-2 sweep CSVs", 0.0, [&] {
    const ApproximationReport again = run_sweep(figure2_sweep(out / "c5_run2"));
    bool same = again.files.size() == fig2.files.size() && !fig2.files.empty();
    for (std::size_t i = 0; same && i < fig2.files.size(); ++i) {
      same = fig2.files[i].filename() == again.files[i].filename() && slurp(fig2.files[i]) == slurp(again.files[i]);
    }
    return Outcome{same, std::to_string(fig2.files.size()) + " files compared"};
  });

  std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
