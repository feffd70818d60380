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
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "unisamp/operators.hpp"

using namespace unisamp;

namespace {

// antiderivative of the ramp max(0, 1 - |t|)
double ramp_primitive(double t)
{
  if (t < -1.0) return 0.0;
  if (t < 0.0) return 0.5 * (t + 1.0) * (t + 1.0);
  if (t < 1.0) return 1.0 - 0.5 * (1.0 - t) * (1.0 - t);
  return 1.0;
}

double ramp(double t) { return std::max(0.0, 1.0 - std::abs(t)); }

std::vector<double> sorted_cuts(std::vector<double> cuts, double lo, double hi)
{
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::erase_if(cuts, [&](double c) { return c < lo || c > hi; });
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

/// Checks |T| <= M Upsilon ||f|| + 1e-9 for every value.
struct BoundGuard
{
  double bound;
  BoundGuard(const OperatorSpec & spec, const PiecewiseSignal & f, double w)
  {
    const std::vector<double> ws{w};
    const AssumptionReport r = check_kernel_assumptions(spec, ws, 50);
    bound = moment_bound(spec, r) * spec.functional.upsilon_bound() * f.sup_norm() + 1e-9;
  }
  void operator()(double v) const { CHECK(std::abs(v) <= bound); }
};

}  // namespace

TEST_CASE("operator ids and construction")
{
  CHECK(parse_operator_id("t4") == OperatorId::t4);
  CHECK(to_string(OperatorId::t7) == "t7");
  CHECK(is_discrete(OperatorId::t3));
  CHECK_FALSE(is_discrete(OperatorId::t4));
  CHECK(is_mellin(OperatorId::t6));
  CHECK_THROWS_AS(parse_operator_id("t8"), std::invalid_argument);

  CHECK(make_operator("t3", "combined-m").functional.kind() == FunctionalKind::durrmeyer);
  CHECK(make_operator("t3", "combined-m").functional.upsilon_bound() == doctest::Approx(1.0));
  CHECK(make_operator("t5", "combined-m", "").functional.kind() == FunctionalKind::average);
  CHECK(make_operator("t7", "", "").functional.kind() == FunctionalKind::mellin_average);
  CHECK(make_operator("t6", "mellin", "").functional.kind() == FunctionalKind::mellin_point);
  CHECK_THROWS_AS(make_operator("t1", ""), std::invalid_argument);
  CHECK_THROWS_AS(make_operator("t6", "fejer", ""), std::invalid_argument);
  CHECK_THROWS_AS(make_operator("t4", "fejer", "jitter:0.1"), std::invalid_argument);
  CHECK_THROWS_AS(make_operator("t2", "fejer", "jitter:0.1"), std::invalid_argument);
  CHECK_THROWS_AS(make_operator("t1", "fejer", "regular", "fejer"), std::invalid_argument);
  CHECK_THROWS_AS(make_operator("t1", "sinc"), std::invalid_argument);
  CHECK(describe(make_operator("t2", "combined-m")) == "t2/combined-m/regular");
}

TEST_CASE("sample functionals on constants")
{
  const auto c = signal_by_name("const:3.5");
  const auto one = signal_by_name("const:1");
  const auto t2 = make_operator("t2", "combined-m");
  const auto t5 = make_operator("t5", "combined-m", "");
  const auto t7 = make_operator("t7", "", "");
  for (double w : {1.0, 7.0, 40.0}) {
    for (long k : {-3L, 0L, 11L}) {
      CHECK(std::abs(sample_functional_eval(t2, w, k, c).value - 3.5) <= 1e-12);
    }
    for (double t : {-2.0, 0.3, 5.0}) {
      CHECK(std::abs(sample_functional_eval(t5, w, t, one).value - 1.0) <= 1e-12);
    }
    for (double t : {0.2, 1.0, 6.0}) {
      CHECK(std::abs(sample_functional_eval(t7, w, t, one).value - 1.0) <= 1e-10);
    }
  }
  CHECK_THROWS_AS(sample_functional_eval(t7, 5.0, 0.0, one), std::domain_error);
  CHECK_THROWS_AS(apply_operator(t7, 5.0, one, -1.0), std::domain_error);
  CHECK_THROWS_AS(apply_operator(t5, 0.0, one, 1.0), std::domain_error);
}

TEST_CASE("constant reproduction")
{
  const auto c = signal_by_name("const:2");
  const auto t1 = make_operator("t1", "combined-m");
  for (double x : oracle::uniform_probes(50, -5.0, 5.0, 31)) {
    CHECK(std::abs(apply_operator(t1, 10.0, c, x).value - 2.0) <= 1e-12);
  }
  const auto t4 = make_operator("t4", "combined-m", "");
  const auto one = signal_by_name("const:1");
  for (double x : oracle::uniform_probes(20, -5.0, 5.0, 32)) {
    CHECK(std::abs(apply_operator(t4, 5.0, one, x).value - 1.0) <= 1e-8);
  }
}

TEST_CASE("t1 against a direct finite sum")
{
  const auto f = signal_by_name("ramp");
  for (const char * kname : {"combined-m", "fejer", "bspline:3"}) {
    const auto spec = make_operator("t1", kname);
    const Kernel chi = kernel_by_name(kname);
    const BoundGuard guard(spec, f, 7.0);
    for (double x : oracle::uniform_probes(30, -3.0, 3.0, 33)) {
      double direct = 0.0;
      for (long k = -7; k <= 7; ++k) {
        direct += chi(7.0 * x - k) * ramp(k / 7.0);
      }
      const Evaluation e = apply_operator(spec, 7.0, f, x);
      CHECK(e.certified);
      CHECK_MESSAGE(std::abs(e.value - direct) <= 1e-12, kname << " x = " << x);
      guard(e.value);
    }
  }
}

TEST_CASE("t2 against a Simpson sample oracle")
{
  const auto f = signal_by_name("fig2");
  const auto spec = make_operator("t2", "combined-m");
  const double w = 40.0;
  const BoundGuard guard(spec, f, w);
  const std::vector<double> bps(f.breakpoints().begin(), f.breakpoints().end());
  for (double x : {-4.0, -2.5, 0.5, 1.7, 2.6, -5.3}) {
    double direct = 0.0;
    const long k0 = static_cast<long>(std::floor(w * x));
    for (long k = k0 - 3; k <= k0 + 3; ++k) {
      const double a = k / w;
      const double b = (k + 1) / w;
      const double avg = w * oracle::simpson_piecewise([&](double u) { return f(u); }, sorted_cuts(bps, a, b), 1e-5);
      direct += combined_m(w * x - k) * avg;
    }
    const Evaluation e = apply_operator(spec, w, f, x);
    CHECK(std::abs(e.value - direct) <= 1e-9);
    guard(e.value);
  }
  CHECK(std::abs(apply_operator(spec, 40.0, f, -4.0).value + 1.0) <= 0.02);
}

TEST_CASE("t3 against a Simpson sample oracle")
{
  const auto f = signal_by_name("ramp");
  const auto spec = make_operator("t3", "combined-m", "regular", "bspline:2");
  const double w = 6.0;
  const BoundGuard guard(spec, f, w);
  for (long k : {-7L, -3L, 0L, 2L, 5L}) {
    // L_k f = int psi(s) f((s + k) / w) ds with psi the hat on [-1, 1]
    const std::vector<double> cuts = sorted_cuts({-w - k, -static_cast<double>(k), w - k, 0.0}, -1.0, 1.0);
    const double lk = oracle::simpson_piecewise([&](double s) { return oracle::hat(s) * ramp((s + k) / w); }, cuts, 1e-5);
    CHECK(std::abs(sample_functional_eval(spec, w, k, f).value - lk) <= 1e-10);
  }
  for (double x : {-0.4, 0.1, 0.77}) {
    double direct = 0.0;
    const long k0 = static_cast<long>(std::floor(w * x));
    for (long k = k0 - 3; k <= k0 + 3; ++k) {
      const std::vector<double> cuts = sorted_cuts({-w - k, -static_cast<double>(k), w - k, 0.0}, -1.0, 1.0);
      direct += combined_m(w * x - k) *
        oracle::simpson_piecewise([&](double s) { return oracle::hat(s) * ramp((s + k) / w); }, cuts, 1e-5);
    }
    const Evaluation e = apply_operator(spec, w, f, x);
    CHECK(std::abs(e.value - direct) <= 1e-10);
    guard(e.value);
  }
}

TEST_CASE("t3 with a Fejer psi on a compact signal")
{
  const auto f = signal_by_name("indicator:0,1");
  const auto spec = make_operator("t3", "combined-m", "regular", "fejer");
  const double w = 4.0;
  for (long k : {-20L, 0L, 2L, 9L}) {
    // n int_0^{1} F(n u - k) du over the exact window [-k, n - k]
    const double lk = oracle::simpson([&](double s) { return oracle::fejer(s); }, -k, w - k, 1e-5);
    const Evaluation e = sample_functional_eval(spec, w, k, f);
    CHECK(e.certified);
    CHECK(std::abs(e.value - lk) <= 1e-10);
  }
}

TEST_CASE("t4 and t5 against Simpson oracles")
{
  const auto f = signal_by_name("ramp");
  const auto t4 = make_operator("t4", "combined-m", "");
  const auto t5 = make_operator("t5", "combined-m", "");
  const double w = 3.0;
  const BoundGuard g4(t4, f, w);
  const BoundGuard g5(t5, f, w);
  for (double x : oracle::uniform_probes(10, -2.0, 2.0, 34)) {
    std::vector<double> kinks{-2, -1, 0, 1, 2};
    for (double b : {-1.0, 0.0, 1.0}) {
      kinks.push_back(w * (x - b));
      kinks.push_back(w * (x - b) + 1.0);
      kinks.push_back(w * (x - b) - 1.0);
    }
    const auto cuts = sorted_cuts(kinks, -2.0, 2.0);
    const double o4 = oracle::simpson_piecewise([&](double s) { return combined_m(s) * ramp(x - s / w); }, cuts, 1e-5);
    const double o5 = oracle::simpson_piecewise(
      [&](double s) {
        const double t = x - s / w;
        return combined_m(s) * 0.5 * w * (ramp_primitive(t + 1.0 / w) - ramp_primitive(t - 1.0 / w));
      },
      cuts, 1e-5);
    const Evaluation e4 = apply_operator(t4, w, f, x);
    const Evaluation e5 = apply_operator(t5, w, f, x);
    CHECK(std::abs(e4.value - o4) <= 1e-9);
    CHECK(std::abs(e5.value - o5) <= 1e-9);
    g4(e4.value);
    g5(e5.value);
  }
}

TEST_CASE("t6 and t7 against Simpson oracles in the log variable")
{
  const auto f = signal_by_name("fig4");
  const auto t6 = make_operator("t6", "", "");
  const auto t7 = make_operator("t7", "", "");
  const double w = 5.0;
  const BoundGuard g6(t6, f, w);
  const BoundGuard g7(t7, f, w);
  auto fv = [&](double u) { return f(u); };
  for (double x : {0.3, 1.1, 2.5, 5.0}) {
    // T6 f(x) = int_0^inf w e^{-w v} f(x e^v) dv
    const auto cuts = sorted_cuts({std::log(2.0 / x), std::log(4.0 / x)}, 0.0, 40.0 / w);
    const double o6 = oracle::simpson_piecewise([&](double v) { return w * std::exp(-w * v) * fv(x * std::exp(v)); }, cuts, 1e-5);
    const Evaluation e6 = apply_operator(t6, w, f, x);
    CHECK(std::abs(e6.value - o6) <= 1e-8);
    g6(e6.value);

    const double ell = std::log1p(1.0 / w);
    auto Lt = [&](double t) {
      const double c = std::log(t);
      const auto inner = sorted_cuts({std::log(2.0), std::log(4.0)}, c - ell, c + ell);
      return oracle::simpson_piecewise([&](double u) { return fv(std::exp(u)); }, inner, 2e-4) / (2.0 * ell);
    };
    std::vector<double> vk;
    for (double b : {2.0, 4.0}) {
      vk.push_back(std::log(b / x) - ell);
      vk.push_back(std::log(b / x) + ell);
    }
    const auto outer = sorted_cuts(vk, 0.0, 40.0 / w);
    const double o7 = oracle::simpson_piecewise([&](double v) { return w * std::exp(-w * v) * Lt(x * std::exp(v)); }, outer, 2e-3);
    const Evaluation e7 = apply_operator(t7, w, f, x);
    CHECK_MESSAGE(std::abs(e7.value - o7) <= 1e-6, "x=" << x << " e7=" << e7.value << " o7=" << o7);
    g7(e7.value);
  }
}

TEST_CASE("t7 constant and the simple prefactor")
{
  auto spec = make_operator("t7", "", "");
  const auto one = signal_by_name("const:1");
  for (double x : {0.5, 2.0, 7.0}) {
    CHECK(std::abs(apply_operator(spec, 20.0, one, x).value - 1.0) <= 1e-8);
  }
  spec.truncation.t7_simple_prefactor = true;
  // w/2 against 1/(2 ln(1 + 1/w)): ratio w ln(1 + 1/w)
  const double w = 20.0;
  CHECK(apply_operator(spec, w, one, 1.0).value == doctest::Approx(w * std::log1p(1.0 / w)).epsilon(1e-8));
}

TEST_CASE("linearity and homogeneity")
{
  struct Case
  {
    const char * op;
    const char * kernel;
    const char * f;
    const char * g;
    std::vector<double> xs;
  };
  const Case cases[] = {
    {"t1", "combined-m", "fig2", "fig3", {-4.2, -0.3, 1.5, 2.8}},
    {"t2", "fejer", "ramp", "indicator:0,1", {-0.5, 0.25, 0.9}},
    {"t4", "combined-m", "ramp", "gauss", {-1.0, 0.0, 0.6}},
    {"t5", "bspline:3", "fig3", "ramp", {-1.5, 0.5, 2.5}},
    {"t6", "", "fig4", "gauss", {0.4, 1.5, 3.0}},
    {"t7", "", "fig4", "indicator:1,3", {0.4, 1.5, 3.0}},
  };
  for (const auto & c : cases) {
    const auto spec = make_operator(c.op, c.kernel, is_discrete(parse_operator_id(c.op)) ? "regular" : "");
    const auto f = signal_by_name(c.f);
    const auto g = signal_by_name(c.g);
    const auto sum = linear_combination(1.0, f, 1.0, g, "f+g");
    for (double x : c.xs) {
      const double tf = apply_operator(spec, 10.0, f, x).value;
      const double tg = apply_operator(spec, 10.0, g, x).value;
      CHECK_MESSAGE(std::abs(apply_operator(spec, 10.0, sum, x).value - tf - tg) <= 1e-9, c.op << " x = " << x);
      for (double a : {-2.0, 0.5}) {
        const auto af = linear_combination(a, f, 0.0, g, "af");
        CHECK(std::abs(apply_operator(spec, 10.0, af, x).value - a * tf) <= 1e-9);
      }
    }
  }
}

TEST_CASE("positivity with a nonnegative kernel")
{
  const auto ramp_f = signal_by_name("ramp");
  const auto ind = signal_by_name("indicator:0.5,2");
  for (const char * op : {"t1", "t2", "t4", "t5"}) {
    const auto spec = make_operator(op, "bspline:2", is_discrete(parse_operator_id(op)) ? "regular" : "");
    for (double x : oracle::uniform_probes(40, -3.0, 3.0, 35)) {
      CHECK(apply_operator(spec, 6.0, ramp_f, x).value >= -1e-12);
      CHECK(apply_operator(spec, 6.0, ind, x).value >= -1e-12);
    }
  }
  for (const char * op : {"t6", "t7"}) {
    const auto spec = make_operator(op, "", "");
    for (double x : oracle::uniform_probes(20, 0.05, 3.0, 36)) {
      CHECK(apply_operator(spec, 6.0, ind, x).value >= -1e-12);
    }
  }
}

TEST_CASE("uniform convergence on continuous signals")
{
  std::vector<double> xs;
  for (int i = 0; i <= 1000; ++i) {
    xs.push_back(-5.0 + i * 0.01);
  }
  for (const char * sig : {"ramp", "gauss"}) {
    const auto f = signal_by_name(sig);
    for (const char * op : {"t1", "t2", "t4", "t5"}) {
      for (const char * kname : {"combined-m", "bspline:2"}) {
        const auto spec = make_operator(op, kname, is_discrete(parse_operator_id(op)) ? "regular" : "");
        double prev = 1e300;
        double last = 0.0;
        for (double w : {5.0, 10.0, 20.0, 40.0}) {
          const auto ev = apply_on_grid(spec, w, f, xs);
          double sup = 0.0;
          for (std::size_t i = 0; i < xs.size(); ++i) {
            sup = std::max(sup, std::abs(ev[i].value - f(xs[i])));
          }
          CHECK_MESSAGE(sup <= prev, sig << " " << op << " " << kname << " w = " << w);
          prev = sup;
          last = sup;
        }
        CHECK_MESSAGE(last < 0.02, sig << " " << op << " " << kname);
      }
    }
  }
}

TEST_CASE("t5 approaches t4")
{
  const auto t4 = make_operator("t4", "combined-m", "");
  const auto t5 = make_operator("t5", "combined-m", "");
  std::vector<double> xs;
  for (int i = 0; i <= 450; ++i) {
    xs.push_back(-6.0 + i * 0.02);
  }
  for (const char * sig : {"fig2", "fig3", "ramp", "gauss", "indicator:0,1", "const:2"}) {
    const auto f = signal_by_name(sig);
    auto dist = [&](double w) {
      const auto a = apply_on_grid(t4, w, f, xs);
      const auto b = apply_on_grid(t5, w, f, xs);
      double d = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        d = std::max(d, std::abs(a[i].value - b[i].value));
      }
      return d;
    };
    const double d5 = dist(5.0);
    const double d40 = dist(40.0);
    if (d5 <= 1e-12) {
      // both operators reproduce constants exactly
      CHECK(d40 <= 1e-12);
    } else {
      CHECK_MESSAGE(d40 < d5, sig);
    }
  }
}

TEST_CASE("grid evaluation matches pointwise evaluation")
{
  const auto f = signal_by_name("fig2");
  const auto spec = make_operator("t2", "combined-m");
  const std::vector<double> xs{-5.5, -4.0, -1.01, 0.0, 2.2};
  const auto ev = apply_on_grid(spec, 15.0, f, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(ev[i].value == apply_operator(spec, 15.0, f, xs[i]).value);
  }
  Eigen::ArrayXd ex(3);
  ex << -1.0, 0.5, 1.0;
  bool cert = false;
  const Eigen::ArrayXd out = apply_on_grid(spec, 15.0, f, ex, &cert);
  CHECK(cert);
  CHECK(out[1] == apply_operator(spec, 15.0, f, 0.5).value);
}

TEST_CASE("non-finite samples carry kind, location and w")
{
  std::istringstream in("-inf,none\n0,power,1,-1\n");
  const auto f = load_signal_csv(in, "pole");
  const auto spec = make_operator("t1", "combined-m");
  try {
    (void)apply_operator(spec, 4.0, f, 0.1);
    FAIL("expected SampleError");
  } catch (const SampleError & e) {
    CHECK(e.kind() == FunctionalKind::point);
    CHECK(e.w() == 4.0);
  }
}

TEST_CASE("time-jitter")
{
  const auto f = signal_by_name("ramp");
  const auto plain = make_operator("t1", "combined-m");
  const auto zero = make_operator("t1", "combined-m", "jitter:0");
  const double eta = 0.3;
  const auto jit = make_operator("t1", "combined-m", "jitter:0.3");
  CHECK_THROWS_AS(jittered_operator(plain, 5.0, f, 0.0), std::invalid_argument);
  const std::vector<double> ws{5.0};
  const double M = check_kernel_assumptions(jit, ws).chi3_moment_M;
  const auto c = signal_by_name("const:-1.5");
  for (double x : oracle::uniform_probes(40, -2.0, 2.0, 37)) {
    for (double w : {5.0, 20.0}) {
      const double base = apply_operator(plain, w, f, x).value;
      CHECK(jittered_operator(zero, w, f, x).value == base);
      const double moved = jittered_operator(jit, w, f, x).value;
      CHECK(std::abs(moved - base) <= M * 1.0 * eta / w + 1e-12);
      CHECK(std::abs(jittered_operator(jit, w, c, x).value + 1.5) <= 1e-12);
    }
  }
}

TEST_CASE("kernel assumptions through operator specs")
{
  const std::vector<double> ws{1.0, 5.0, 40.0};
  const auto t1 = make_operator("t1", "combined-m");
  const auto r1 = check_kernel_assumptions(t1, ws);
  CHECK(r1.chi2_partition_defect <= 1e-10);
  CHECK(moment_bound(t1, r1) == r1.chi3_moment_M);

  const auto t4 = make_operator("t4", "combined-m", "");
  const auto r4 = check_kernel_assumptions(t4, ws);
  CHECK(r4.chi2_partition_defect <= 1e-10);
  CHECK(moment_bound(t4, r4) == doctest::Approx(kernel_by_name("combined-m").l1_norm()));

  const auto t6 = make_operator("t6", "", "");
  const auto r6 = check_kernel_assumptions(t6, ws);
  CHECK(r6.chi2_partition_defect <= 1e-8);
  CHECK(moment_bound(t6, r6) == 1.0);
  for (const auto & p : r6.scaled_l1_profile) {
    CHECK(std::abs(p.w_times_l1 - r6.scaled_l1_profile.front().w_times_l1) <= 1e-8);
  }
}

TEST_CASE("sample functional assumptions")
{
  const std::vector<double> ws{5.0, 10.0, 20.0};
  const PhiFunction phi = PhiFunction::power(1.0);

  // unit sup norm: empirical Upsilon for the Kantorovich average
  const auto t2 = make_operator("t2", "combined-m");
  const auto rep2 = check_L_assumptions(t2, signal_by_name("ramp"), phi, ws, 1e-3);
  CHECK(rep2.l1_ok);
  for (const auto & row : rep2.rows) {
    CHECK(row.upsilon_measured <= 1.0 + 1e-12);
    CHECK(row.l3_exact_zero);
    CHECK(row.l4_holds);
  }
  CHECK_FALSE(rep2.modular_only);

  // point samples of a compact signal vanish off the support
  const auto t1 = make_operator("t1", "combined-m");
  const auto rep1 = check_L_assumptions(t1, signal_by_name("indicator:-1,2"), phi, ws, 1e-3);
  for (const auto & row : rep1.rows) {
    CHECK(row.l3_exact_zero);
    CHECK(row.l3_tail_outside_k == 0.0);
  }

  // Durrmeyer samples do not inherit compact support
  const std::vector<double> w10{10.0};
  const auto t3 = make_operator("t3", "combined-m", "regular", "fejer");
  const auto rep3 = check_L_assumptions(t3, signal_by_name("indicator:0,1"), phi, w10, 1e-3);
  REQUIRE(rep3.rows.size() == 1);
  const auto & row = rep3.rows.front();
  CHECK(row.nonlocal_value > 1e-4);
  CHECK((row.nonlocal_at < 0.0 || row.nonlocal_at > 1.0));
  CHECK(row.l3_tail_outside_k > 0.0);
  CHECK(row.l3_window_found);
  CHECK(row.l3_tail_at_window < 1e-3);
  CHECK(rep3.modular_only);
  CHECK(rep3.upsilon_bound == doctest::Approx(1.0));
}
