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

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "unisamp/quadrature.hpp"
#include "unisamp/signals.hpp"

using namespace unisamp;

TEST_CASE("polynomial on a finite interval")
{
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-10;
  const auto r = integrate([](double x) { return x * x; }, finite(0.0, 1.0), cfg);
  CHECK(r.certified);
  CHECK(std::abs(r.value - 1.0 / 3.0) <= 1e-10);
}

TEST_CASE("gaussian on the truncated real line")
{
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-10;
  auto g = [](double x) { return std::exp(-x * x); };
  const auto r = integrate(g, real_line(10.0), cfg);
  const double simpson = oracle::simpson(g, -10.0, 10.0, 1e-5);
  CHECK(std::abs(simpson - std::sqrt(std::numbers::pi)) <= 1e-10);
  CHECK(std::abs(r.value - simpson) <= 1e-8);
}

TEST_CASE("log half-line measure")
{
  const double w = 5.0;
  // int_0^1 w u^w du/u = 1
  const auto r = integrate([w](double u) { return w * std::pow(u, w); }, log_half_line(-40.0 / w, 0.0));
  CHECK(std::abs(r.value - 1.0) <= 1e-8);

  // change of variables against Simpson on g(u)/u
  auto g = [](double u) { return std::exp(-u) * u; };
  const auto lr = integrate(g, log_half_line(-3.0, 2.0));
  const double s = oracle::simpson([&](double u) { return g(u) / u; }, std::exp(-3.0), std::exp(2.0), 1e-4);
  CHECK(std::abs(lr.value - s) <= 1e-6);
}

TEST_CASE("degenerate domains and configs are rejected")
{
  CHECK_THROWS_AS(finite(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(real_line(0.0), std::invalid_argument);
  CHECK_THROWS_AS(log_half_line(2.0, 1.0), std::invalid_argument);
  QuadratureConfig bad;
  bad.abs_tol = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad.abs_tol = 1e-9;
  bad.max_subdivisions = 0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("non-finite integrand reports the abscissa")
{
  auto f = [](double x) { return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0; };
  try {
    (void)integrate(f, finite(0.0, 1.0));
    FAIL("expected EvaluationError");
  } catch (const EvaluationError & e) {
    CHECK(e.abscissa() > 0.5);
  }
}

TEST_CASE("exhausted budget is flagged, not thrown")
{
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-14;
  cfg.max_subdivisions = 3;
  const auto r = integrate([](double x) { return std::sqrt(x); }, finite(0.0, 1.0), cfg);
  CHECK_FALSE(r.certified);
  CHECK(std::abs(r.value - 2.0 / 3.0) < 1e-3);
}

TEST_CASE("relative tolerance stops large integrals early")
{
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-12;
  cfg.rel_tol = 1e-10;
  const auto r = integrate([](double x) { return 1e12 * std::sqrt(x); }, finite(0.0, 1.0), cfg);
  CHECK(r.certified);
  CHECK(std::abs(r.value / (2e12 / 3.0) - 1.0) <= 1e-9);
}

TEST_CASE("piecewise integration respects breakpoints")
{
  const PiecewiseSignal f = signal_by_name("fig2");
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-12;
  CHECK(std::abs(f.integrate(finite(-3.0, -2.0), cfg).value - 2.0) <= 1e-12);
  CHECK(std::abs(f.integrate(finite(-2.0, -1.0), cfg).value + 0.5) <= 1e-12);
  // 40 / u^2 on [-10, -5]
  cfg.abs_tol = 1e-11;
  CHECK(std::abs(f.integrate(finite(-10.0, -5.0), cfg).value - 4.0) <= 1e-10);

  const PiecewiseSignal zero = signal_by_name("const:0");
  CHECK(zero.integrate(finite(-7.0, 3.0)).value == 0.0);
}

TEST_CASE("linearity and translation")
{
  const auto probes = oracle::uniform_probes(20, -10.0, 10.0, 7);
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-10;
  auto f = [](double x) { return std::exp(-0.5 * x * x) * std::cos(x); };
  auto g = [](double x) { return 1.0 / (1.0 + x * x * x * x); };
  const double If = integrate(f, real_line(30.0), cfg).value;
  const double Ig = integrate(g, real_line(30.0), cfg).value;
  for (std::size_t i = 0; i + 1 < probes.size(); i += 2) {
    const double a = probes[i];
    const double b = probes[i + 1];
    const double I = integrate([&](double x) { return a * f(x) + b * g(x); }, real_line(30.0), cfg).value;
    CHECK(std::abs(I - a * If - b * Ig) <= 3.0 * cfg.abs_tol);
  }
  for (double c : {-3.0, 0.7, 2.5}) {
    const double shifted = integrate([&](double x) { return f(x - c); }, real_line(30.0 + std::abs(c)), cfg).value;
    const double base = integrate(f, real_line(30.0), cfg).value;
    CHECK(std::abs(shifted - base) <= 2.0 * cfg.abs_tol);
  }
}

TEST_CASE("certified results agree with a fine fixed-step oracle")
{
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-9;
  const std::function<double(double)> corpus[] = {
    [](double x) { return std::sin(3.0 * x) + x; },
    [](double x) { return std::exp(x) / (1.0 + x * x); },
    [](double x) { return std::cos(x) * std::cos(x); },
  };
  for (const auto & f : corpus) {
    const auto r = integrate(f, finite(-2.0, 3.0), cfg);
    REQUIRE(r.certified);
    CHECK(std::abs(r.value - oracle::simpson(f, -2.0, 3.0, 1e-4)) <= 10.0 * cfg.abs_tol);
  }
}
