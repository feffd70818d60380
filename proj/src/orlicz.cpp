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
#include "unisamp/orlicz.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace unisamp {

namespace {

double parse_number(const std::string & key, const std::string & text)
{
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw std::invalid_argument("bad value for " + key + ": '" + text + "'");
  }
  return v;
}

std::string format_number(double v)
{
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

PhiFunction::PhiFunction(Family family, double p, double alpha, double beta)
    : family_(family), p_(p), alpha_(alpha), beta_(beta)
{
  check_axioms();
}

PhiFunction PhiFunction::power(double p)
{
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("power phi needs p >= 1");
  }
  return PhiFunction(Family::power, p, 1.0, 0.0);
}

PhiFunction PhiFunction::exponential(double alpha)
{
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("exponential phi needs alpha > 0");
  }
  return PhiFunction(Family::exponential, 1.0, alpha, 0.0);
}

PhiFunction PhiFunction::zygmund(double alpha, double beta)
{
  if (!(alpha >= 1.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::invalid_argument("zygmund phi needs alpha >= 1 and beta > 0");
  }
  return PhiFunction(Family::zygmund, 1.0, alpha, beta);
}

PhiFunction PhiFunction::parse(std::string_view spec)
{
  const auto colon = spec.find(':');
  const std::string family(spec.substr(0, colon));
  std::map<std::string, double> params;
  if (colon != std::string_view::npos) {
    std::string rest(spec.substr(colon + 1));
    std::istringstream in(rest);
    std::string item;
    while (std::getline(in, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument("phi parameter without '=': '" + item + "'");
      }
      const std::string key = item.substr(0, eq);
      params[key] = parse_number(key, item.substr(eq + 1));
    }
  }
  auto take = [&](const std::string & key) {
    const auto it = params.find(key);
    if (it == params.end()) {
      throw std::invalid_argument("phi spec '" + std::string(spec) + "' is missing " + key);
    }
    const double v = it->second;
    params.erase(it);
    return v;
  };
  auto finish = [&](PhiFunction phi) {
    if (!params.empty()) {
      throw std::invalid_argument("unknown phi parameter '" + params.begin()->first + "'");
    }
    return phi;
  };
  if (family == "power") {
    const double p = take("p");
    return finish(power(p));
  }
  if (family == "exp" || family == "exponential") {
    const double a = take("alpha");
    return finish(exponential(a));
  }
  if (family == "zygmund") {
    const double a = take("alpha");
    const double b = take("beta");
    return finish(zygmund(a, b));
  }
  throw std::invalid_argument("unknown phi family: '" + family + "'");
}

double PhiFunction::operator()(double x) const
{
  if (x < 0.0 || std::isnan(x)) {
    throw std::domain_error("phi evaluated at a negative argument");
  }
  switch (family_) {
    case Family::power:
      return std::pow(x, p_);
    case Family::exponential:
      return std::expm1(std::pow(x, alpha_));
    case Family::zygmund:
      return x == 0.0 ? 0.0 : std::pow(x, alpha_) * std::pow(std::log(std::numbers::e + x), beta_);
  }
  return 0.0;
}

std::string PhiFunction::spec() const
{
  switch (family_) {
    case Family::power:
      return "power:p=" + format_number(p_);
    case Family::exponential:
      return "exp:alpha=" + format_number(alpha_);
    case Family::zygmund:
      return "zygmund:alpha=" + format_number(alpha_) + ",beta=" + format_number(beta_);
  }
  return {};
}

void PhiFunction::check_axioms() const
{
  const PhiFunction & phi = *this;
  if (phi(0.0) != 0.0) {
    throw std::invalid_argument(spec() + ": phi(0) must be 0");
  }
  const std::vector<double> xs = log_spaced(1e-6, 50.0, 241);
  double prev = 0.0;
  for (double x : xs) {
    const double y = phi(x);
    if (!(y > 0.0)) {
      throw std::invalid_argument(spec() + ": phi must be positive on (0, inf)");
    }
    if (y < prev) {
      throw std::invalid_argument(spec() + ": phi must be nondecreasing");
    }
    prev = y;
  }
  if (!std::isinf(phi(50.0)) && !(phi(1e3) > phi(50.0))) {
    throw std::invalid_argument(spec() + ": phi must grow without bound");
  }
  // midpoint convexity on pairs of neighbouring and distant probes
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j : {i + 1, xs.size() - 1, i / 2}) {
      const double x = xs[i];
      const double y = xs[j];
      const double mid = phi(0.5 * (x + y));
      const double chord = 0.5 * (phi(x) + phi(y));
      if (std::isfinite(chord) && mid > chord * (1.0 + 1e-12)) {
        throw std::invalid_argument(spec() + ": phi is not convex");
      }
    }
  }
}

double phi_eval(const PhiFunction & phi, double x) { return phi(x); }

double ModularValue::as_double() const
{
  return infinite ? std::numeric_limits<double>::infinity() : value;
}

ModularValue modular(const RealFunction & f, std::span<const double> breakpoints, const PhiFunction & phi,
  double lambda, const IntegrationDomain & domain, const QuadratureConfig & config)
{
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("modular needs lambda > 0");
  }
  bool overflow = false;
  auto integrand = [&](double x) {
    if (overflow) {
      return 0.0;
    }
    const double y = phi(lambda * std::abs(f(x)));
    if (!(y <= kModularOverflow)) {
      overflow = true;
      return 0.0;
    }
    return y;
  };
  ModularValue out;
  out.lambda = lambda;
  const QuadratureResult r = integrate_piecewise(integrand, breakpoints, domain, config);
  if (overflow) {
    out.infinite = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = std::max(0.0, r.value);
  out.certified = r.certified;
  return out;
}

ModularValue modular(const PiecewiseSignal & f, const PhiFunction & phi, double lambda,
  const IntegrationDomain & domain, const QuadratureConfig & config)
{
  return modular([&f](double x) { return f(x); }, f.breakpoints(), phi, lambda, domain, config);
}

LuxemburgNorm luxemburg_norm(const RealFunction & f, std::span<const double> breakpoints, const PhiFunction & phi,
  const IntegrationDomain & domain, const QuadratureConfig & config, const LuxemburgOptions & options)
{
  if (!(options.lambda_min > 0.0) || !(options.lambda_max > options.lambda_min) ||
      !(options.relative_width > 0.0)) {
    throw std::invalid_argument("bad Luxemburg bisection options");
  }
  LuxemburgNorm out;
  // only the comparison with 1 matters, so large modulars need relative accuracy
  QuadratureConfig cfg = config;
  cfg.rel_tol = std::max(cfg.rel_tol, 1e-10);
  // I(f / lambda) <= 1 ?
  auto fits = [&](double lambda) {
    const ModularValue m = modular(f, breakpoints, phi, 1.0 / lambda, domain, cfg);
    out.certified = out.certified && m.certified;
    return !m.infinite && m.value <= 1.0;
  };
  double lo = options.lambda_min;
  double hi = options.lambda_max;
  if (fits(lo)) {
    out.value = 0.0;
    return out;
  }
  if (!fits(hi)) {
    throw std::domain_error("not in L^phi: modular exceeds 1 for every probe lambda");
  }
  while (hi > lo * (1.0 + options.relative_width)) {
    const double mid = std::sqrt(lo * hi);
    if (fits(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.value = std::sqrt(lo * hi);
  return out;
}

LuxemburgNorm luxemburg_norm(const PiecewiseSignal & f, const PhiFunction & phi, const IntegrationDomain & domain,
  const QuadratureConfig & config, const LuxemburgOptions & options)
{
  return luxemburg_norm([&f](double x) { return f(x); }, f.breakpoints(), phi, domain, config, options);
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n)
{
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    throw std::invalid_argument("log_spaced needs 0 < lo < hi and n >= 2");
  }
  std::vector<double> out(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

Delta2Classification delta2_classify(const PhiFunction & phi, std::span<const double> x_grid)
{
  Delta2Classification out;
  out.analytic = phi.analytic_delta2();
  for (double x : x_grid) {
    if (!(x > 0.0)) {
      continue;
    }
    const double num = phi(2.0 * x);
    const double den = phi(x);
    if (!std::isfinite(num)) {
      out.ratio_infinite = true;
      out.sup_ratio = std::numeric_limits<double>::infinity();
      out.argmax = x;
      break;
    }
    const double r = num / den;
    if (r > out.sup_ratio) {
      out.sup_ratio = r;
      out.argmax = x;
    }
  }
  const bool numeric = !out.ratio_infinite && out.sup_ratio <= kDelta2Threshold;
  out.satisfied = numeric && out.analytic;
  out.needs_review = numeric != out.analytic;
  return out;
}

Delta2Classification delta2_classify(const PhiFunction & phi)
{
  const std::vector<double> grid = log_spaced(1e-6, 1e2, 801);
  return delta2_classify(phi, grid);
}

bool nonincreasing_within(std::span<const ConvergenceCell> row, double slack)
{
  for (std::size_t j = 0; j + 1 < row.size(); ++j) {
    const ConvergenceCell & a = row[j];
    const ConvergenceCell & b = row[j + 1];
    if (!a.error.empty() || !b.error.empty() || b.modular.infinite) {
      return false;
    }
    if (a.modular.infinite) {
      continue;
    }
    if (b.modular.value > (1.0 + slack) * a.modular.value + 1e-15) {
      return false;
    }
  }
  return true;
}

ConvergenceTable modular_convergence_table(const std::function<RealFunction(double)> & f_family,
  const RealFunction & f_target, std::span<const double> breakpoints, const PhiFunction & phi,
  std::span<const double> lambdas, std::span<const double> ws, const IntegrationDomain & domain,
  const QuadratureConfig & config)
{
  if (lambdas.empty() || ws.empty()) {
    throw std::invalid_argument("convergence table needs nonempty lambda and w lists");
  }
  ConvergenceTable table;
  table.lambdas.assign(lambdas.begin(), lambdas.end());
  table.ws.assign(ws.begin(), ws.end());
  table.cells.assign(lambdas.size(), std::vector<ConvergenceCell>(ws.size()));
  for (std::size_t j = 0; j < ws.size(); ++j) {
    RealFunction fw;
    std::string family_error;
    try {
      fw = f_family(ws[j]);
    } catch (const std::exception & e) {
      family_error = e.what();
    }
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      ConvergenceCell & cell = table.cells[i][j];
      cell.modular.lambda = lambdas[i];
      if (!family_error.empty()) {
        cell.error = family_error;
        continue;
      }
      try {
        cell.modular = modular([&](double x) { return fw(x) - f_target(x); }, breakpoints, phi, lambdas[i],
          domain, config);
      } catch (const std::exception & e) {
        cell.error = e.what();
      }
    }
  }
  for (const auto & row : table.cells) {
    table.decreasing.push_back(nonincreasing_within(row));
  }
  return table;
}

}  // namespace unisamp
