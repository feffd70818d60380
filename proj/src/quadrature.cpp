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
#include "unisamp/quadrature.hpp"

namespace unisamp {

IntegrationDomain finite(double a, double b)
{
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("finite domain requires finite a < b");
  }
  return FiniteInterval{a, b};
}

IntegrationDomain real_line(double truncation_radius)
{
  if (!(truncation_radius > 0.0) || !std::isfinite(truncation_radius)) {
    throw std::invalid_argument("real_line domain requires a positive finite truncation radius");
  }
  return RealLine{truncation_radius};
}

IntegrationDomain log_half_line(double v_min, double v_max)
{
  if (!(v_min < v_max) || !std::isfinite(v_min) || !std::isfinite(v_max)) {
    throw std::invalid_argument("log_half_line domain requires finite v_min < v_max");
  }
  return LogHalfLine{v_min, v_max};
}

IntegrationDomain log_half_line_u(double u_min, double u_max)
{
  if (!(u_min > 0.0)) {
    throw std::invalid_argument("log_half_line domain requires u_min > 0");
  }
  return log_half_line(std::log(u_min), std::log(u_max));
}

void validate(const QuadratureConfig & config)
{
  if (!(config.abs_tol > 0.0)) {
    throw std::invalid_argument("QuadratureConfig.abs_tol must be positive");
  }
  if (!(config.rel_tol >= 0.0) || !(config.rel_tol < 1.0)) {
    throw std::invalid_argument("QuadratureConfig.rel_tol must lie in [0, 1)");
  }
  if (config.max_subdivisions < 1) {
    throw std::invalid_argument("QuadratureConfig.max_subdivisions must be at least 1");
  }
}

std::pair<double, double> natural_bounds(const IntegrationDomain & domain)
{
  return std::visit(
    [](const auto & d) -> std::pair<double, double> {
      using D = std::decay_t<decltype(d)>;
      if constexpr (std::is_same_v<D, FiniteInterval>) {
        return {d.a, d.b};
      } else if constexpr (std::is_same_v<D, RealLine>) {
        return {-d.truncation_radius, d.truncation_radius};
      } else {
        return {std::exp(d.v_min), std::exp(d.v_max)};
      }
    },
    domain);
}

namespace detail {

std::vector<double> panel_cuts(const IntegrationDomain & domain, std::span<const double> breakpoints)
{
  const bool logarithmic = std::holds_alternative<LogHalfLine>(domain);
  double lo = 0.0;
  double hi = 0.0;
  if (logarithmic) {
    const auto & d = std::get<LogHalfLine>(domain);
    lo = d.v_min;
    hi = d.v_max;
  } else {
    std::tie(lo, hi) = natural_bounds(domain);
  }

  std::vector<double> cuts;
  cuts.reserve(breakpoints.size() + 2);
  cuts.push_back(lo);
  for (double b : breakpoints) {
    if (logarithmic) {
      if (!(b > 0.0)) {
        continue;
      }
      b = std::log(b);
    }
    if (b > lo && b < hi) {
      cuts.push_back(b);
    }
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace detail
}  // namespace unisamp
