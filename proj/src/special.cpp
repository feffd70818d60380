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
#include "unisamp/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace unisamp::special {

double trigamma(double x)
{
  if (!(x > 0.0)) {
    throw std::domain_error("trigamma: argument must be positive");
  }
  double acc = 0.0;
  while (x < 12.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double r = 1.0 / x;
  const double r2 = r * r;
  // Bernoulli-number asymptotic series
  const double series =
    r + 0.5 * r2 +
    r * r2 * (1.0 / 6.0 - r2 * (1.0 / 30.0 - r2 * (1.0 / 42.0 - r2 * (1.0 / 30.0 - r2 * (5.0 / 66.0)))));
  return acc + series;
}

double sine_integral_complement(double z)
{
  if (z < 50.0) {
    throw std::domain_error("sine_integral_complement: asymptotic series needs z >= 50");
  }
  const double r2 = 1.0 / (z * z);
  // f(z) ~ (1/z)(1 - 2!/z^2 + 4!/z^4 - ...), g(z) ~ (1/z^2)(1 - 3!/z^2 + 5!/z^4 - ...)
  double f = 0.0;
  double g = 0.0;
  double tf = 1.0;
  double tg = 1.0;
  for (int n = 0; n < 6; ++n) {
    f += tf;
    g += tg;
    tf *= -static_cast<double>((2 * n + 1) * (2 * n + 2)) * r2;
    tg *= -static_cast<double>((2 * n + 2) * (2 * n + 3)) * r2;
  }
  f /= z;
  g *= r2;
  return f * std::cos(z) + g * std::sin(z);
}

double fejer_upper_tail(double radius)
{
  constexpr double pi = std::numbers::pi;
  const double z = pi * radius;
  return ((1.0 - std::cos(z)) / radius + pi * sine_integral_complement(z)) / (pi * pi);
}

namespace {

// sum over k >= k0 with k of the given parity (0 even, 1 odd) of 1 / (k - u)^2
double parity_sum(double u, long k0, int parity)
{
  const long k1 = (((k0 % 2) + 2) % 2 == parity) ? k0 : k0 + 1;
  const double a = static_cast<double>(k1) - u;
  return 0.25 * trigamma(0.5 * a);
}

double right_tail(double u, long k0)
{
  constexpr double pi = std::numbers::pi;
  const double s = std::sin(0.5 * pi * u);
  const double c = std::cos(0.5 * pi * u);
  return 2.0 / (pi * pi) * (s * s * parity_sum(u, k0, 0) + c * c * parity_sum(u, k0, 1));
}

}  // namespace

double fejer_lattice_tail(double u, long k_lo, long k_hi)
{
  if (static_cast<double>(k_hi) - u < 1.0 || u - static_cast<double>(k_lo) < 1.0) {
    throw std::domain_error("fejer_lattice_tail: window must contain u with unit margin");
  }
  // F is even and parity of -k equals parity of k
  return right_tail(u, k_hi + 1) + right_tail(-u, -k_lo + 1);
}

}  // namespace unisamp::special
