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
#include "unisamp/kernels.hpp"

#include <charconv>
#include <limits>

#include "unisamp/special.hpp"

namespace unisamp {

namespace {

constexpr QuadratureConfig kTightQuadrature{1e-13, 0.0, std::size_t{1} << 20};

std::vector<double> uniform_cuts(double lo, double hi, double width)
{
  std::vector<double> cuts;
  const auto n = static_cast<long>(std::ceil((hi - lo) / width));
  cuts.reserve(static_cast<std::size_t>(n) + 1);
  for (long i = 1; i < n; ++i) {
    cuts.push_back(lo + static_cast<double>(i) * width);
  }
  return cuts;
}

double integrate_abs(const KernelDefinition & def, double lo, double hi, double scale,
  const QuadratureConfig & config)
{
  if (!(hi > lo)) {
    return 0.0;
  }
  // knots and panels live in the unscaled variable; x -> chi(scale * x)
  std::vector<double> cuts = uniform_cuts(lo, hi, def.feature_scale / scale);
  for (double k : def.knots) {
    cuts.push_back(k / scale);
  }
  std::sort(cuts.begin(), cuts.end());
  auto f = [&](double x) { return std::abs(def.eval(scale * x)); };
  return integrate_piecewise(f, cuts, finite(lo, hi), config).value;
}

int parse_order(std::string_view text)
{
  int n = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bspline order is not an integer: " + std::string(text));
  }
  if (n < 1 || n > 12) {
    throw std::invalid_argument("bspline order must be in 1..12: " + std::string(text));
  }
  return n;
}

Kernel make_bspline(int n)
{
  if (n < 1 || n > 12) {
    throw std::domain_error("bspline order must be in 1..12");
  }
  KernelDefinition def;
  def.name = "bspline:" + std::to_string(n);
  def.eval = [n](double x) { return bspline(n, x); };
  def.support = CompactSupport{-0.5 * n, 0.5 * n};
  for (int j = 0; j <= n; ++j) {
    def.knots.push_back(-0.5 * n + j);
  }
  return Kernel(std::move(def));
}

Kernel make_combined_m()
{
  KernelDefinition def;
  def.name = "combined-m";
  def.eval = [](double x) { return combined_m(x); };
  def.support = CompactSupport{-2.0, 2.0};
  def.knots = {-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0};
  return Kernel(std::move(def));
}

Kernel make_fejer()
{
  KernelDefinition def;
  def.name = "fejer";
  def.eval = [](double x) { return fejer(x); };
  def.support = FullLineSupport{2.0 / (std::numbers::pi * std::numbers::pi)};
  def.feature_scale = 1.0;
  def.upper_tail_mass = [](double r) { return special::fejer_upper_tail(r); };
  def.analytic_tail_start = 1000.0;
  def.lattice_tail = [](double u, long k_lo, long k_hi) {
    return special::fejer_lattice_tail(u, k_lo, k_hi);
  };
  return Kernel(std::move(def));
}

}  // namespace

Kernel::Kernel(KernelDefinition definition)
{
  auto impl = std::make_shared<Impl>();
  impl->def = std::move(definition);
  auto & def = impl->def;
  if (!def.eval) {
    throw std::invalid_argument("kernel " + def.name + " has no evaluation function");
  }
  std::sort(def.knots.begin(), def.knots.end());

  if (const auto * c = std::get_if<CompactSupport>(&def.support)) {
    if (!(c->a < c->b)) {
      throw std::invalid_argument("kernel " + def.name + ": compact support needs a < b");
    }
    for (double x : {c->a - 1.0, c->a - 1e-9, c->b + 1e-9, c->b + 1.0, c->b + 10.0}) {
      if (def.eval(x) != 0.0) {
        throw std::invalid_argument("kernel " + def.name + " is nonzero outside its support");
      }
    }
    std::vector<double> cuts(def.knots.begin(), def.knots.end());
    auto abs_f = [&](double x) { return std::abs(def.eval(x)); };
    impl->l1_norm = integrate_piecewise(abs_f, cuts, finite(c->a, c->b), kTightQuadrature).value;
    impl->integral = integrate_piecewise(def.eval, cuts, finite(c->a, c->b), kTightQuadrature).value;
    for (int i = 0; i <= 4000; ++i) {
      if (def.eval(c->a + (c->b - c->a) * i / 4000.0) < 0.0) {
        impl->nonnegative = false;
        break;
      }
    }
  } else {
    const auto & full = std::get<FullLineSupport>(def.support);
    if (!(full.tail_bound_constant > 0.0)) {
      throw std::invalid_argument("kernel " + def.name + ": tail bound constant must be positive");
    }
    // |chi(x)| <= C / x^2 on a sample grid over |x| >= 1
    for (int i = 0; i <= 6000; ++i) {
      const double x = (i < 3000) ? 1.0 + 0.37 * i : std::pow(10.0, 3.0 + 3.0 * (i - 3000) / 3000.0);
      for (double s : {x, -x}) {
        const double bound = full.tail_bound_constant / (s * s);
        if (std::abs(def.eval(s)) > bound * (1.0 + 1e-12)) {
          throw std::invalid_argument("kernel " + def.name + " violates its declared tail bound");
        }
      }
    }
    if (!def.upper_tail_mass) {
      const double c = full.tail_bound_constant;
      def.analytic_tail_start = std::max(def.analytic_tail_start, 1e4);
      def.upper_tail_mass = [c](double r) { return c / r; };
    }
    const double start = def.analytic_tail_start;
    const double half = integrate_abs(def, 0.0, start, 1.0, kTightQuadrature) + def.upper_tail_mass(start);
    impl->l1_norm = 2.0 * half;
    for (int i = 0; i <= 4000; ++i) {
      if (def.eval(-50.0 + 0.025 * i) < 0.0) {
        impl->nonnegative = false;
        break;
      }
    }
    impl->integral = impl->nonnegative ? impl->l1_norm : std::numeric_limits<double>::quiet_NaN();
  }
  if (!(impl->l1_norm > 0.0) || !std::isfinite(impl->l1_norm)) {
    throw std::invalid_argument("kernel " + def.name + " has no finite positive L1 norm");
  }
  impl_ = std::move(impl);
}

std::pair<double, double> Kernel::support_interval() const
{
  if (const auto * c = std::get_if<CompactSupport>(&impl_->def.support)) {
    return {c->a, c->b};
  }
  const double inf = std::numeric_limits<double>::infinity();
  return {-inf, inf};
}

double Kernel::mass_above(double a) const
{
  const auto & def = impl_->def;
  if (const auto * c = std::get_if<CompactSupport>(&def.support)) {
    return integrate_abs(def, std::max(a, c->a), c->b, 1.0, kTightQuadrature);
  }
  const double start = def.analytic_tail_start;
  if (a >= start) {
    return def.upper_tail_mass(a);
  }
  if (a < 0.0) {
    return impl_->l1_norm - mass_above(-a);
  }
  return integrate_abs(def, a, start, 1.0, kTightQuadrature) + def.upper_tail_mass(start);
}

double Kernel::lattice_tail_bound(double radius, double min_gap) const
{
  const auto & def = impl_->def;
  if (const auto * c = std::get_if<CompactSupport>(&def.support)) {
    return radius >= std::max(std::abs(c->a), std::abs(c->b)) ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (radius < 1.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double cst = std::get<FullLineSupport>(def.support).tail_bound_constant;
  // per side: nodes at distance >= radius + j * min_gap
  return 2.0 * (cst / (radius * radius) + cst / (min_gap * radius));
}

std::optional<double> Kernel::lattice_tail(double u, long k_lo, long k_hi) const
{
  if (!impl_->def.lattice_tail) {
    return std::nullopt;
  }
  return impl_->def.lattice_tail(u, k_lo, k_hi);
}

double Kernel::l1_on(double lo, double hi, const QuadratureConfig & config) const
{
  return integrate_abs(impl_->def, lo, hi, 1.0, config);
}

double Kernel::scaled_l1_norm(double w, const QuadratureConfig & config) const
{
  if (!(w > 0.0)) {
    throw std::domain_error("scaled_l1_norm: w must be positive");
  }
  const auto & def = impl_->def;
  if (const auto * c = std::get_if<CompactSupport>(&def.support)) {
    return integrate_abs(def, c->a / w, c->b / w, w, config);
  }
  const double start = def.analytic_tail_start;
  return integrate_abs(def, -start / w, start / w, w, config) + 2.0 * def.upper_tail_mass(start) / w;
}

Kernel kernel_by_name(std::string_view name)
{
  if (name == "fejer") {
    return make_fejer();
  }
  if (name == "combined-m") {
    return make_combined_m();
  }
  if (name.starts_with("bspline:")) {
    return make_bspline(parse_order(name.substr(8)));
  }
  if (name == "sinc") {
    throw std::invalid_argument("sinc is not in L1 and cannot be used as an approximation kernel");
  }
  if (name == "mellin") {
    throw std::invalid_argument("mellin is a half-line kernel; it is selected by operators t6/t7");
  }
  throw std::invalid_argument("unknown kernel: " + std::string(name));
}

std::vector<std::string> kernel_catalog()
{
  std::vector<std::string> names{"fejer", "combined-m"};
  for (int n = 1; n <= 6; ++n) {
    names.push_back("bspline:" + std::to_string(n));
  }
  return names;
}

std::function<double(double)> kernel_function_by_name(std::string_view name)
{
  if (name == "sinc") {
    return [](double x) { return sinc(x); };
  }
  return [k = kernel_by_name(name)](double x) { return k(x); };
}

MellinKernel::MellinKernel(double w) : w_(w)
{
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw std::domain_error("MellinKernel: w must be positive");
  }
  const double cut = lower_cut(1e-18);
  auto g = [this](double u) { return (*this)(u); };
  // measure du/u; upper end at u = 1
  normalization_ = integrate(g, log_half_line(std::log(cut), 0.0), kTightQuadrature).value + 1e-18 / w;
  if (std::abs(normalization_ - 1.0) > 1e-8) {
    throw std::logic_error("MellinKernel normalization check failed");
  }
}

}  // namespace unisamp
