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
#include "unisamp/operators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace unisamp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

OperatorId parse_operator_id(std::string_view text)
{
  std::string t(text);
  for (auto & c : t) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  static const std::pair<const char *, OperatorId> table[] = {{"t1", OperatorId::t1}, {"t2", OperatorId::t2},
    {"t3", OperatorId::t3}, {"t4", OperatorId::t4}, {"t5", OperatorId::t5}, {"t6", OperatorId::t6},
    {"t7", OperatorId::t7}};
  for (const auto & [name, id] : table) {
    if (t == name) {
      return id;
    }
  }
  throw std::invalid_argument("unknown operator '" + std::string(text) + "' (expected t1..t7)");
}

std::string to_string(OperatorId id) { return "t" + std::to_string(static_cast<int>(id) + 1); }

bool is_discrete(OperatorId id) { return id == OperatorId::t1 || id == OperatorId::t2 || id == OperatorId::t3; }

bool is_mellin(OperatorId id) { return id == OperatorId::t6 || id == OperatorId::t7; }

std::string to_string(FunctionalKind kind)
{
  switch (kind) {
    case FunctionalKind::point:
      return "point";
    case FunctionalKind::average:
      return "average";
    case FunctionalKind::durrmeyer:
      return "durrmeyer";
    case FunctionalKind::mellin_point:
      return "mellin_point";
    case FunctionalKind::mellin_average:
      return "mellin_average";
  }
  return "?";
}

SampleFunctional SampleFunctional::point() { return {FunctionalKind::point, std::nullopt, 1.0}; }
SampleFunctional SampleFunctional::average() { return {FunctionalKind::average, std::nullopt, 1.0}; }
SampleFunctional SampleFunctional::mellin_point() { return {FunctionalKind::mellin_point, std::nullopt, 1.0}; }
SampleFunctional SampleFunctional::mellin_average() { return {FunctionalKind::mellin_average, std::nullopt, 1.0}; }

SampleFunctional SampleFunctional::durrmeyer(Kernel psi)
{
  double mass = psi.integral();
  if (std::isnan(mass)) {
    // signed full-line kernel: integrate it directly
    const double r = 1e4;
    mass = integrate_piecewise([&psi](double x) { return psi(x); }, std::vector<double>{}, finite(-r, r)).value;
  }
  if (std::abs(mass - 1.0) > 1e-6) {
    throw std::invalid_argument("durrmeyer kernel " + psi.name() + " must have unit integral");
  }
  const double upsilon = psi.l1_norm();
  return {FunctionalKind::durrmeyer, std::move(psi), upsilon};
}

OperatorSpec make_operator(OperatorId id, std::optional<Kernel> kernel, std::optional<SamplingGrid> grid,
  std::optional<Kernel> psi, TruncationPolicy truncation)
{
  if (!(truncation.relative_tolerance > 0.0) || truncation.max_terms < 1 ||
      !(truncation.max_integral_radius > 0.0) || !(truncation.mellin_cutoff > 0.0 && truncation.mellin_cutoff < 1.0) ||
      !(truncation.abs_tol > 0.0)) {
    throw std::invalid_argument("bad truncation policy");
  }
  if (psi && id != OperatorId::t3) {
    throw std::invalid_argument("psi is only used by t3");
  }
  if (is_mellin(id)) {
    if (kernel) {
      throw std::invalid_argument(to_string(id) + " uses the Mellin kernel; no chi kernel is accepted");
    }
    if (grid) {
      throw std::invalid_argument(to_string(id) + " takes no sampling grid");
    }
  } else if (!kernel) {
    throw std::invalid_argument(to_string(id) + " needs a kernel");
  }
  if (is_discrete(id)) {
    if (!grid) {
      grid = SamplingGrid::regular();
    }
  } else if (grid) {
    throw std::invalid_argument(to_string(id) + " takes no sampling grid");
  }
  if (grid && grid->kind() == SamplingGrid::Kind::jittered && id != OperatorId::t1) {
    throw std::invalid_argument("jittered grids are defined for t1 only");
  }

  std::optional<SampleFunctional> functional;
  switch (id) {
    case OperatorId::t1:
    case OperatorId::t4:
      functional = SampleFunctional::point();
      break;
    case OperatorId::t2:
    case OperatorId::t5:
      functional = SampleFunctional::average();
      break;
    case OperatorId::t3:
      if (!psi) {
        throw std::invalid_argument("t3 needs a psi kernel");
      }
      functional = SampleFunctional::durrmeyer(*psi);
      break;
    case OperatorId::t6:
      functional = SampleFunctional::mellin_point();
      break;
    case OperatorId::t7:
      functional = SampleFunctional::mellin_average();
      break;
  }
  return OperatorSpec{id, std::move(kernel), std::move(grid), *functional, truncation};
}

OperatorSpec make_operator(std::string_view id_text, std::string_view kernel, std::string_view grid,
  std::string_view psi)
{
  const OperatorId id = parse_operator_id(id_text);
  std::optional<Kernel> chi;
  if (!is_mellin(id)) {
    if (kernel.empty()) {
      throw std::invalid_argument(to_string(id) + " needs --kernel");
    }
    chi = kernel_by_name(kernel);
  } else if (!kernel.empty() && kernel != "mellin") {
    throw std::invalid_argument(to_string(id) + " uses the Mellin kernel, got '" + std::string(kernel) + "'");
  }
  std::optional<SamplingGrid> g;
  if (is_discrete(id)) {
    g = SamplingGrid::by_name(grid.empty() ? "regular" : grid);
  } else if (!grid.empty() && grid != "regular") {
    throw std::invalid_argument(to_string(id) + " takes no sampling grid");
  }
  std::optional<Kernel> p;
  if (id == OperatorId::t3) {
    p = kernel_by_name(psi.empty() ? "fejer" : psi);
  } else if (!psi.empty()) {
    throw std::invalid_argument("--psi is only used by t3");
  }
  return make_operator(id, std::move(chi), std::move(g), std::move(p));
}

std::string describe(const OperatorSpec & spec)
{
  std::string s = to_string(spec.id);
  if (spec.kernel) {
    s += "/" + spec.kernel->name();
  } else {
    s += "/mellin";
  }
  if (spec.functional.psi()) {
    s += "/psi=" + spec.functional.psi()->name();
  }
  if (spec.grid) {
    s += "/" + spec.grid->name();
  }
  return s;
}

namespace {

QuadratureConfig quad_config(const OperatorSpec & spec, const PiecewiseSignal & f)
{
  QuadratureConfig c;
  c.abs_tol = spec.truncation.abs_tol * std::max(1.0, f.sup_norm());
  return c;
}

double env(const PiecewiseSignal & f, double r) { return f.envelope(r); }

double checked(double v, FunctionalKind kind, double where, double w)
{
  if (!std::isfinite(v)) {
    throw SampleError("non-finite sample (" + to_string(kind) + " at " + std::to_string(where) +
                        ", w = " + std::to_string(w) + ")",
      kind, where, w);
  }
  return v;
}

/// Signal breakpoints mapped by s = scale * (offset - b) + shift, plus extra cuts.
std::vector<double> mapped_cuts(const PiecewiseSignal & f, double scale, double offset,
  std::initializer_list<double> shifts)
{
  std::vector<double> cuts;
  for (double b : f.breakpoints()) {
    for (double sh : shifts) {
      cuts.push_back(scale * (offset - b) + sh);
    }
  }
  return cuts;
}

void add_uniform(std::vector<double> & cuts, double lo, double hi, double width)
{
  const auto n = static_cast<long>(std::ceil((hi - lo) / width));
  for (long i = 1; i < n; ++i) {
    cuts.push_back(lo + static_cast<double>(i) * width);
  }
}

Evaluation durrmeyer_sample(const OperatorSpec & spec, double w, long k, const PiecewiseSignal & f)
{
  const Kernel & psi = *spec.functional.psi();
  const double t = spec.grid->node(k);
  const double j = spec.grid->jitter(k, w);
  const double F = f.sup_norm();
  const QuadratureConfig cfg = quad_config(spec, f);
  Evaluation out;
  if (F == 0.0) {
    return out;
  }
  // L_k f = int psi(s) f((s + t_k) / w + j) ds
  double lo = 0.0;
  double hi = 0.0;
  if (psi.is_compact()) {
    std::tie(lo, hi) = psi.support_interval();
  } else if (const auto sup = f.support()) {
    // f vanishes off its support, so this window is exact
    lo = w * (sup->first - j) - t;
    hi = w * (sup->second - j) - t;
  } else {
    const double tol = spec.truncation.relative_tolerance * F;
    const double cap = spec.truncation.max_integral_radius;
    auto bound = [&](double S) {
      return (psi.mass_above(S) + psi.mass_below(-S)) * env(f, (S - std::abs(t)) / w - std::abs(j));
    };
    double S = 16.0 * psi.feature_scale();
    while (bound(S) > tol && S < cap) {
      S = std::min(2.0 * S, cap);
    }
    out.truncation_bound = bound(S);
    out.certified = out.truncation_bound <= tol;
    lo = -S;
    hi = S;
  }
  if (!(hi > lo)) {
    return out;
  }
  std::vector<double> cuts(psi.knots().begin(), psi.knots().end());
  for (double b : f.breakpoints()) {
    cuts.push_back(w * (b - j) - t);
  }
  if (!psi.is_compact()) {
    add_uniform(cuts, lo, hi, psi.feature_scale());
  }
  std::sort(cuts.begin(), cuts.end());
  auto g = [&](double s) { return psi(s) * f((s + t) / w + j); };
  const QuadratureResult r = integrate_piecewise(g, cuts, finite(lo, hi), cfg);
  out.value = r.value;
  out.certified = out.certified && r.certified;
  return out;
}

Evaluation discrete_sample(const OperatorSpec & spec, double w, long k, const PiecewiseSignal & f)
{
  const SamplingGrid & grid = *spec.grid;
  const double j = grid.jitter(k, w);
  Evaluation out;
  switch (spec.functional.kind()) {
    case FunctionalKind::point:
      out.value = f(grid.node(k) / w + j);
      break;
    case FunctionalKind::average: {
      const double a = grid.node(k) / w + j;
      const double b = grid.node(k + 1) / w + j;
      const QuadratureResult r = integrate_piecewise(f, f.breakpoints(), finite(a, b), quad_config(spec, f));
      out.value = r.value * w / grid.gap(k);
      out.certified = r.certified;
      break;
    }
    case FunctionalKind::durrmeyer:
      out = durrmeyer_sample(spec, w, k, f);
      break;
    default:
      throw std::logic_error("functional kind does not belong to a discrete operator");
  }
  out.value = checked(out.value, spec.functional.kind(), static_cast<double>(k), w);
  return out;
}

/// (w/2) int_{t-1/w}^{t+1/w} f
Evaluation line_average(const OperatorSpec & spec, double w, double t, const PiecewiseSignal & f)
{
  const QuadratureResult r =
    integrate_piecewise(f, f.breakpoints(), finite(t - 1.0 / w, t + 1.0 / w), quad_config(spec, f));
  return {0.5 * w * r.value, r.certified, 0.0};
}

double mellin_half_width(double w) { return std::log1p(1.0 / w); }

/// (1/(2 l)) int over [t e^-l, t e^l] of f du/u, or the w/2 variant
Evaluation mellin_average(const OperatorSpec & spec, double w, double t, const PiecewiseSignal & f)
{
  const double l = mellin_half_width(w);
  const double v = std::log(t);
  const QuadratureResult r = integrate_piecewise(f, f.breakpoints(), log_half_line(v - l, v + l), quad_config(spec, f));
  const double prefactor = spec.truncation.t7_simple_prefactor ? 0.5 * w : 0.5 / l;
  return {prefactor * r.value, r.certified, 0.0};
}

Evaluation continuous_sample(const OperatorSpec & spec, double w, double t, const PiecewiseSignal & f)
{
  Evaluation out;
  switch (spec.functional.kind()) {
    case FunctionalKind::point:
    case FunctionalKind::mellin_point:
      out.value = f(t);
      break;
    case FunctionalKind::average:
      out = line_average(spec, w, t, f);
      break;
    case FunctionalKind::mellin_average:
      out = mellin_average(spec, w, t, f);
      break;
    default:
      throw std::logic_error("functional kind does not belong to a continuous operator");
  }
  out.value = checked(out.value, spec.functional.kind(), t, w);
  return out;
}

template<typename Sampler>
Evaluation discrete_apply(const OperatorSpec & spec, double w, const PiecewiseSignal & f, double x, Sampler && sample)
{
  const Kernel & chi = *spec.kernel;
  const SamplingGrid & grid = *spec.grid;
  const double u = w * x;
  Evaluation out;
  double lo = 0.0;
  double hi = 0.0;
  if (chi.is_compact()) {
    const auto [a, b] = chi.support_interval();
    lo = u - b;
    hi = u - a;
  } else {
    const double F = f.sup_norm();
    const double tol = spec.truncation.relative_tolerance * F;
    const double jb = grid.kind() == SamplingGrid::Kind::jittered ? grid.max_abs_jitter(w, -1000, 1000) : 0.0;
    const double slack = spec.functional.kind() == FunctionalKind::average ? grid.Delta() : 0.0;
    auto sample_bound = [&](double R) {
      if (spec.functional.kind() == FunctionalKind::durrmeyer) {
        return spec.functional.upsilon_bound() * F;
      }
      return env(f, (R - slack) / w - std::abs(x) - jb);
    };
    auto bound = [&](double R) { return chi.lattice_tail_bound(R, grid.delta()) * sample_bound(R); };
    const double cap = 0.5 * static_cast<double>(spec.truncation.max_terms) * grid.delta();
    double R = 8.0;
    while (F > 0.0 && bound(R) > tol && R < cap) {
      R = std::min(2.0 * R, cap);
    }
    out.truncation_bound = F > 0.0 ? bound(R) : 0.0;
    out.certified = out.truncation_bound <= tol;
    lo = u - R;
    hi = u + R;
  }
  const auto [k_lo, k_hi] = grid.indices_in(lo, hi);
  double sum = 0.0;
  double c = 0.0;
  for (long k = k_lo; k <= k_hi; ++k) {
    const double kv = chi(u - grid.node(k));
    if (kv == 0.0) {
      continue;
    }
    const Evaluation s = sample(k);
    out.certified = out.certified && s.certified;
    // compensated sum; full-line windows reach 1e6 terms
    const double y = kv * s.value - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  out.value = sum;
  return out;
}

Evaluation convolution_apply(const OperatorSpec & spec, double w, const PiecewiseSignal & f, double x)
{
  const Kernel & chi = *spec.kernel;
  const bool average = spec.functional.kind() == FunctionalKind::average;
  const double F = f.sup_norm();
  const QuadratureConfig cfg = quad_config(spec, f);
  Evaluation out;
  double lo = 0.0;
  double hi = 0.0;
  if (chi.is_compact()) {
    std::tie(lo, hi) = chi.support_interval();
  } else {
    const double tol = spec.truncation.relative_tolerance * F;
    const double cap = spec.truncation.max_integral_radius;
    const double reach = average ? 1.0 / w : 0.0;
    auto bound = [&](double S) { return (chi.mass_above(S) + chi.mass_below(-S)) * env(f, S / w - std::abs(x) - reach); };
    double S = 16.0 * chi.feature_scale();
    while (F > 0.0 && bound(S) > tol && S < cap) {
      S = std::min(2.0 * S, cap);
    }
    out.truncation_bound = F > 0.0 ? bound(S) : 0.0;
    out.certified = out.truncation_bound <= tol;
    lo = -S;
    hi = S;
  }
  // T f(x) = int chi(s) L_{x - s/w} f ds with the mass-preserving scaling w chi(w .)
  std::vector<double> cuts(chi.knots().begin(), chi.knots().end());
  const std::vector<double> sig = average ? mapped_cuts(f, w, x, {-1.0, 1.0}) : mapped_cuts(f, w, x, {0.0});
  cuts.insert(cuts.end(), sig.begin(), sig.end());
  if (!chi.is_compact()) {
    add_uniform(cuts, lo, hi, chi.feature_scale());
  }
  std::sort(cuts.begin(), cuts.end());
  bool inner_ok = true;
  auto g = [&](double s) {
    const double kv = chi(s);
    if (kv == 0.0) {
      return 0.0;
    }
    const double t = x - s / w;
    if (!average) {
      return kv * f(t);
    }
    const Evaluation a = line_average(spec, w, t, f);
    inner_ok = inner_ok && a.certified;
    return kv * a.value;
  };
  const QuadratureResult r = integrate_piecewise(g, cuts, finite(lo, hi), cfg);
  out.value = r.value;
  out.certified = out.certified && r.certified && inner_ok;
  return out;
}

Evaluation mellin_apply(const OperatorSpec & spec, double w, const PiecewiseSignal & f, double x)
{
  if (!(x > 0.0)) {
    throw std::domain_error(to_string(spec.id) + " is defined for x > 0 only");
  }
  const MellinKernel kernel(w);
  const bool average = spec.functional.kind() == FunctionalKind::mellin_average;
  const QuadratureConfig cfg = quad_config(spec, f);
  // t = x e^v, v in (0, V): w e^{-w v} >= cutoff
  const double V = std::log(w / spec.truncation.mellin_cutoff) / w;
  const double v0 = std::log(x);
  std::vector<double> cuts;
  const double l = mellin_half_width(w);
  for (double b : f.breakpoints()) {
    if (b > 0.0) {
      if (average) {
        cuts.push_back(b * std::exp(-l));
        cuts.push_back(b * std::exp(l));
      } else {
        cuts.push_back(b);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  bool inner_ok = true;
  auto g = [&](double t) {
    const double kv = kernel(x / t);
    if (kv == 0.0) {
      return 0.0;
    }
    if (!average) {
      return kv * f(t);
    }
    const Evaluation a = mellin_average(spec, w, t, f);
    inner_ok = inner_ok && a.certified;
    return kv * a.value;
  };
  const QuadratureResult r = integrate_piecewise(g, cuts, log_half_line(v0, v0 + V), cfg);
  Evaluation out;
  out.value = r.value;
  // the discarded kernel mass beyond V is cutoff / w
  out.truncation_bound = f.sup_norm() * spec.truncation.mellin_cutoff / w;
  out.certified = r.certified && inner_ok;
  return out;
}

void check_w(double w)
{
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw std::domain_error("w must be positive and finite");
  }
}

}  // namespace

Evaluation sample_functional_eval(const OperatorSpec & spec, double w, double k_or_t, const PiecewiseSignal & f)
{
  check_w(w);
  try {
    if (is_discrete(spec.id)) {
      return discrete_sample(spec, w, std::lround(k_or_t), f);
    }
    if (is_mellin(spec.id) && !(k_or_t > 0.0)) {
      throw std::domain_error("Mellin sample functionals need t > 0");
    }
    return continuous_sample(spec, w, k_or_t, f);
  } catch (const EvaluationError & e) {
    throw SampleError(std::string(e.what()) + " at abscissa " + std::to_string(e.abscissa()),
      spec.functional.kind(), k_or_t, w);
  }
}

Evaluation apply_operator(const OperatorSpec & spec, double w, const PiecewiseSignal & f, double x)
{
  check_w(w);
  try {
    if (is_discrete(spec.id)) {
      return discrete_apply(spec, w, f, x, [&](long k) { return discrete_sample(spec, w, k, f); });
    }
    if (is_mellin(spec.id)) {
      return mellin_apply(spec, w, f, x);
    }
    return convolution_apply(spec, w, f, x);
  } catch (const EvaluationError & e) {
    throw SampleError(std::string(e.what()) + " at abscissa " + std::to_string(e.abscissa()),
      spec.functional.kind(), x, w);
  }
}

std::vector<Evaluation> apply_on_grid(const OperatorSpec & spec, double w, const PiecewiseSignal & f,
  std::span<const double> xs)
{
  check_w(w);
  std::vector<Evaluation> out;
  out.reserve(xs.size());
  if (!is_discrete(spec.id)) {
    for (double x : xs) {
      out.push_back(apply_operator(spec, w, f, x));
    }
    return out;
  }
  std::unordered_map<long, Evaluation> cache;
  auto sample = [&](long k) {
    const auto it = cache.find(k);
    if (it != cache.end()) {
      return it->second;
    }
    const Evaluation s = discrete_sample(spec, w, k, f);
    cache.emplace(k, s);
    return s;
  };
  for (double x : xs) {
    try {
      out.push_back(discrete_apply(spec, w, f, x, sample));
    } catch (const EvaluationError & e) {
      throw SampleError(std::string(e.what()) + " at abscissa " + std::to_string(e.abscissa()),
        spec.functional.kind(), x, w);
    }
  }
  return out;
}

Eigen::ArrayXd apply_on_grid(const OperatorSpec & spec, double w, const PiecewiseSignal & f,
  const Eigen::ArrayXd & xs, bool * certified)
{
  const std::vector<Evaluation> ev = apply_on_grid(spec, w, f, std::span<const double>(xs.data(), xs.size()));
  Eigen::ArrayXd out(xs.size());
  bool ok = true;
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    out[i] = ev[static_cast<std::size_t>(i)].value;
    ok = ok && ev[static_cast<std::size_t>(i)].certified;
  }
  if (certified != nullptr) {
    *certified = ok;
  }
  return out;
}

Evaluation jittered_operator(const OperatorSpec & spec, double w, const PiecewiseSignal & f, double x)
{
  if (spec.id != OperatorId::t1 || !spec.grid || spec.grid->kind() != SamplingGrid::Kind::jittered) {
    throw std::invalid_argument("jittered_operator needs t1 on a jittered grid");
  }
  return apply_operator(spec, w, f, x);
}

}  // namespace unisamp
