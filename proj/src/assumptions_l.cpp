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
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "unisamp/operators.hpp"

namespace unisamp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

AssumptionReport continuous_kernel_report(const OperatorSpec & spec, std::span<const double> w_list,
  const ChiCheckOptions & options)
{
  AssumptionReport r;
  r.grid = "continuous";
  r.chi5_compact_K = {options.k_lo, options.k_hi};
  if (is_mellin(spec.id)) {
    r.kernel = "mellin";
    r.chi3_moment_M = 1.0;
    r.gamma_l1_bound = 1.0;
    double smallest_w = kInf;
    for (double w : w_list) {
      const MellinKernel m(w);
      r.chi2_partition_defect = std::max(r.chi2_partition_defect, std::abs(m.normalization() - 1.0));
      // mass of w e^{-w v} beyond |v| > B
      r.chi4_tail_profile.push_back({w, std::exp(-w * options.neighborhood)});
      // the Haar-measure norm of M_w is 1 for every w
      r.scaled_l1_profile.push_back({w, m.normalization()});
      smallest_w = std::min(smallest_w, w);
    }
    (void)smallest_w;
    // K and C in the log variable: C = [-ln R, ln R], tail (e^{-k_lo} / R)^w at the largest w
    const double w_big = *std::max_element(w_list.begin(), w_list.end());
    for (double R = std::exp(std::max(std::abs(options.k_lo), std::abs(options.k_hi)));
         R <= options.max_radius * (1.0 + 1e-12); R *= 1.125) {
      const double tail = options.upsilon * std::pow(std::exp(-options.k_lo) / R, w_big);
      if (tail < options.epsilon) {
        r.chi5_verified = true;
        r.chi5_radius = R;
        break;
      }
    }
  } else {
    const Kernel & chi = *spec.kernel;
    r.kernel = chi.name();
    double mass = chi.integral();
    if (std::isnan(mass)) {
      mass = chi.l1_norm();
    }
    r.chi2_partition_defect = std::abs(mass - 1.0);
    r.chi3_moment_M = chi.l1_norm();
    r.gamma_l1_bound = chi.l1_norm();
    for (double w : w_list) {
      const double B = w * options.neighborhood;
      r.chi4_tail_profile.push_back({w, chi.mass_above(B) + chi.mass_below(-B)});
      r.scaled_l1_profile.push_back({w, w * chi.scaled_l1_norm(w)});
    }
    const double w_big = *std::max_element(w_list.begin(), w_list.end());
    const double r0 = std::max(std::abs(options.k_lo), std::abs(options.k_hi));
    for (double R = r0; R <= options.max_radius * (1.0 + 1e-12); R *= 1.125) {
      double worst = 0.0;
      for (double t : {options.k_lo, options.k_hi}) {
        worst = std::max(worst, chi.mass_above(w_big * (R - t)) + chi.mass_below(-w_big * (R + t)));
      }
      if (options.upsilon * worst < options.epsilon) {
        r.chi5_verified = true;
        r.chi5_radius = R;
        break;
      }
    }
  }
  std::vector<TailSample> sorted = r.chi4_tail_profile;
  std::sort(sorted.begin(), sorted.end(), [](const TailSample & a, const TailSample & b) { return a.w < b.w; });
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i + 1].tail_mass > sorted[i].tail_mass * (1.0 + 1e-9) + 1e-15) {
      r.chi4_monotone = false;
    }
  }
  return r;
}

/// Compactly supported part of f used where the checks need compact support.
struct Core
{
  PiecewiseSignal signal;
  std::pair<double, double> support;
  bool is_restriction;
};

Core compact_core(const PiecewiseSignal & f)
{
  if (const auto s = f.support()) {
    return {f, *s, false};
  }
  const auto bps = f.breakpoints();
  double lo = -1.0;
  double hi = 1.0;
  if (!bps.empty()) {
    lo = bps.front();
    hi = bps.back();
  }
  if (f.domain() == SignalDomain::positive_half_line) {
    lo = bps.empty() ? 0.5 : bps.front() / 8.0;
    if (!(hi > lo)) {
      hi = 2.0 * lo;
    }
  } else if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  }
  PiecewiseSignal core = f.restricted(lo, hi);
  return {core, {lo, hi}, true};
}

double distance_to_jump(const PiecewiseSignal & f, double z)
{
  double d = kInf;
  for (double b : f.discontinuities()) {
    d = std::min(d, std::abs(z - b));
  }
  return d;
}

/// Largest finite-difference slope of f over continuity intervals inside [lo, hi].
double lipschitz_estimate(const PiecewiseSignal & f, double lo, double hi)
{
  double L = 0.0;
  for (const auto & [a0, b0] : f.continuity_intervals()) {
    const double a = std::max(a0, lo);
    const double b = std::min(b0, hi);
    if (!(b > a)) {
      continue;
    }
    const int n = 2000;
    const double h = (b - a) / n;
    double prev = f(a + 0.5 * h);
    for (int i = 1; i < n; ++i) {
      const double y = f(a + (i + 0.5) * h);
      L = std::max(L, std::abs(y - prev) / h);
      prev = y;
    }
  }
  return L;
}

/// Half-width in z of the data a functional at h looks at.
double functional_reach(const OperatorSpec & spec, double w, double h)
{
  switch (spec.functional.kind()) {
    case FunctionalKind::point:
    case FunctionalKind::mellin_point:
      return 0.0;
    case FunctionalKind::average:
      return spec.grid ? spec.grid->Delta() / w : 1.0 / w;
    case FunctionalKind::durrmeyer:
      return 0.5;
    case FunctionalKind::mellin_average:
      return h / w;
  }
  return 0.0;
}

struct Probe
{
  double h;        ///< the point h_w(t) in G
  double where;    ///< k for discrete operators, t otherwise
};

std::vector<Probe> probes_for(const OperatorSpec & spec, double w, double lo, double hi, std::size_t count,
  std::uint64_t seed)
{
  std::vector<Probe> out;
  if (is_discrete(spec.id)) {
    const auto [k_lo, k_hi] = spec.grid->indices_in(w * lo, w * hi);
    const long n = k_hi - k_lo + 1;
    const long stride = std::max<long>(1, n / static_cast<long>(std::max<std::size_t>(count, 1)));
    for (long k = k_lo; k <= k_hi; k += stride) {
      out.push_back({spec.grid->node(k) / w, static_cast<double>(k)});
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  if (is_mellin(spec.id)) {
    std::uniform_real_distribution<double> dist(std::log(lo), std::log(hi));
    for (std::size_t i = 0; i < count; ++i) {
      const double t = std::exp(dist(rng));
      out.push_back({t, t});
    }
  } else {
    std::uniform_real_distribution<double> dist(lo, hi);
    for (std::size_t i = 0; i < count; ++i) {
      const double t = dist(rng);
      out.push_back({t, t});
    }
  }
  return out;
}

/// (L3) for the Durrmeyer family on a compact core: tails of phi(|L_k f|) and the window search.
void durrmeyer_tails(const OperatorSpec & spec, double w, const Core & core, const PhiFunction & phi,
  double epsilon, double lambda, LCheckRow & row, double & lambda_sum)
{
  const Kernel & psi = *spec.functional.psi();
  const SamplingGrid & grid = *spec.grid;
  const auto [a, b] = core.support;
  const double rho = std::max(std::abs(a), std::abs(b));
  const double F = core.signal.sup_norm();
  const double span_t = w * (b - a);

  // remainder bound beyond |t_k| > T, using |psi(s)| <= C / s^2 and phi(y) <= y phi(b0) / b0 for y <= b0
  auto remainder = [&](double T, double scale) {
    if (psi.is_compact()) {
      const auto [pa, pb] = psi.support_interval();
      return T >= w * rho + std::max(std::abs(pa), std::abs(pb)) ? 0.0 : kInf;
    }
    const double C = std::get<FullLineSupport>(psi.support()).tail_bound_constant;
    const double d = T - w * rho;
    if (!(d > 1.0)) {
      return kInf;
    }
    const double b0 = F * C * span_t / (d * d);
    if (b0 == 0.0) {
      return 0.0;
    }
    const double per_unit = phi(scale * b0) / b0;
    const double delta = grid.delta();
    return per_unit * F * C * span_t * 2.0 * (1.0 / (d * d) + 1.0 / (delta * d));
  };

  const double T_cap = w * rho + 4e5 * grid.delta();
  double T = w * rho + 16.0;
  while (remainder(T, 1.0) >= 0.5 * epsilon && T < T_cap) {
    T = std::min(2.0 * T, T_cap);
  }
  const double rem = remainder(T, 1.0);
  lambda_sum = remainder(T, lambda);

  struct Term
  {
    double dist;   ///< |t_k| / w
    double value;  ///< phi(|L_k f|)
    double z;
    double raw;
  };
  std::vector<Term> terms;
  const auto [k_lo, k_hi] = grid.indices_in(-T, T);
  for (long k = k_lo; k <= k_hi; ++k) {
    const Evaluation s = sample_functional_eval(spec, w, static_cast<double>(k), core.signal);
    row.certified = row.certified && s.certified;
    const double z = grid.node(k) / w;
    terms.push_back({std::abs(z), phi(std::abs(s.value)), z, s.value});
    lambda_sum += phi(lambda * std::abs(s.value));
  }

  // outside K (no enlargement)
  double outside = rem;
  for (const auto & t : terms) {
    if (t.z < a || t.z > b) {
      outside += t.value;
      if (std::abs(t.raw) > row.nonlocal_value) {
        row.nonlocal_value = std::abs(t.raw);
        row.nonlocal_at = t.z;
      }
    }
  }
  row.l3_tail_outside_k = outside;
  row.l3_exact_zero = outside == 0.0;

  // smallest symmetric window [-M, M] containing K with tail below epsilon
  std::sort(terms.begin(), terms.end(), [](const Term & l, const Term & r) { return l.dist > r.dist; });
  double tail = rem;
  row.l3_window_found = false;
  if (rem < epsilon) {
    double M = T / w;
    std::size_t i = 0;
    while (i < terms.size()) {
      const double d = terms[i].dist;
      if (d < rho) {
        break;
      }
      double next = tail;
      std::size_t j = i;
      while (j < terms.size() && terms[j].dist == d) {
        next += terms[j].value;
        ++j;
      }
      if (next >= epsilon) {
        break;
      }
      tail = next;
      M = d;
      i = j;
    }
    row.l3_window = std::max(M, rho);
    row.l3_tail_at_window = tail;
    row.l3_window_found = true;
  }
}

/// (L4) on the compact core, where sums and integrals over K are complete.
void check_l4(const OperatorSpec & spec, double w, const Core & core, std::pair<double, double> K,
  const PhiFunction & phi, double lam, const LReport & rep, double chi_l1, double t3_sum, LCheckRow & row)
{
  const PiecewiseSignal & f = core.signal;
  const auto [a, b] = core.support;
  const ModularValue rhs_mod = is_mellin(spec.id) ? modular(f, phi, lam * rep.l4_beta, log_half_line_u(a, b))
                                                  : modular(f, phi, lam * rep.l4_beta, finite(a, b));
  row.l4_rhs = rep.l4_c * rhs_mod.as_double();
  row.certified = row.certified && rhs_mod.certified;
  if (spec.id == OperatorId::t3) {
    // the Durrmeyer samples never vanish; the tail pass already summed them with a remainder bound
    row.l4_lhs = chi_l1 / w * t3_sum;
  } else if (is_discrete(spec.id)) {
    const auto [k_lo, k_hi] = spec.grid->indices_in(w * K.first, w * K.second);
    double sum = 0.0;
    for (long k = k_lo; k <= k_hi; ++k) {
      const Evaluation s = sample_functional_eval(spec, w, static_cast<double>(k), f);
      row.certified = row.certified && s.certified;
      sum += phi(lam * std::abs(s.value));
    }
    // ||chi_w||_1 = ||chi||_1 / w under chi_w = chi(w .)
    row.l4_lhs = chi_l1 / w * sum;
  } else {
    auto g = [&](double t) { return phi(lam * std::abs(sample_functional_eval(spec, w, t, f).value)); };
    std::vector<double> cuts(f.breakpoints().begin(), f.breakpoints().end());
    if (spec.functional.kind() == FunctionalKind::average) {
      for (double bp : f.breakpoints()) {
        cuts.push_back(bp - 1.0 / w);
        cuts.push_back(bp + 1.0 / w);
      }
    } else if (spec.functional.kind() == FunctionalKind::mellin_average) {
      const double l = std::log1p(1.0 / w);
      for (double bp : f.breakpoints()) {
        cuts.push_back(bp * std::exp(-l));
        cuts.push_back(bp * std::exp(l));
      }
    }
    std::sort(cuts.begin(), cuts.end());
    const QuadratureResult q = is_mellin(spec.id) ? integrate_piecewise(g, cuts, log_half_line_u(K.first, K.second))
                                                  : integrate_piecewise(g, cuts, finite(K.first, K.second));
    row.certified = row.certified && q.certified;
    // mass-preserving scaling for t4/t5; the Mellin kernel has unit Haar norm
    row.l4_lhs = chi_l1 * q.value;
  }
  row.l4_holds = row.l4_lhs <= row.l4_rhs * (1.0 + 1e-6) + 1e-12;
}

}  // namespace

AssumptionReport check_kernel_assumptions(const OperatorSpec & spec, std::span<const double> w_list,
  std::size_t probe_count, const ChiCheckOptions & options)
{
  if (w_list.empty()) {
    throw std::invalid_argument("kernel check needs a nonempty w list");
  }
  ChiCheckOptions opts = options;
  opts.upsilon = std::max(opts.upsilon, spec.functional.upsilon_bound());
  if (is_discrete(spec.id)) {
    return check_chi_assumptions(*spec.kernel, *spec.grid, w_list, probe_count, opts);
  }
  AssumptionReport r = continuous_kernel_report(spec, w_list, opts);
  r.probe_count = probe_count;
  return r;
}

double moment_bound(const OperatorSpec & spec, const AssumptionReport & report)
{
  if (is_discrete(spec.id)) {
    return report.chi3_moment_M;
  }
  if (is_mellin(spec.id)) {
    return 1.0;
  }
  return spec.kernel->l1_norm();
}

LReport check_L_assumptions(const OperatorSpec & spec, const PiecewiseSignal & f, const PhiFunction & phi,
  std::span<const double> w_list, double epsilon, const LCheckOptions & options)
{
  LReport rep;
  rep.op = describe(spec);
  rep.signal = f.name();
  rep.phi = phi.spec();
  rep.epsilon = epsilon;
  rep.upsilon_bound = spec.functional.upsilon_bound();
  rep.l4_lambda = options.lambda;

  const Core core = compact_core(f);
  rep.used_compact_core = core.is_restriction;
  if (core.is_restriction) {
    rep.notes.push_back("signal has no compact support; tail checks use its restriction to [" +
                        std::to_string(core.support.first) + ", " + std::to_string(core.support.second) + ")");
  }
  const auto [a, b] = core.support;
  const double F = f.sup_norm();

  // K per operator
  std::pair<double, double> K = core.support;
  switch (spec.id) {
    case OperatorId::t2:
      K = {a - spec.grid->Delta(), b + spec.grid->Delta()};
      break;
    case OperatorId::t5:
      K = {a - 2.0, b + 2.0};
      break;
    case OperatorId::t7:
      K = {a / 2.0, 2.0 * b};
      break;
    default:
      break;
  }
  rep.k_set = K;

  // (L4) constants
  const double chi_l1 = spec.kernel ? spec.kernel->l1_norm() : 1.0;
  switch (spec.id) {
    case OperatorId::t1:
    case OperatorId::t2:
      rep.l4_c = chi_l1 / spec.grid->delta();
      break;
    case OperatorId::t3:
      rep.l4_c = chi_l1;
      rep.l4_beta = spec.functional.psi()->l1_norm();
      break;
    case OperatorId::t4:
    case OperatorId::t5:
      rep.l4_c = chi_l1;
      break;
    case OperatorId::t6:
    case OperatorId::t7:
      rep.l4_c = 1.0;
      break;
  }

  // probe region around the interesting part of f
  double view_lo = a - 1.0;
  double view_hi = b + 1.0;
  if (is_mellin(spec.id)) {
    view_lo = a / 2.0;
    view_hi = 2.0 * b;
  }
  const double lip = lipschitz_estimate(f, view_lo, view_hi);
  const double gamma = lip > 0.0 ? std::min(1.0, epsilon / lip) : 1.0;

  for (double w : w_list) {
    LCheckRow row;
    row.w = w;
    double t3_sum = 0.0;
    row.l2_radius = gamma;
    try {
      // (L1), (L2)
      for (const Probe & p : probes_for(spec, w, view_lo, view_hi, options.probe_count, options.seed)) {
        const Evaluation s = sample_functional_eval(spec, w, p.where, f);
        row.certified = row.certified && s.certified;
        if (F > 0.0) {
          row.upsilon_measured = std::max(row.upsilon_measured, std::abs(s.value) / F);
        }
        const double reach = functional_reach(spec, w, p.h);
        for (double o : {-0.9, -0.45, 0.0, 0.45, 0.9}) {
          const double z = p.h + o * 0.5 * gamma;
          if (!f.in_domain(z) || distance_to_jump(f, z) <= gamma + reach ||
              distance_to_jump(f, p.h) <= gamma + reach) {
            continue;
          }
          row.l2_deviation = std::max(row.l2_deviation, std::abs(s.value - f(z)));
        }
      }

      // (L3) at alpha = 1
      if (spec.id == OperatorId::t3) {
        durrmeyer_tails(spec, w, core, phi, epsilon, options.lambda, row, t3_sum);
      } else if (is_discrete(spec.id)) {
        double tail = 0.0;
        const auto [l_lo, l_hi] = spec.grid->indices_in(w * (K.first - 10.0), w * K.first);
        const auto [r_lo, r_hi] = spec.grid->indices_in(w * K.second, w * (K.second + 10.0));
        for (const auto & [lo, hi] : {std::pair{l_lo, l_hi}, std::pair{r_lo, r_hi}}) {
          for (long k = lo; k <= hi; ++k) {
            const double z = spec.grid->node(k) / w;
            if (z >= K.first && z <= K.second) {
              continue;
            }
            const Evaluation s = sample_functional_eval(spec, w, static_cast<double>(k), core.signal);
            tail += phi(std::abs(s.value));
          }
        }
        row.l3_tail_outside_k = tail;
        row.l3_exact_zero = tail == 0.0;
      } else {
        auto g = [&](double t) { return phi(std::abs(sample_functional_eval(spec, w, t, core.signal).value)); };
        double tail = 0.0;
        if (is_mellin(spec.id)) {
          tail += integrate(g, log_half_line_u(K.first / 10.0, K.first)).value;
          tail += integrate(g, log_half_line_u(K.second, 10.0 * K.second)).value;
        } else {
          tail += integrate(g, finite(K.first - 10.0, K.first)).value;
          tail += integrate(g, finite(K.second, K.second + 10.0)).value;
        }
        row.l3_tail_outside_k = tail;
        row.l3_exact_zero = tail == 0.0;
      }
      if (!row.l3_exact_zero) {
        rep.modular_only = true;
      }

      if (options.check_l4) {
        check_l4(spec, w, core, K, phi, options.lambda, rep, chi_l1, t3_sum, row);
      }
    } catch (const std::exception & e) {
      row.certified = false;
      rep.notes.push_back("w = " + std::to_string(w) + ": " + e.what());
    }
    rep.l1_ok = rep.l1_ok && row.upsilon_measured <= rep.upsilon_bound * (1.0 + 1e-12) + 1e-12;
    rep.rows.push_back(row);
  }
  if (rep.modular_only) {
    rep.notes.push_back("modular-only convergence (norm convergence for compactly supported f not implied)");
  }
  return rep;
}


}  // namespace unisamp
