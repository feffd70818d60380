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
#include "unisamp/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace unisamp {

LatticeSums lattice_sums(const Kernel & kernel, const SamplingGrid & grid, double u, double radius)
{
  LatticeSums out;
  double lo = 0.0;
  double hi = 0.0;
  if (kernel.is_compact()) {
    const auto [a, b] = kernel.support_interval();
    // chi(u - t) != 0 needs u - t in [a, b]
    lo = u - b;
    hi = u - a;
  } else {
    lo = u - radius;
    hi = u + radius;
  }
  const auto [k_lo, k_hi] = grid.indices_in(lo, hi);
  out.k_lo = k_lo;
  out.k_hi = k_hi;
  for (long k = k_lo; k <= k_hi; ++k) {
    const double v = kernel(u - grid.node(k));
    out.sum += v;
    out.abs_sum += std::abs(v);
  }
  if (!kernel.is_compact()) {
    std::optional<double> exact;
    if (grid.is_integer_lattice() && kernel.nonnegative()) {
      exact = kernel.lattice_tail(u, k_lo, k_hi);
    }
    if (exact) {
      out.sum += *exact;
      out.abs_sum += *exact;
    } else {
      out.tail_bound = kernel.lattice_tail_bound(radius, grid.delta());
    }
  }
  return out;
}

namespace {

/// sup over t_k / w in K of (1/w) int_{|z| > R} |chi(w z - t_k)| dz
double chi5_tail(const Kernel & kernel, const SamplingGrid & grid, double w, double R, double k_lo, double k_hi)
{
  const auto [i_lo, i_hi] = grid.indices_in(w * k_lo, w * k_hi);
  double worst = 0.0;
  for (long k = i_lo; k <= i_hi; ++k) {
    const double t = grid.node(k);
    const double m = kernel.mass_above(w * R - t) + kernel.mass_below(-w * R - t);
    worst = std::max(worst, m / w);
  }
  return worst;
}

}  // namespace

AssumptionReport check_chi_assumptions(const Kernel & kernel, const SamplingGrid & grid,
  std::span<const double> w_list, std::size_t probe_count, const ChiCheckOptions & options)
{
  if (w_list.empty()) {
    throw std::invalid_argument("check_chi_assumptions needs a nonempty w list");
  }
  for (double w : w_list) {
    if (!(w > 0.0)) {
      throw std::invalid_argument("check_chi_assumptions: w must be positive");
    }
  }
  if (!(options.probe_hi > options.probe_lo) || !(options.summation_radius >= 1.0) ||
      !(options.neighborhood > 0.0) || !(options.epsilon > 0.0) || !(options.k_hi > options.k_lo)) {
    throw std::invalid_argument("check_chi_assumptions: bad options");
  }

  AssumptionReport report;
  report.kernel = kernel.name();
  report.grid = grid.name();
  report.chi5_compact_K = {options.k_lo, options.k_hi};

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> dist(options.probe_lo, options.probe_hi);
  std::vector<double> probes(probe_count);
  for (auto & z : probes) {
    z = dist(rng);
  }

  for (double w : w_list) {
    std::vector<double> zs = probes;
    if (grid.is_integer_lattice()) {
      for (int j = 0; j < 64; ++j) {
        zs.push_back((j / 64.0) / w);
      }
    }
    double tail_sup = 0.0;
    for (double z : zs) {
      const double u = w * z;
      const LatticeSums s = lattice_sums(kernel, grid, u, options.summation_radius);
      if (!std::isfinite(s.sum) || !std::isfinite(s.abs_sum)) {
        report.valid = false;
        report.invalid_reason = "divergent partial sum at z = " + std::to_string(z);
        continue;
      }
      report.chi2_partition_defect = std::max(report.chi2_partition_defect, std::abs(s.sum - 1.0));
      report.chi2_truncation_bound = std::max(report.chi2_truncation_bound, s.tail_bound);
      report.chi3_moment_M = std::max(report.chi3_moment_M, s.abs_sum + s.tail_bound);
      // mass at distance > B from z, i.e. |u - t_k| > w B
      double near = 0.0;
      const auto [n_lo, n_hi] = grid.indices_in(u - w * options.neighborhood, u + w * options.neighborhood);
      for (long k = n_lo; k <= n_hi; ++k) {
        near += std::abs(kernel(u - grid.node(k)));
      }
      tail_sup = std::max(tail_sup, std::max(0.0, s.abs_sum + s.tail_bound - near));
    }
    report.chi4_tail_profile.push_back({w, tail_sup});

    const double l1 = kernel.scaled_l1_norm(w);
    report.gamma_l1_bound = std::max(report.gamma_l1_bound, l1);
    report.scaled_l1_profile.push_back({w, w * l1});
  }
  report.probe_count = probes.size();

  std::vector<TailSample> sorted = report.chi4_tail_profile;
  std::sort(sorted.begin(), sorted.end(), [](const TailSample & a, const TailSample & b) { return a.w < b.w; });
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i + 1].tail_mass > sorted[i].tail_mass * (1.0 + 1e-9) + 1e-15) {
      report.chi4_monotone = false;
    }
  }

  // C search at the largest w, R on a geometric ladder from the edge of K
  const double w_big = *std::max_element(w_list.begin(), w_list.end());
  const double r0 = std::max(std::abs(options.k_lo), std::abs(options.k_hi));
  for (double R = r0; R <= options.max_radius * (1.0 + 1e-12); R *= 1.125) {
    const double tail = options.upsilon * chi5_tail(kernel, grid, w_big, R, options.k_lo, options.k_hi);
    if (tail < options.epsilon) {
      report.chi5_verified = true;
      report.chi5_radius = R;
      break;
    }
  }
  return report;
}

}  // namespace unisamp
