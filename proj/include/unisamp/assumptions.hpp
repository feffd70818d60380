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
#ifndef UNISAMP_ASSUMPTIONS_HPP
#define UNISAMP_ASSUMPTIONS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "unisamp/grid.hpp"
#include "unisamp/kernels.hpp"

namespace unisamp {

struct ChiCheckOptions
{
  /// probes z are drawn uniformly from [probe_lo, probe_hi]
  double probe_lo = -2.0;
  double probe_hi = 2.0;
  std::uint64_t seed = 0x5eed2026;
  /// summation radius in u = w z for full-line kernels
  double summation_radius = 1e4;
  /// neighbourhood radius for the tail profile
  double neighborhood = 0.25;
  double epsilon = 1e-3;
  /// compact set K for the C search
  double k_lo = -1.0;
  double k_hi = 1.0;
  double max_radius = 1e3;
  /// bound on the sample functionals, multiplies the C-search tail
  double upsilon = 1.0;
};

struct TailSample
{
  double w;
  double tail_mass;
};

struct ScaledNormSample
{
  double w;
  /// w * ||chi(w .)||_1 measured by quadrature
  double w_times_l1;
};

/// Finite-sample surrogates for the kernel conditions on a grid.
struct AssumptionReport
{
  std::string kernel;
  std::string grid;
  /// sup over probes of |sum_k chi(w z - t_k) - 1|
  double chi2_partition_defect = 0.0;
  /// bound on what truncation might hide from the defect and moment
  double chi2_truncation_bound = 0.0;
  /// sup over probes of sum_k |chi(w z - t_k)|
  double chi3_moment_M = 0.0;
  std::vector<TailSample> chi4_tail_profile;
  bool chi4_monotone = true;
  bool chi5_verified = false;
  /// C = [-chi5_radius, chi5_radius] when verified
  double chi5_radius = 0.0;
  std::pair<double, double> chi5_compact_K{-1.0, 1.0};
  /// max over w of ||chi_w||_1
  double gamma_l1_bound = 0.0;
  std::vector<ScaledNormSample> scaled_l1_profile;
  bool valid = true;
  std::string invalid_reason;
  std::size_t probe_count = 0;
};

/// Regular-grid probes also include a dense periodic set u = j / 64, j < 64.
AssumptionReport check_chi_assumptions(const Kernel & kernel, const SamplingGrid & grid,
  std::span<const double> w_list, std::size_t probe_count, const ChiCheckOptions & options = {});

/// sum_k chi(u - t_k) and sum_k |chi(u - t_k)| with a bound (or exact value) for what lies beyond the radius.
struct LatticeSums
{
  double sum = 0.0;
  double abs_sum = 0.0;
  /// bound for the discarded absolute mass after any exact correction
  double tail_bound = 0.0;
  long k_lo = 0;
  long k_hi = -1;
};

LatticeSums lattice_sums(const Kernel & kernel, const SamplingGrid & grid, double u, double radius);

}  // namespace unisamp

#endif  // UNISAMP_ASSUMPTIONS_HPP
