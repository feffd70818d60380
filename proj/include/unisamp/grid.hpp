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
#ifndef UNISAMP_GRID_HPP
#define UNISAMP_GRID_HPP

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

namespace unisamp {

/// Sampling nodes (t_k) with delta < t_{k+1} - t_k < Delta, optionally jittered.
class SamplingGrid
{
public:
  enum class Kind { regular, irregular, jittered };

  /// t_k = k
  static SamplingGrid regular();
  static SamplingGrid irregular(std::string name, std::function<double(long)> nodes, double delta, double Delta);
  /// Samples are taken at t_k / w + jitter(k, w); kernel arguments keep the base nodes.
  static SamplingGrid jittered(const SamplingGrid & base, std::string name,
    std::function<double(long, double)> jitter);

  /// "regular", "irregular:sine", "irregular:alternating", "jitter:<eta>"
  static SamplingGrid by_name(std::string_view spec);

  Kind kind() const { return impl_->kind; }
  const std::string & name() const { return impl_->name; }
  double delta() const { return impl_->delta; }
  double Delta() const { return impl_->Delta; }
  bool is_integer_lattice() const { return impl_->integer_lattice; }

  double node(long k) const { return impl_->nodes(k); }
  double gap(long k) const { return node(k + 1) - node(k); }
  double jitter(long k, double w) const { return impl_->jitter ? impl_->jitter(k, w) : 0.0; }

  /// Smallest k with t_k >= x.
  long first_at_or_above(double x) const;
  /// [k_lo, k_hi] of nodes with lo <= t_k <= hi; empty when k_lo > k_hi.
  std::pair<long, long> indices_in(double lo, double hi) const;

  /// Throws std::logic_error if monotonicity or the declared gap bounds fail on [k_lo, k_hi].
  void validate(long k_lo, long k_hi) const;

  double max_abs_jitter(double w, long k_lo, long k_hi) const;

private:
  struct Impl
  {
    Kind kind = Kind::regular;
    std::string name;
    std::function<double(long)> nodes;
    std::function<double(long, double)> jitter;
    double delta = 1.0;
    double Delta = 1.0;
    bool integer_lattice = false;
  };
  explicit SamplingGrid(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace unisamp

#endif  // UNISAMP_GRID_HPP
