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
#include "unisamp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace unisamp {

SamplingGrid SamplingGrid::regular()
{
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::regular;
  impl->name = "regular";
  impl->nodes = [](long k) { return static_cast<double>(k); };
  // gaps are exactly 1; the strict bounds hold for any delta < 1 < Delta
  impl->delta = 0.999;
  impl->Delta = 1.001;
  impl->integer_lattice = true;
  return SamplingGrid(std::move(impl));
}

SamplingGrid SamplingGrid::irregular(std::string name, std::function<double(long)> nodes, double delta,
  double Delta)
{
  if (!(delta > 0.0) || !(Delta > delta)) {
    throw std::invalid_argument("irregular grid needs 0 < delta < Delta");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::irregular;
  impl->name = "irregular:" + name;
  impl->nodes = std::move(nodes);
  impl->delta = delta;
  impl->Delta = Delta;
  SamplingGrid grid(std::move(impl));
  grid.validate(-2000, 2000);
  return grid;
}

SamplingGrid SamplingGrid::jittered(const SamplingGrid & base, std::string name,
  std::function<double(long, double)> jitter)
{
  if (base.kind() == Kind::jittered) {
    throw std::invalid_argument("cannot jitter an already jittered grid");
  }
  auto impl = std::make_shared<Impl>(*base.impl_);
  impl->kind = Kind::jittered;
  impl->name = std::move(name);
  impl->jitter = std::move(jitter);
  return SamplingGrid(std::move(impl));
}

SamplingGrid SamplingGrid::by_name(std::string_view spec)
{
  if (spec == "regular") {
    return regular();
  }
  if (spec == "irregular:sine") {
    // gap = 1 + (sin(k+1) - sin k) / 4, and |sin(k+1) - sin k| <= 2 sin(1/2) < 0.96
    return irregular("sine", [](long k) { return k + 0.25 * std::sin(static_cast<double>(k)); }, 0.75, 1.25);
  }
  if (spec == "irregular:alternating") {
    return irregular("alternating", [](long k) { return k + ((k % 2 == 0) ? 0.2 : -0.2); }, 0.5, 1.5);
  }
  if (spec.starts_with("jitter:")) {
    const std::string text(spec.substr(7));
    std::size_t used = 0;
    double eta = 0.0;
    try {
      eta = std::stod(text, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used != text.size() || !(eta >= 0.0)) {
      throw std::invalid_argument("bad jitter amplitude: " + text);
    }
    // |j_k(w)| <= eta / w, vanishing uniformly in k
    return jittered(regular(), "jitter:" + text, [eta](long k, double w) {
      return eta / w * std::sin(2.399963229728653 * static_cast<double>(k) + 0.5);
    });
  }
  throw std::invalid_argument("unknown grid: " + std::string(spec));
}

long SamplingGrid::first_at_or_above(double x) const
{
  if (impl_->integer_lattice) {
    return static_cast<long>(std::ceil(x));
  }
  const double t0 = node(0);
  const double d = x - t0;
  long lo = static_cast<long>(std::floor(std::min(d / impl_->delta, d / impl_->Delta))) - 1;
  long hi = static_cast<long>(std::ceil(std::max(d / impl_->delta, d / impl_->Delta))) + 1;
  while (node(lo) >= x) {
    lo -= (hi - lo) + 1;
  }
  while (node(hi) < x) {
    hi += (hi - lo) + 1;
  }
  // invariant: node(lo) < x <= node(hi)
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (node(mid) >= x) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::pair<long, long> SamplingGrid::indices_in(double lo, double hi) const
{
  const long k_lo = first_at_or_above(lo);
  long k_hi = first_at_or_above(hi);
  if (node(k_hi) > hi) {
    --k_hi;
  }
  return {k_lo, k_hi};
}

void SamplingGrid::validate(long k_lo, long k_hi) const
{
  for (long k = k_lo; k < k_hi; ++k) {
    const double g = gap(k);
    if (!(g > impl_->delta && g < impl_->Delta)) {
      throw std::logic_error("grid " + impl_->name + " violates delta < t_{k+1} - t_k < Delta at k = " +
                             std::to_string(k));
    }
  }
}

double SamplingGrid::max_abs_jitter(double w, long k_lo, long k_hi) const
{
  double m = 0.0;
  for (long k = k_lo; k <= k_hi; ++k) {
    m = std::max(m, std::abs(jitter(k, w)));
  }
  return m;
}

}  // namespace unisamp
