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
#ifndef UNISAMP_SPECIAL_HPP
#define UNISAMP_SPECIAL_HPP

namespace unisamp::special {

/// psi_1(x) for x > 0.
double trigamma(double x);

/// pi/2 - Si(z) for z >= 50 via the auxiliary-function asymptotic series.
double sine_integral_complement(double z);

/// int_R^inf F(x) dx for the Fejer kernel F(x) = (1 - cos(pi x)) / (pi x)^2, R >= 50.
double fejer_upper_tail(double radius);

/// sum_{k > k_hi} F(u - k) + sum_{k < k_lo} F(u - k); requires k_hi - u >= 1 and u - k_lo >= 1.
double fejer_lattice_tail(double u, long k_lo, long k_hi);

}  // namespace unisamp::special

#endif  // UNISAMP_SPECIAL_HPP
