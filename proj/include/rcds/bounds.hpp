// Copyright 2026 The rcds Authors.
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

// Exact tests of the round bound rounds <= 1 + lg(1/delta) and of the
// approximation bound value <= 2 (1 + lg(1/delta)) * optimum.

#pragma once

#include <cmath>
#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "rcds/error.hpp"
#include "rcds/rational.hpp"

namespace rcds {

// Largest k with 2^k <= x, for x >= 1.
inline int floor_lg(const Rational& x) {
  if (x < 1) throw PreconditionError("floor_lg needs x >= 1");
  int k = 0;
  Rational p = 1;
  while (p * 2 <= x) {
    p *= 2;
    ++k;
  }
  return k;
}

// Smallest k with x <= 2^k, for x >= 1.
inline int ceil_lg(const Rational& x) {
  const int k = floor_lg(x);
  return Rational(std::int64_t{1} << k) == x ? k : k + 1;
}

// rounds is an integer, so comparing against the floor is exact.
inline bool rounds_within_bound(int rounds, const Rational& delta) {
  return rounds <= 1 + floor_lg(1 / delta);
}

// 2 (1 + lg(1/delta)) as a double, for reporting only.
inline double approx_factor(const Rational& delta) {
  return 2.0 * (1.0 + std::log2(to_double(1 / delta)));
}

// value <= 2 (1 + lg X) * opt with X = 1/delta, decided exactly: with
// t = value / (2 opt) - 1 = a/b the test is 2^a <= X^b.
inline bool within_approx_bound(const Rational& value, const Rational& opt, const Rational& delta) {
  if (delta <= 0 || delta > 1) throw PreconditionError("delta must lie in (0, 1]");
  if (opt < 0 || value < 0) throw PreconditionError("values must be nonnegative");
  if (is_zero(opt)) return is_zero(value);
  const Rational x = 1 / delta;
  const Rational t = value / (2 * opt) - 1;
  if (t <= 0) return true;
  if (t <= floor_lg(x)) return true;
  if (t > ceil_lg(x)) return false;
  using boost::multiprecision::cpp_int;
  const std::int64_t a = t.numerator(), b = t.denominator();
  if (b > 4096) {
    // Exact powers get too large; decide in long double when the gap is
    // clearly wider than rounding error.
    const long double gap = std::log2(static_cast<long double>(x.numerator())) -
                            std::log2(static_cast<long double>(x.denominator())) -
                            static_cast<long double>(a) / static_cast<long double>(b);
    if (std::fabs(gap) > 1e-12L) return gap > 0;
    throw SolverLimitError("approximation bound comparison too close to decide");
  }
  cpp_int lhs = cpp_int(1) << static_cast<unsigned>(a);
  lhs *= boost::multiprecision::pow(cpp_int(x.denominator()), static_cast<unsigned>(b));
  const cpp_int rhs = boost::multiprecision::pow(cpp_int(x.numerator()), static_cast<unsigned>(b));
  return lhs <= rhs;
}

}  // namespace rcds
