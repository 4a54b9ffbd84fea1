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

#pragma once

#include <boost/rational.hpp>

#include <charconv>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "rcds/error.hpp"

namespace rcds {

using Rational = boost::rational<std::int64_t>;

// Under C++20 rewritten comparisons, `rational<int64_t> == int` resolves to
// boost's reversed mixed operator and recurses; compare numerators instead.
inline bool is_zero(const Rational& r) { return r.numerator() == 0; }

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Fixed-point rendering truncated toward zero, e.g. 10/3 -> "3.333333333".
inline std::string to_decimal(const Rational& r, int places = 9) {
  std::int64_t num = r.numerator();
  const std::int64_t den = r.denominator();
  std::string out;
  if (num < 0) {
    out.push_back('-');
    num = -num;
  }
  out += std::to_string(num / den);
  if (places > 0) {
    out.push_back('.');
    __int128 rem = num % den;
    for (int i = 0; i < places; ++i) {
      rem *= 10;
      out.push_back(static_cast<char>('0' + static_cast<int>(rem / den)));
      rem %= den;
    }
  }
  return out;
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Accepts "7", "3/4" or a finite decimal like "0.25".
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
      throw FormatError("not a rational number: '" + std::string(text) + "'");
    }
    return v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const std::int64_t den = parse_int(text.substr(slash + 1));
    if (den == 0) throw FormatError("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto frac = text.substr(dot + 1);
    if (frac.size() > 12) throw FormatError("too many decimals in '" + std::string(text) + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const auto whole = text.substr(0, dot);
    const bool neg = !whole.empty() && whole[0] == '-';
    const std::int64_t w = whole.empty() || whole == "-" ? 0 : parse_int(whole);
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
    const std::int64_t mag = (w < 0 ? -w : w) * scale + f;
    return Rational(neg ? -mag : mag, scale);
  }
  return Rational(parse_int(text));
}

inline std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
  const __int128 l = static_cast<__int128>(a / std::gcd(a, b)) * b;
  if (l > INT64_MAX) throw Error("denominator overflow");
  return static_cast<std::int64_t>(l);
}

}  // namespace rcds
