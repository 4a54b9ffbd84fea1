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

// Fixed-capacity bitsets used for node sets and scenario masks.

#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rcds/error.hpp"

namespace rcds {

inline constexpr std::size_t kMaxNodes = 256;
inline constexpr std::size_t kMaxScenarios = 256;

// A set over [0, Capacity). The tag keeps node sets and scenario masks from
// being mixed up.
template <class Tag, std::size_t Capacity>
class BasicSet {
 public:
  static constexpr std::size_t kWords = (Capacity + 63) / 64;
  static constexpr std::size_t kCapacity = Capacity;

  constexpr BasicSet() = default;
  BasicSet(std::initializer_list<int> members) {
    for (int m : members) insert(m);
  }

  static BasicSet range(int n) {
    BasicSet s;
    for (std::size_t w = 0; w < kWords; ++w) {
      const int lo = static_cast<int>(w * 64);
      if (n >= lo + 64) {
        s.words_[w] = ~std::uint64_t{0};
      } else if (n > lo) {
        s.words_[w] = (std::uint64_t{1} << (n - lo)) - 1;
      }
    }
    return s;
  }

  bool contains(int i) const {
    return (words_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u;
  }
  void insert(int i) {
    if (i < 0 || static_cast<std::size_t>(i) >= Capacity) {
      throw InvalidNodeError("index " + std::to_string(i) + " exceeds set capacity");
    }
    words_[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63);
  }
  void erase(int i) {
    words_[static_cast<std::size_t>(i) >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }

  int size() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  bool is_subset_of(const BasicSet& o) const {
    for (std::size_t w = 0; w < kWords; ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }
  bool intersects(const BasicSet& o) const {
    for (std::size_t w = 0; w < kWords; ++w)
      if (words_[w] & o.words_[w]) return true;
    return false;
  }
  // Smallest member, or -1.
  int first() const { return next(0); }
  int next(int from) const {
    if (from < 0) from = 0;
    std::size_t w = static_cast<std::size_t>(from) >> 6;
    if (w >= kWords) return -1;
    std::uint64_t cur = words_[w] & (~std::uint64_t{0} << (from & 63));
    while (true) {
      if (cur) return static_cast<int>(w * 64 + std::countr_zero(cur));
      if (++w >= kWords) return -1;
      cur = words_[w];
    }
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < kWords; ++w) {
      std::uint64_t cur = words_[w];
      while (cur) {
        fn(static_cast<int>(w * 64 + std::countr_zero(cur)));
        cur &= cur - 1;
      }
    }
  }
  std::vector<int> members() const {
    std::vector<int> out;
    for_each([&](int i) { out.push_back(i); });
    return out;
  }

  BasicSet& operator|=(const BasicSet& o) {
    for (std::size_t w = 0; w < kWords; ++w) words_[w] |= o.words_[w];
    return *this;
  }
  BasicSet& operator&=(const BasicSet& o) {
    for (std::size_t w = 0; w < kWords; ++w) words_[w] &= o.words_[w];
    return *this;
  }
  BasicSet& operator-=(const BasicSet& o) {
    for (std::size_t w = 0; w < kWords; ++w) words_[w] &= ~o.words_[w];
    return *this;
  }
  friend BasicSet operator|(BasicSet a, const BasicSet& b) { return a |= b; }
  friend BasicSet operator&(BasicSet a, const BasicSet& b) { return a &= b; }
  friend BasicSet operator-(BasicSet a, const BasicSet& b) { return a -= b; }
  friend bool operator==(const BasicSet&, const BasicSet&) = default;

  // Orders sets by their smallest differing member: the set holding that
  // member sorts first. This is lexicographic order on sorted member lists.
  friend bool lex_less(const BasicSet& a, const BasicSet& b) {
    for (std::size_t w = 0; w < kWords; ++w) {
      const std::uint64_t diff = a.words_[w] ^ b.words_[w];
      if (diff) {
        const std::uint64_t low = diff & (~diff + 1);
        return (a.words_[w] & low) != 0;
      }
    }
    return false;
  }

  // '0'/'1' string of length n, character i describing member i.
  std::string to_bitstring(int n) const {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 0; i < n; ++i)
      if (contains(i)) s[static_cast<std::size_t>(i)] = '1';
    return s;
  }

  const std::array<std::uint64_t, kWords>& words() const { return words_; }

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (auto w : words_) h = (h ^ std::hash<std::uint64_t>{}(w)) * 0x100000001b3ull;
    return h;
  }

 private:
  std::array<std::uint64_t, kWords> words_{};
};

struct NodeTag {};
struct ScenarioTag {};

using NodeSet = BasicSet<NodeTag, kMaxNodes>;
using ScenarioMask = BasicSet<ScenarioTag, kMaxScenarios>;

}  // namespace rcds
