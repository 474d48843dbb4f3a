// Copyright 2026 The dpgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dpgen/error.hpp"

namespace dpgen {

// Fixed-width bit vector indexed by PHV_valid position. Bit k is the
// validity bit of the k-th header in emit order.
class ValidBits {
 public:
  ValidBits() = default;
  explicit ValidBits(std::size_t width)
      : width_(width), words_((width + 63) / 64, 0) {}

  std::size_t width() const noexcept { return width_; }

  bool test(std::size_t i) const {
    check(i);
    return (words_[i / 64] >> (i % 64)) & 1u;
  }

  ValidBits& set(std::size_t i, bool value = true) {
    check(i);
    const std::uint64_t bit = std::uint64_t{1} << (i % 64);
    if (value) {
      words_[i / 64] |= bit;
    } else {
      words_[i / 64] &= ~bit;
    }
    return *this;
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool none() const noexcept { return count() == 0; }

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  ValidBits operator&(const ValidBits& o) const {
    same_width(o);
    ValidBits r(width_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
    return r;
  }

  ValidBits operator|(const ValidBits& o) const {
    same_width(o);
    ValidBits r(width_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] | o.words_[i];
    return r;
  }

  ValidBits operator^(const ValidBits& o) const {
    same_width(o);
    ValidBits r(width_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] ^ o.words_[i];
    return r;
  }

  // All bits set up to width.
  static ValidBits ones(std::size_t width) {
    ValidBits r(width);
    for (std::size_t i = 0; i < width; ++i) r.set(i);
    return r;
  }

  // MSB-first binary string, the same form as a VHDL bit-string literal.
  std::string to_string() const {
    std::string s(width_, '0');
    for (std::size_t i = 0; i < width_; ++i) {
      if (test(i)) s[width_ - 1 - i] = '1';
    }
    return s;
  }

  static ValidBits from_string(std::string_view s) {
    ValidBits r(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const char c = s[s.size() - 1 - i];
      if (c == '1') {
        r.set(i);
      } else if (c != '0') {
        throw Error("valid_bits", "bad bit character in '" + std::string(s) + "'");
      }
    }
    return r;
  }

  friend bool operator==(const ValidBits&, const ValidBits&) = default;
  friend auto operator<=>(const ValidBits& a, const ValidBits& b) {
    if (auto c = a.width_ <=> b.width_; c != 0) return c;
    // Compare from the most significant word so ordering matches the
    // numeric value of the bitmap.
    for (std::size_t i = a.words_.size(); i-- > 0;) {
      if (auto c = a.words_[i] <=> b.words_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

 private:
  void check(std::size_t i) const {
    if (i >= width_) {
      throw Error("valid_bits", "bit index " + std::to_string(i) + " out of range for width " +
                                    std::to_string(width_));
    }
  }
  void same_width(const ValidBits& o) const {
    if (o.width_ != width_) throw Error("valid_bits", "width mismatch");
  }

  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

// One product term over validity bits: matches bitmap b iff (b & mask) == value.
struct Cube {
  ValidBits mask;
  ValidBits value;

  bool matches(const ValidBits& b) const {
    if (b.width() != mask.width()) return false;
    const auto& bw = b.words();
    const auto& mw = mask.words();
    const auto& vw = value.words();
    for (std::size_t i = 0; i < bw.size(); ++i) {
      if ((bw[i] & mw[i]) != vw[i]) return false;
    }
    return true;
  }

  // Two cubes share at least one bitmap iff they agree on the common mask.
  bool intersects(const Cube& o) const {
    return ((value ^ o.value) & mask & o.mask).none();
  }

  // Smallest bitmap matched by both cubes; only meaningful if intersects().
  ValidBits witness(const Cube& o) const { return value | o.value; }

  friend bool operator==(const Cube&, const Cube&) = default;
  friend auto operator<=>(const Cube&, const Cube&) = default;
};

}  // namespace dpgen
