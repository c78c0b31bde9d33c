// Copyright 2026 The defect-forge authors
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

#include <compare>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dforge {

/// Exact rotation angle as a rational multiple of pi, normalised into the
/// half-open interval (-pi, pi]. Keeping angles rational makes gate
/// identities (T*T == S, S*S == Z, ...) exact instead of tolerance-laden.
struct PiRational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  PiRational() = default;
  PiRational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  /// Angle in radians.
  [[nodiscard]] double radians() const {
    return std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
  }

  [[nodiscard]] PiRational negated() const { return PiRational(-num, den); }

  friend bool operator==(const PiRational&, const PiRational&) = default;
  friend auto operator<=>(const PiRational& a, const PiRational& b) {
    return a.num * b.den <=> b.num * a.den;
  }

  [[nodiscard]] std::string str() const {
    return std::to_string(num) + "/" + std::to_string(den) + "pi";
  }

 private:
  void normalize() {
    if (den == 0) throw std::invalid_argument("PiRational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    // reduce, then wrap into (-1, 1] turns of pi
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    std::int64_t two = 2 * den;
    num %= two;
    if (num > den) num -= two;
    if (num <= -den) num += two;
  }
};

inline const PiRational kPi{1, 1};
inline const PiRational kPiHalf{1, 2};
inline const PiRational kPiQuarter{1, 4};

}  // namespace dforge
