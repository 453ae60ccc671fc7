// Copyright 2026 The parcorp Authors.
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

#include <cstdint>
#include <numeric>
#include <ostream>

namespace parcorp {

/// Exact non-negative fraction. Used wherever a result is compared against an
/// exact value (completion gate, mean sentence length) so that 1.0 means 1.0.
struct Ratio {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;

  /// 0/0 is reported as 0/1.
  static Ratio of(std::uint64_t num, std::uint64_t den) {
    if (den == 0) return {0, 1};
    const auto g = std::gcd(num, den);
    return {num / g, den / g};
  }

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  bool is_one() const { return numerator == denominator; }

  friend bool operator==(const Ratio& a, const Ratio& b) {
    return a.numerator * b.denominator == b.numerator * a.denominator;
  }
};

inline std::ostream& operator<<(std::ostream& os, const Ratio& r) {
  return os << r.numerator << '/' << r.denominator;
}

}  // namespace parcorp
