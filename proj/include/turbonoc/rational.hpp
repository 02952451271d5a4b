// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

namespace turbonoc {

/// Exact non-negative-denominator fraction over 128-bit integers. Used for the
/// throughput model so that measured and ideal figures compare without rounding.
class Rational {
 public:
  using int_type = __int128;

  constexpr Rational() = default;
  Rational(int_type num, int_type den = 1);

  int_type num() const { return num_; }
  int_type den() const { return den_; }

  double to_double() const;
  /// Fixed-point decimal rendering, `digits` places after the point (round half up).
  std::string to_decimal(int digits) const;
  /// "n" or "n/d".
  std::string to_string() const;
  /// Smallest integer not below the value.
  int_type ceil() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  int_type num_ = 0;
  int_type den_ = 1;
};

std::string to_string_i128(__int128 v);

/// Parses "12", "2.35", "1/3" or "-0.5" exactly. Throws parse_error.
Rational parse_rational(const std::string& text);

}  // namespace turbonoc
