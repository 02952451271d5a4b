// SPDX-License-Identifier: Apache-2.0
#include "turbonoc/rational.hpp"

#include <algorithm>

#include "turbonoc/error.hpp"

namespace turbonoc {

namespace {

using i128 = Rational::int_type;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

std::string to_string_i128(__int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

Rational::Rational(int_type num, int_type den) {
  if (den == 0) throw Error(ErrorCode::invalid_parameter, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  int_type g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

double Rational::to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

Rational::int_type Rational::ceil() const {
  int_type q = num_ / den_;
  if (num_ % den_ != 0 && num_ > 0) ++q;
  return q;
}

std::string Rational::to_decimal(int digits) const {
  int_type scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  bool neg = num_ < 0;
  int_type n = abs128(num_);
  // round half up on the magnitude
  int_type scaled = (n * scale * 2 + den_) / (den_ * 2);
  int_type whole = scaled / scale;
  int_type frac = scaled % scale;
  std::string out = (neg && scaled != 0 ? "-" : "") + to_string_i128(whole);
  if (digits > 0) {
    std::string f = to_string_i128(frac);
    out += '.';
    out += std::string(static_cast<std::size_t>(digits) - f.size(), '0') + f;
  }
  return out;
}

std::string Rational::to_string() const {
  if (den_ == 1) return to_string_i128(num_);
  return to_string_i128(num_) + "/" + to_string_i128(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(ErrorCode::invalid_parameter, "rational division by zero");
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

Rational parse_rational(const std::string& text) {
  auto fail = [&]() { return Error(ErrorCode::parse_error, "not a number: '" + text + "'"); };
  if (auto slash = text.find('/'); slash != std::string::npos) {
    Rational n = parse_rational(text.substr(0, slash));
    Rational d = parse_rational(text.substr(slash + 1));
    if (d.num() == 0) throw fail();
    return n / d;
  }
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
  i128 num = 0, den = 1;
  bool digits = false, point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' && !point) {
      point = true;
      continue;
    }
    if (c < '0' || c > '9') throw fail();
    if (num > (i128{1} << 100)) throw fail();
    num = num * 10 + (c - '0');
    if (point) den *= 10;
    digits = true;
  }
  if (!digits) throw fail();
  return Rational(neg ? -num : num, den);
}

bool operator<(const Rational& a, const Rational& b) { return a.num_ * b.den_ < b.num_ * a.den_; }

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::invalid_topology: return "invalid-topology";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::not_a_permutation: return "not-a-permutation";
    case ErrorCode::livelock: return "livelock-detected";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::model_inconsistency: return "model-inconsistency";
    case ErrorCode::config_error: return "config-error";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace turbonoc
