#pragma once

// Exact integer/rational helpers shared by every statistic in the library.
// Aggregates stay integral; averages become rationals only at reporting time.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cyclecensus {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt ipow(const BigInt& base, std::uint64_t exponent) {
  BigInt result = 1;
  BigInt b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent != 0) b *= b;
  }
  return result;
}

inline std::uint64_t ipow_u64(std::uint64_t base, unsigned exponent) {
  std::uint64_t result = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    if (base != 0 && result > UINT64_MAX / base) throw std::overflow_error("ipow_u64 overflow");
    result *= base;
  }
  return result;
}

/// n(n-1)...(n-k+1). Zero whenever k > n >= 0 (one factor vanishes).
inline BigInt falling_factorial(std::int64_t n, std::int64_t k) {
  if (k < 0) throw std::invalid_argument("falling_factorial: negative length");
  BigInt result = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    result *= (n - i);
    if (result == 0) break;
  }
  return result;
}

inline BigInt factorial(std::int64_t n) { return falling_factorial(n, n); }

inline BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= (n - k + i);
    result /= i;
  }
  return result;
}

/// base^exponent for any integer exponent; base must be nonzero when exponent < 0.
inline Rational rational_pow(const BigInt& base, std::int64_t exponent) {
  if (exponent >= 0) return Rational(ipow(base, static_cast<std::uint64_t>(exponent)));
  if (base == 0) throw std::domain_error("rational_pow: zero to a negative power");
  return Rational(BigInt(1), ipow(base, static_cast<std::uint64_t>(-exponent)));
}

inline bool is_integral(const Rational& r) { return denominator(r) == 1; }

inline Rational abs_value(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// "num/den" with den > 0, always both parts (integers read "n/1").
inline std::string to_fraction_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational parse_fraction(std::string_view text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(BigInt(std::string(text)));
    BigInt num(std::string(text.substr(0, slash)));
    BigInt den(std::string(text.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed fraction: '" + std::string(text) + "'");
  }
}

/// Nearest-ish double; safe when numerator and denominator overflow double range.
inline double to_double(const Rational& r) {
  if (r == 0) return 0.0;
  BigInt num = numerator(r);
  BigInt den = denominator(r);
  const bool negative = num < 0;
  if (negative) num = -num;
  const auto e = static_cast<long>(boost::multiprecision::msb(num)) -
                 static_cast<long>(boost::multiprecision::msb(den));
  constexpr long kBits = 64;
  if (e < kBits) {
    num <<= static_cast<unsigned>(kBits - e);
  } else {
    den <<= static_cast<unsigned>(e - kBits);
  }
  const BigInt quotient = num / den;
  const double mantissa = quotient.convert_to<double>();
  const double value = std::ldexp(mantissa, static_cast<int>(e - kBits));
  return negative ? -value : value;
}

/// 17 significant digits, enough to round-trip a double.
inline std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

inline std::string format_double(const Rational& value) { return format_double(to_double(value)); }

}  // namespace cyclecensus
