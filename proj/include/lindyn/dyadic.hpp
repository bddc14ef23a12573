#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>

#include <gmpxx.h>

#include "lindyn/errors.hpp"

namespace lindyn {

/// Exact scalar m * 2^e with arbitrary-precision mantissa.
///
/// Normal form: the mantissa is odd or zero, and zero carries exponent 0,
/// so each value has exactly one representation and equality is structural.
/// Every operation is exact; exponent overflow and oversized mantissa
/// alignments throw arithmetic_fault instead of wrapping or rounding.
class Dyadic {
 public:
  Dyadic() : mant_(0), exp_(0) {}
  Dyadic(long value) : mant_(value), exp_(0) { normalize(); }

  static Dyadic scaled(mpz_class mantissa, std::int64_t exponent);
  static Dyadic pow2(std::int64_t exponent);
  static Dyadic from_parts(const std::string& mantissa_dec, std::int64_t exponent);

  const mpz_class& mantissa() const { return mant_; }
  std::int64_t exponent() const { return exp_; }

  bool is_zero() const { return mpz_sgn(mant_.get_mpz_t()) == 0; }
  int sign() const { return mpz_sgn(mant_.get_mpz_t()); }

  /// Largest f with 2^f <= |value|; requires a nonzero value.
  std::int64_t floor_log2_abs() const;

  Dyadic operator-() const;
  Dyadic abs() const;
  Dyadic& negate();
  /// Multiply by 2^e in place; mantissa untouched.
  Dyadic& mul_pow2(std::int64_t e);

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
  Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

  Dyadic pow(std::uint64_t n) const;

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exp_ == b.exp_ && a.mant_ == b.mant_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  std::string to_string() const;

 private:
  void normalize();

  mpz_class mant_;
  std::int64_t exp_;
};

std::int64_t checked_add_exp(std::int64_t a, std::int64_t b);

/// Exact three-way comparison of sum(|terms|) against a bound >= 0.
/// Exits early once partial sums or magnitude envelopes decide the order,
/// so the full-precision sum is rarely materialized.
std::strong_ordering compare_abs_sum(std::span<const Dyadic> terms, const Dyadic& bound);

/// Exact test d <= 2^(num/den), den >= 1. Integer-exponent fast paths first,
/// then the power comparison d^den <= 2^num.
bool le_pow2_rational(const Dyadic& d, std::int64_t num, std::int64_t den);

}  // namespace lindyn
