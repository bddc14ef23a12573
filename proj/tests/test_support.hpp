#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <doctest.h>

#include "lindyn/finvec.hpp"
#include "lindyn/operator_spec.hpp"

namespace lindyn::test {

// Deterministic generator; avoids std distributions so streams are identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : eng_() % n; }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::mt19937_64 eng_;
};

inline Dyadic random_dyadic(Rng& rng, int exp_range = 12) {
  std::int64_t m = rng.range(-(std::int64_t(1) << 20), (std::int64_t(1) << 20));
  return Dyadic::scaled(m, rng.range(-exp_range, exp_range));
}

inline Dyadic random_nonzero_dyadic(Rng& rng, int exp_range = 12) {
  for (;;) {
    Dyadic d = random_dyadic(rng, exp_range);
    if (!d.is_zero()) return d;
  }
}

inline FinVec random_finvec(Rng& rng, std::uint64_t coord_limit, std::size_t max_support) {
  std::vector<FinVec::Entry> entries;
  const std::size_t support = 1 + static_cast<std::size_t>(rng.below(max_support));
  for (std::size_t i = 0; i < support; ++i) {
    entries.push_back({rng.below(coord_limit), random_dyadic(rng)});
  }
  return FinVec::from_entries(std::move(entries));
}

// Independent exact-rational oracle used to cross-check dyadic arithmetic.
struct Frac {
  long long num = 0;
  long long den = 1;

  static Frac make(long long n, long long d) {
    Frac f{n, d};
    if (f.den < 0) {
      f.num = -f.num;
      f.den = -f.den;
    }
    const long long g = std::gcd(f.num < 0 ? -f.num : f.num, f.den);
    if (g > 1) {
      f.num /= g;
      f.den /= g;
    }
    return f;
  }
  friend Frac operator+(const Frac& a, const Frac& b) {
    return make(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Frac operator*(const Frac& a, const Frac& b) {
    return make(a.num * b.num, a.den * b.den);
  }
  friend bool operator==(const Frac& a, const Frac& b) {
    return a.num == b.num && a.den == b.den;
  }
};

// Conversion for small dyadics (mantissa fits long long).
inline Frac to_frac(const Dyadic& d) {
  const long long m = d.mantissa().get_si();
  const std::int64_t e = d.exponent();
  if (e >= 0) return Frac::make(m << e, 1);
  return Frac::make(m, 1LL << (-e));
}

inline Dyadic from_frac(const Frac& f) {
  // Denominator must be a power of two.
  long long d = f.den;
  std::int64_t e = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++e;
  }
  REQUIRE(d == 1);
  return Dyadic::scaled(f.num, -e);
}

}  // namespace lindyn::test
