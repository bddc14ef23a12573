#include <doctest.h>

#include "lindyn/dyadic.hpp"
#include "test_support.hpp"

using namespace lindyn;
using test::Rng;

TEST_CASE("dyadic normal form") {
  const Dyadic d = Dyadic::scaled(12, 0);  // 12 = 3 * 2^2
  CHECK(d.mantissa() == 3);
  CHECK(d.exponent() == 2);
  const Dyadic z = Dyadic::scaled(0, 17);
  CHECK(z.is_zero());
  CHECK(z.exponent() == 0);
}

TEST_CASE("addition examples") {
  const Dyadic half = Dyadic::pow2(-1);
  CHECK(half + half == Dyadic(1));
  const Dyadic a = Dyadic::scaled(3, -4);
  CHECK(a + Dyadic() == a);
  // 3/16 + 1/16 = 1/4, checked against the rational oracle too
  const Dyadic b = Dyadic::scaled(1, -4);
  CHECK(a + b == Dyadic::pow2(-2));
  CHECK(test::to_frac(a) + test::to_frac(b) == test::Frac::make(1, 4));
}

TEST_CASE("multiplication examples") {
  CHECK(Dyadic::scaled(3, -4) * Dyadic::scaled(1, 6) == Dyadic::scaled(3, 2));
  const Dyadic a = Dyadic::scaled(-7, 3);
  CHECK(a * Dyadic(1) == a);
  CHECK(Dyadic::pow2(-1) * Dyadic::pow2(-1) == Dyadic::pow2(-2));
}

TEST_CASE("ring laws on random triples") {
  Rng rng(0x5eed0001);
  for (int i = 0; i < 300; ++i) {
    const Dyadic a = test::random_dyadic(rng);
    const Dyadic b = test::random_dyadic(rng);
    const Dyadic c = test::random_dyadic(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("rational oracle round trip") {
  Rng rng(0x5eed0002);
  for (int i = 0; i < 200; ++i) {
    const Dyadic d = Dyadic::scaled(rng.range(-1000, 1000), rng.range(-12, 12));
    CHECK(test::from_frac(test::to_frac(d)) == d);
    const Dyadic e = Dyadic::scaled(rng.range(-1000, 1000), rng.range(-12, 12));
    CHECK(test::to_frac(d) + test::to_frac(e) == test::to_frac(d + e));
    CHECK(test::to_frac(d) * test::to_frac(e) == test::to_frac(d * e));
  }
}

TEST_CASE("comparison is total and exact") {
  Rng rng(0x5eed0003);
  for (int i = 0; i < 300; ++i) {
    const Dyadic a = test::random_dyadic(rng, 30);
    const Dyadic b = test::random_dyadic(rng, 30);
    const auto ord = a <=> b;
    const Dyadic diff = a - b;
    if (diff.is_zero()) {
      CHECK(ord == std::strong_ordering::equal);
    } else if (diff.sign() > 0) {
      CHECK(ord == std::strong_ordering::greater);
    } else {
      CHECK(ord == std::strong_ordering::less);
    }
  }
}

TEST_CASE("exponent overflow faults") {
  const Dyadic big = Dyadic::pow2(INT64_MAX - 1);
  CHECK_THROWS_AS(big * big, arithmetic_fault);
  CHECK_THROWS_AS(Dyadic::pow2(INT64_MAX - 1).pow(3), arithmetic_fault);
}

TEST_CASE("abs-sum comparison agrees with the materialized sum") {
  Rng rng(0x5eed0004);
  for (int round = 0; round < 100; ++round) {
    std::vector<Dyadic> terms;
    const int n = 1 + static_cast<int>(rng.below(12));
    Dyadic total;
    for (int i = 0; i < n; ++i) {
      terms.push_back(test::random_dyadic(rng, 40));
      total += terms.back().abs();
    }
    const Dyadic bound = round % 3 == 0 ? total : test::random_dyadic(rng, 44).abs();
    CHECK(compare_abs_sum(terms, bound) == (total <=> bound));
  }
}

TEST_CASE("power-of-two rational comparison") {
  // 2^(1/2): 1 < sqrt(2) < 2
  CHECK(le_pow2_rational(Dyadic(1), 1, 2));
  CHECK(!le_pow2_rational(Dyadic(2), 1, 2));
  // 1.5^2 = 2.25 > 2 so 1.5 > 2^(1/2)
  CHECK(!le_pow2_rational(Dyadic::scaled(3, -1), 1, 2));
  // 1.25^2 = 1.5625 <= 2
  CHECK(le_pow2_rational(Dyadic::scaled(5, -2), 1, 2));
  CHECK(le_pow2_rational(Dyadic(8), 9, 3));
  CHECK(le_pow2_rational(Dyadic(8), 3, 1));
  CHECK(!le_pow2_rational(Dyadic(9), 3, 1));
  CHECK(le_pow2_rational(Dyadic(-5), -100, 7));
  CHECK(le_pow2_rational(Dyadic(), -100, 7));
}

TEST_CASE("normalization is idempotent under round trips") {
  Rng rng(0x5eed0005);
  for (int i = 0; i < 200; ++i) {
    const Dyadic d = test::random_dyadic(rng);
    const Dyadic again = Dyadic::scaled(d.mantissa(), d.exponent());
    CHECK(again == d);
    CHECK(again.mantissa() == d.mantissa());
    CHECK(again.exponent() == d.exponent());
  }
}
