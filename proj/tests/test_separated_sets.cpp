#include <doctest.h>

#include "lindyn/separated_sets.hpp"
#include "test_support.hpp"

using namespace lindyn;

TEST_CASE("prefix density basics") {
  std::vector<std::uint64_t> naturals;
  for (std::uint64_t i = 0; i < 20; ++i) naturals.push_back(i);
  const DensityCurve all = prefix_density(naturals, 20);
  for (std::uint64_t n = 1; n <= 20; ++n) {
    CHECK(all.density(n).first == n);
  }
  std::vector<std::uint64_t> evens;
  for (std::uint64_t i = 0; i < 20; i += 2) evens.push_back(i);
  const DensityCurve half = prefix_density(evens, 20);
  CHECK(half.density(10) == std::pair<std::uint64_t, std::uint64_t>{5, 10});
  const DensityCurve empty = prefix_density({}, 5);
  CHECK(empty.density(5).first == 0);
}

TEST_CASE("empty family") {
  const SeparatedFamily fam = SeparatedFamily::build({}, 1000);
  CHECK(fam.set_count() == 0);
}

TEST_CASE("single pair keeps its stride and floor") {
  const SeparatedFamily fam = SeparatedFamily::build({{1, 1}}, 10000);
  const auto& s = fam.set(1);
  CHECK(s.members.front() >= 1);
  CHECK(s.stride >= 2);
  for (std::size_t i = 1; i < s.members.size(); ++i) {
    const std::uint64_t gap = s.members[i] - s.members[i - 1];
    CHECK(gap >= 2);
    // within one interval the progression is exact
    if (gap < 2 * s.governing) CHECK(gap == s.stride);
  }
}

TEST_CASE("pairwise separation across two sets") {
  const SeparatedFamily fam = SeparatedFamily::build({{2, 1}, {2, 3}}, 20000);
  const auto a = fam.members(1, 20000);
  const auto b = fam.members(2, 20000);
  REQUIRE(!a.empty());
  REQUIRE(!b.empty());
  CHECK(b.front() >= 3);
  for (std::uint64_t x : a) {
    for (std::uint64_t y : b) {
      const std::uint64_t d = x > y ? x - y : y - x;
      CHECK(d >= 4);
    }
  }
}

TEST_CASE("measured prefix density never drops below the certified bound") {
  const SeparatedFamily fam = SeparatedFamily::build({{2, 2}, {5, 3}, {16, 11}}, 100000);
  for (std::size_t j = 1; j <= 3; ++j) {
    const auto& s = fam.set(j);
    REQUIRE(s.bound_num > 0);
    const DensityCurve curve = prefix_density(s.members, 100000);
    for (std::uint64_t n = s.burn_in; n <= 100000; ++n) {
      const auto [cnt, den] = curve.density(n);
      // cnt/den >= bound_num/bound_den, cross-multiplied in wide arithmetic
      const bool ok = static_cast<unsigned __int128>(cnt) * s.bound_den >=
                      static_cast<unsigned __int128>(s.bound_num) * den;
      if (!ok) {
        CAPTURE(j);
        CAPTURE(n);
        REQUIRE(ok);
      }
    }
  }
}

TEST_CASE("deterministic rebuild is bit-identical") {
  const SeparatedFamily a = SeparatedFamily::build({{3, 4}, {7, 2}}, 50000);
  const SeparatedFamily b = SeparatedFamily::build({{3, 4}, {7, 2}}, 50000);
  REQUIRE(a.set_count() == b.set_count());
  for (std::size_t j = 1; j <= a.set_count(); ++j) {
    CHECK(a.set(j).members == b.set(j).members);
    CHECK(a.set(j).bound_num == b.set(j).bound_num);
    CHECK(a.set(j).bound_den == b.set(j).bound_den);
    CHECK(a.set(j).burn_in == b.set(j).burn_in);
  }
}

TEST_CASE("members query respects limits and unknown indices fail") {
  const SeparatedFamily fam = SeparatedFamily::build({{1, 1}}, 1000);
  CHECK(fam.members(1, 0).empty());
  CHECK_THROWS_AS(fam.set(2), validation_error);
  CHECK_THROWS_AS(fam.members(0, 10), validation_error);
}

TEST_CASE("horizon too small fails loudly") {
  CHECK_THROWS_AS(SeparatedFamily::build({{1, 1}}, 2), validation_error);
}
