#include <doctest.h>

#include "lindyn/operator_spec.hpp"
#include "test_support.hpp"

using namespace lindyn;

namespace {

Schedule canonical_with_table(int k_max, std::vector<std::int64_t> tau) {
  Schedule s = Schedule::canonical(k_max);
  s.tau.kind = TauRule::Kind::Table;
  s.tau.table = std::move(tau);
  return s;
}

}  // namespace

TEST_CASE("canonical block boundaries") {
  const OperatorSpec spec = OperatorSpec::derive(canonical_with_table(2, {5, 6}));
  CHECK(spec.block_start(1) == 8);
  CHECK(spec.block_start(2) == 72);
  CHECK(spec.block_start(3) == 584);
  CHECK(spec.block_start(4) == 1096);
  CHECK(spec.horizon_coord() == 1096);
  CHECK(spec.num_blocks() == 4);
}

TEST_CASE("parent map and depth") {
  const OperatorSpec spec = OperatorSpec::derive(canonical_with_table(2, {5, 6}));
  CHECK(spec.parent(3) == 1);  // block 3 sits in generation 2, offset 1
  CHECK(spec.parent(1) == 0);
  CHECK(spec.parent(2) == 0);
  CHECK(spec.depth_to_root(0) == 0);
  CHECK(spec.depth_to_root(1) == 1);
  CHECK(spec.depth_to_root(3) == 2);
}

TEST_CASE("generation constraint examples") {
  // head 1, tail 1, block 8: 2*1 + 1 < 8 passes.
  CHECK_NOTHROW(Schedule::geometric(8, 2).validate());
  CHECK_NOTHROW(Schedule::geometric(4, 3).validate());
  CHECK_THROWS_AS(Schedule::geometric(3, 2).validate(), validation_error);
  CHECK_THROWS_AS(Schedule::geometric(5, 2).validate(), validation_error);
}

TEST_CASE("explicit schedule validation names the violated constraint") {
  Schedule s;
  s.kind = ScheduleKind::Explicit;
  s.k_max = 1;
  s.generations = {{8, 1, 1}, {64, 8, 8}};
  s.tau.kind = TauRule::Kind::Table;
  s.tau.table = {5};
  CHECK_NOTHROW(s.validate());

  Schedule bad_ratio = s;
  bad_ratio.generations[1] = {64, 9, 8};  // head/block ratio drifts
  CHECK_THROWS_WITH_AS(bad_ratio.validate(),
                       doctest::Contains("head_len/block_len"), validation_error);

  Schedule bad_multiple = s;
  bad_multiple.generations[1] = {24, 3, 3};  // 24 not a multiple of 16
  CHECK_THROWS_WITH_AS(bad_multiple.validate(),
                       doctest::Contains("multiple"), validation_error);

  Schedule bad_room = s;
  bad_room.generations[0] = {8, 4, 2};  // 2*2 + 4 >= 8
  CHECK_THROWS_WITH_AS(bad_room.validate(),
                       doctest::Contains("2*tail_len + head_len"), validation_error);

  Schedule bad_tau = s;
  bad_tau.tau.table = {0};
  CHECK_THROWS_AS(bad_tau.validate(), validation_error);
  bad_tau.tau.table = {5, 5};
  CHECK_THROWS_AS(bad_tau.validate(), validation_error);
}

TEST_CASE("weight table branches") {
  const OperatorSpec spec = OperatorSpec::derive(canonical_with_table(2, {5, 6}));
  CHECK(spec.weight(1) == Dyadic::pow2(-1));
  CHECK(spec.weight(5) == Dyadic(1));
  CHECK(spec.weight(6) == Dyadic::pow2(-1));
  CHECK(spec.weight(7) == Dyadic(2));
  CHECK_THROWS_AS(spec.weight(0), validation_error);
  CHECK_THROWS_AS(spec.weight(8), validation_error);  // block boundary
  CHECK_THROWS_AS(spec.weight(2000), horizon_error);
}

TEST_CASE("interior product law") {
  const OperatorSpec spec = OperatorSpec::derive(canonical_with_table(3, {5, 6, 7, 9}));
  CHECK(spec.interior_product(0) == Dyadic::pow2(-1));  // (1/2)(1)(1)(1)(1)(1/2)(2)
  CHECK(spec.interior_product(1) == Dyadic::pow2(-8));
  for (std::size_t n = 0; n < spec.num_blocks(); ++n) {
    CHECK(spec.interior_product(n) == Dyadic::pow2(-spec.head_len(n)));
  }
}

TEST_CASE("weight prefix closed form matches direct summation") {
  const OperatorSpec spec = OperatorSpec::derive(canonical_with_table(2, {5, 6}));
  for (std::size_t n = 0; n < spec.num_blocks(); ++n) {
    std::int64_t direct = 0;
    CHECK(spec.weight_prefix_exp(n, spec.block_start(n)) == 0);
    for (std::uint64_t i = spec.block_start(n) + 1; i < spec.block_end(n); ++i) {
      direct += spec.weight_exp(i);
      CHECK(spec.weight_prefix_exp(n, i) == direct);
    }
  }
}

TEST_CASE("coupling exponents beyond horizon fault") {
  const OperatorSpec spec = OperatorSpec::derive(canonical_with_table(2, {5, 6}));
  CHECK(spec.tau(0) == 5);
  CHECK(spec.tau(1) == 6);
  CHECK_THROWS_AS(spec.tau(2), horizon_error);
  CHECK(spec.coupling(1) == Dyadic::pow2(-5));
  CHECK(spec.coupling(3) == Dyadic::pow2(-6));
  CHECK_THROWS_AS(spec.coupling(0), validation_error);
}
