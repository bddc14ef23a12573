#include <doctest.h>

#include "lindyn/io_json.hpp"
#include "test_support.hpp"

using namespace lindyn;
using test::Rng;

TEST_CASE("dyadic serialization round trip is bit-exact") {
  Rng rng(0x5eed0501);
  for (int i = 0; i < 100; ++i) {
    const Dyadic d = test::random_dyadic(rng, 40);
    const Dyadic back = dyadic_from_json(dyadic_to_json(d));
    CHECK(back == d);
    CHECK(back.mantissa() == d.mantissa());
    CHECK(back.exponent() == d.exponent());
  }
  const json j = dyadic_to_json(Dyadic::scaled(3, -4));
  CHECK(j.at("m").get<std::string>() == "3");
  CHECK(j.at("e").get<std::int64_t>() == -4);
}

TEST_CASE("vector serialization round trip is bit-exact") {
  Rng rng(0x5eed0502);
  for (int i = 0; i < 50; ++i) {
    const FinVec v = test::random_finvec(rng, 100000, 12);
    CHECK(finvec_from_json(finvec_to_json(v)) == v);
  }
  CHECK(finvec_to_json(FinVec()).is_array());
  CHECK(finvec_from_json(json::array()).is_zero());
}

TEST_CASE("schedule serialization round trip") {
  Schedule s = Schedule::geometric(4, 5);
  s.recurrence = RecurrenceKind::Matched;
  s.tau.kind = TauRule::Kind::Table;
  s.tau.table = {3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18};
  const Schedule back = schedule_from_json(schedule_to_json(s));
  CHECK(back.kind == s.kind);
  CHECK(back.beta == s.beta);
  CHECK(back.k_max == s.k_max);
  CHECK(back.recurrence == s.recurrence);
  CHECK(back.tau.table == s.tau.table);

  Schedule e;
  e.kind = ScheduleKind::Explicit;
  e.k_max = 1;
  e.generations = {{8, 1, 1}, {64, 8, 8}};
  e.tau.kind = TauRule::Kind::Synthesized;
  e.tau.synth_limit = 2;
  const Schedule eb = schedule_from_json(schedule_to_json(e));
  CHECK(eb.generations.size() == 2);
  CHECK(eb.generations[1].block_len == 64);
  CHECK(eb.tau.kind == TauRule::Kind::Synthesized);
  CHECK(eb.tau.synth_limit == 2);
}

TEST_CASE("built-in spec names") {
  const OperatorSpec canonical = load_spec("canonical");
  CHECK(canonical.num_blocks() == 8);
  CHECK(canonical.block_start(4) == 1096);
  const OperatorSpec canonical2 = load_spec("canonical", 2);
  CHECK(canonical2.num_blocks() == 4);
  CHECK_THROWS_AS(load_spec("/nonexistent/path.json"), validation_error);
}
