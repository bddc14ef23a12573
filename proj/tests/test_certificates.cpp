#include <doctest.h>

#include "lindyn/certificates.hpp"
#include "test_support.hpp"

using namespace lindyn;
using test::Rng;

namespace {

OperatorSpec canonical_spec(int k_max = 2) {
  Schedule s = Schedule::canonical(k_max);
  s.tau.kind = TauRule::Kind::Table;
  std::vector<std::int64_t> t = {5, 6, 7, 9};
  t.resize(std::max<std::size_t>(2, generation_start(k_max)));
  for (std::size_t i = 4; i < t.size(); ++i) t[i] = 9 + 2 * static_cast<std::int64_t>(i);
  s.tau.table = std::move(t);
  return OperatorSpec::derive(s);
}

OperatorSpec toy_spec(int k_max = 3) {
  Schedule s = Schedule::geometric(4, k_max);
  s.tau.kind = TauRule::Kind::Affine;
  s.tau.offset = 1;
  s.tau.step = 1;
  return OperatorSpec::derive(s);
}

}  // namespace

TEST_CASE("block eigen periodicity") {
  const OperatorSpec spec = canonical_spec();
  const std::vector<std::uint64_t> coords0 = {0, 3, 7};
  CHECK(eigen_period_check(spec, 0, coords0).pass);
  const std::vector<std::uint64_t> coords1 = {8, 40, 71};
  CHECK(eigen_period_check(spec, 1, coords1).pass);
  // Direct instance: sixteen applications scale e_3 by exactly 1/4.
  FinVec e3 = FinVec::basis(3);
  for (int i = 0; i < 16; ++i) e3 = apply_forward(spec, e3);
  CHECK(e3 == FinVec::basis(3, Dyadic::pow2(-2)));
}

TEST_CASE("matched recurrence gives scalar one") {
  Schedule s = Schedule::canonical(1);
  s.recurrence = RecurrenceKind::Matched;
  s.tau.kind = TauRule::Kind::Table;
  s.tau.table = {5};
  const OperatorSpec spec = OperatorSpec::derive(s);
  const std::vector<std::uint64_t> coords = {8, 20, 71};
  CHECK(eigen_period_check(spec, 1, coords).pass);
  FinVec e9 = FinVec::basis(9);
  for (int i = 0; i < 128; ++i) e9 = apply_forward(spec, e9);
  CHECK(e9 == FinVec::basis(9));
}

TEST_CASE("section periodicity") {
  const OperatorSpec spec = canonical_spec();
  Rng rng(0x5eed0301);
  CHECK(section_period_check(spec, FinVec(), 0).pass);
  for (int i = 0; i < 10; ++i) {
    CHECK(section_period_check(spec, test::random_finvec(rng, 8, 4), 0).pass);
    CHECK(section_period_check(spec, test::random_finvec(rng, 72, 6), 1).pass);
  }
  CHECK_THROWS_AS(section_period_check(spec, FinVec::basis(100), 0), validation_error);
}

TEST_CASE("invertibility bounds") {
  const OperatorSpec spec = canonical_spec();
  const InvertibilityReport rep = invertibility_check(spec, 3);
  CHECK(rep.pass);
  // Chain sum at block 3: tau table (5, 6) gives exactly 2^-6 + 2^-11.
  Dyadic expected = Dyadic::pow2(-6) + Dyadic::pow2(-11);
  Dyadic sum;
  Dyadic prod(1);
  std::size_t a = 3;
  while (a != 0) {
    prod *= spec.coupling(a);
    a = spec.parent(a);
    sum += prod;
  }
  CHECK(sum == expected);
  CHECK(sum <= Dyadic(2));
}

TEST_CASE("decay certificate for basis vectors") {
  const OperatorSpec spec = canonical_spec();
  SUBCASE("zero vector") {
    const DecayCertificate cert = decay_certificate(spec, FinVec());
    CHECK(cert.k0 == 0);
  }
  SUBCASE("block zero") {
    const DecayCertificate cert = decay_certificate(spec, FinVec::basis(0));
    CHECK(cert.slope_num == 1);
    CHECK(cert.slope_den == 24);
    CHECK(cert.period_factor_dominates);
    CHECK(cert.window_hi - cert.window_lo == 16);
    // Recheck the certified window from scratch.
    FinVec y = FinVec::basis(0);
    for (std::int64_t k = 0; k < cert.window_hi; ++k) {
      if (k >= cert.k0) {
        CHECK(le_pow2_rational(y.norm_l1(), -k, 24));
      }
      y = apply_forward(spec, y);
    }
  }
  SUBCASE("block one basis") {
    const DecayCertificate cert = decay_certificate(spec, FinVec::basis(8));
    CHECK(cert.section_block == 1);
    CHECK(cert.window_hi - cert.window_lo == 128);
    CHECK(cert.k0 >= 0);
  }
}

TEST_CASE("decay certificates are sound on random later steps") {
  const OperatorSpec spec = canonical_spec();
  Rng rng(0x5eed0302);
  const FinVec y = test::random_finvec(rng, 72, 4);
  const DecayCertificate cert = decay_certificate(spec, y);
  for (int i = 0; i < 40; ++i) {
    const std::int64_t k = cert.k0 + rng.range(0, 600);
    const FinVec moved = apply_power(spec, y, k);
    CHECK(le_pow2_rational(moved.norm_l1(), -cert.slope_num * k, cert.slope_den));
  }
}

TEST_CASE("generation basis decay certificate") {
  const OperatorSpec spec = toy_spec();
  const BasisDecayCertificate cert = basis_decay_certificate(spec, 0, 1);
  CHECK(cert.generation >= 1);
  CHECK(cert.blocks.size() == 1);
  // The gate constant is a recomputed sup, not an assumption.
  CHECK(cert.early_orbit_sup > Dyadic(0));
  const GenerationParams g = spec.generation_params(cert.generation);
  CHECK((cert.early_orbit_sup + Dyadic(1)).pow(3) < Dyadic::pow2(g.head_len));
}

TEST_CASE("generation search fails loudly past the horizon") {
  const OperatorSpec spec = toy_spec(1);
  CHECK_THROWS_AS(basis_decay_certificate(spec, 0, 64), horizon_error);
}

TEST_CASE("inverse contraction") {
  const OperatorSpec spec = canonical_spec();
  CHECK(inverse_contraction_check(spec, FinVec::basis(5)).pass);
  CHECK(inverse_contraction_check(spec, FinVec()).pass);
  const FinVec inv8 = apply_inverse(spec, FinVec::basis(8));
  CHECK(inv8.norm_l1() == Dyadic::pow2(-5) + Dyadic(1));
  CHECK(inverse_contraction_check(spec, FinVec::basis(8)).pass);
  Rng rng(0x5eed0303);
  for (int i = 0; i < 100; ++i) {
    CHECK(inverse_contraction_check(spec, test::random_finvec(rng, 1096, 8)).pass);
  }
}

TEST_CASE("cross-block leakage bound") {
  const OperatorSpec spec = canonical_spec();
  SUBCASE("early steps leak nothing") {
    const FinVec img = apply_power(spec, FinVec::basis(40), -30, PowerMode::Iterative);
    CHECK(project_block(spec, img, 0).is_zero());
    for (std::int64_t j = 0; j <= 32; ++j) {
      CHECK(cross_block_check(spec, 0, 1, 1, j, FinVec::basis(40)).pass);
    }
  }
  SUBCASE("one full period") {
    CHECK(cross_block_check(spec, 0, 1, 1, 64, FinVec::basis(8)).pass);
    CHECK(cross_block_check(spec, 0, 2, 3, 64, FinVec::basis(600)).pass);
  }
  SUBCASE("precondition violations") {
    // block 2 reaches the root in one step, so s = 2 is not an exact chain
    CHECK_THROWS_AS(cross_block_check(spec, 0, 2, 2, 4, FinVec::basis(72)),
                    validation_error);
    CHECK_THROWS_AS(cross_block_check(spec, 1, 1, 2, 4, FinVec::basis(72)),
                    validation_error);
  }
}

TEST_CASE("gain profile matches the inverse-orbit oracle and is monomial") {
  const OperatorSpec spec = canonical_spec();
  const GainProfile gp = gain_profile(spec, 0, 40);
  CHECK(gp.min_exp[0] == 0);
  CHECK(gp.min_exp[8] == 1);   // one period multiplies block 0 by -2
  CHECK(gp.min_exp[16] == 2);
  CHECK(gp.floor_ok);
  for (std::int64_t j = 0; j + 16 <= 40; ++j) {
    CHECK(gp.min_exp[static_cast<std::size_t>(j + 16)] ==
          gp.min_exp[static_cast<std::size_t>(j)] + 2);
  }
  // Oracle: compress the true inverse orbit of each basis vector onto the
  // block; at most one surviving coordinate, with the predicted magnitude.
  for (std::int64_t j = 0; j <= 40; ++j) {
    std::int64_t oracle_min = INT64_MAX;
    for (std::uint64_t m = 0; m < 8; ++m) {
      const FinVec moved = apply_power(spec, FinVec::basis(m), -j, PowerMode::Iterative);
      const FinVec inside = project_block(spec, moved, 0);
      REQUIRE(inside.support_size() <= 1);
      REQUIRE(!inside.is_zero());
      const Dyadic c = inside.entries().front().coeff;
      CHECK(c.abs() == Dyadic::pow2(gain_exponent(spec, 0, j, static_cast<std::int64_t>(m))));
      oracle_min = std::min(oracle_min, c.abs().floor_log2_abs());
    }
    CHECK(oracle_min == gp.min_exp[static_cast<std::size_t>(j)]);
  }
}

TEST_CASE("gain profile on the wider block") {
  const OperatorSpec spec = canonical_spec();
  const GainProfile gp = gain_profile(spec, 1, 200);
  CHECK(gp.floor_ok);
  CHECK(gp.period == 128);
  for (std::int64_t j = 0; j + 128 <= 200; ++j) {
    CHECK(gp.min_exp[static_cast<std::size_t>(j + 128)] ==
          gp.min_exp[static_cast<std::size_t>(j)] + 16);
  }
}
