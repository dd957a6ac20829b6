#include "inbl/errors.hpp"
#include "inbl/hats.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <random>

using namespace inbl;

TEST_CASE("setup gives two identical universes") {
  const ReferenceSystem ref(12, 42);
  const auto [hat1, hat2] = setup_hats(ref);
  CHECK(hat1.removed().empty());
  CHECK(hat2.removed().empty());
  for (Clock t = 0; t < 100; ++t) {
    const DyadicSample s = hat_sample(hat1, t);
    CHECK(s == hat_sample(hat2, t));
    CHECK(s == universe_sample(ref, t));
    CHECK(s == universe_sum_oracle(ref, t));
  }
}

TEST_CASE("drawing subtracts the product string") {
  const ReferenceSystem ref(8, 5);
  const HatState full(ref);
  const HatState less = draw_number(full, 77);
  CHECK(less.removed() == std::set<Number>{77});
  CHECK(full.removed().empty());
  for (Clock t = 0; t < 50; ++t) {
    CHECK(hat_sample(less, t) == hat_sample(full, t) - product_string_sample(ref, 77, t));
    CHECK(hat_sample(less, t).numerator() ==
          testing::universe_numerator_by_enumeration(ref, t, 77));
  }
  CHECK_THROWS_AS(draw_number(less, 77), ProtocolError);
  CHECK_THROWS_AS(draw_number(full, 256), ArgumentError);
}

TEST_CASE("N=32 hat missing 2 is the universe minus G^(2)") {
  const ReferenceSystem ref(32, 2000);
  const HatState hat = draw_number(HatState(ref), 2);
  for (Clock t = 1; t <= 200; ++t) {
    const DyadicSample g = product_string_sample(ref, 2, t);
    CHECK(g.magnitude_exponent() == 31);
    CHECK(hat_sample(hat, t) == universe_sample(ref, t) - g);
  }
}

TEST_CASE("N=1 hats reduce to single waves") {
  const ReferenceSystem ref(1, 17);
  const HatState without_one = HatState(ref).draw(1);
  const HatState without_zero = HatState(ref).draw(0);
  for (Clock t = 0; t < 30; ++t) {
    CHECK(hat_sample(without_one, t) == rtw_sample(ref, 1, Role::Low, t));
    CHECK(hat_sample(without_zero, t) == rtw_sample(ref, 1, Role::High, t));
  }
}

TEST_CASE("single-draw decision") {
  SUBCASE("N=3, k=5 from hat 2") {
    const ReferenceSystem ref(3, 9);
    const auto [hat1, hat2] = setup_hats(ref);
    const SingleDecision d =
        decide_single_draw(ref, stream_of(hat1), stream_of(draw_number(hat2, 5)));
    CHECK(d.deficient_hat == HatId::Hat2);
    CHECK(d.clocks_used == 1);
    CHECK(d.witness.magnitude_exponent() == 1);
    CHECK(d.witness == product_string_sample(ref, 5, 1));
  }
  SUBCASE("nothing drawn") {
    const ReferenceSystem ref(8, 1);
    const auto [hat1, hat2] = setup_hats(ref);
    CHECK_THROWS_AS(decide_single_draw(ref, stream_of(hat1), stream_of(hat2)), ProtocolError);
  }
  SUBCASE("Bob holds a different reference") {
    const ReferenceSystem alice(32, 1);
    const auto [hat1, hat2] = setup_hats(alice);
    CHECK_THROWS_AS(decide_single_draw(ReferenceSystem(32, 2), stream_of(hat1.draw(3)),
                                       stream_of(hat2)),
                    ReferenceMismatch);
    CHECK_THROWS_AS(decide_single_draw(ReferenceSystem(16, 1), stream_of(hat1.draw(3)),
                                       stream_of(hat2)),
                    ReferenceMismatch);
  }
  SUBCASE("exhaustive over N = 1, 2, 3") {
    for (unsigned n = 1; n <= 3; ++n) {
      for (Seed seed = 0; seed < 8; ++seed) {
        const ReferenceSystem ref(n, seed);
        for (Number k = 0; k <= ref.max_number(); ++k) {
          for (HatId from : {HatId::Hat1, HatId::Hat2}) {
            auto [hat1, hat2] = setup_hats(ref);
            if (from == HatId::Hat1) hat1 = hat1.draw(k);
            else hat2 = hat2.draw(k);
            const SingleDecision d = decide_single_draw(ref, stream_of(hat1), stream_of(hat2));
            CHECK(d.deficient_hat == from);
            CHECK(d.clocks_used == 1);
            CHECK(d.witness.magnitude_exponent() == static_cast<int>(zero_bit_count(k, n)));
          }
        }
      }
    }
  }
  SUBCASE("op count of one decision clock") {
    const ReferenceSystem ref(16, 3);
    OpCounter ops;
    decide_single_draw(ref, stream_of(HatState(ref).draw(4)), stream_of(HatState(ref)), &ops);
    CHECK(ops.arithmetic() == 2 * 16 - 1 + 2);
  }
}

namespace {

DoubleOutcome run_double(unsigned n, Seed seed, Number p, Number q, bool p_from_hat1,
                         Clock max_clocks = kDefaultMaxClocks) {
  const ReferenceSystem ref(n, seed);
  const auto [hat1, hat2] = setup_hats(ref);
  return decide_double_draw(ref, p, q, stream_of(hat1.draw(p_from_hat1 ? p : q)),
                            stream_of(hat2.draw(p_from_hat1 ? q : p)), max_clocks);
}

}  // namespace

TEST_CASE("double-draw decision") {
  SUBCASE("unequal zero counts decide at the first clock") {
    for (Seed seed = 0; seed < 300; ++seed) {
      const bool p_from_hat1 = seed % 2 == 0;
      const DoubleOutcome out = run_double(32, seed, 3, 1, p_from_hat1, 1);
      REQUIRE(std::holds_alternative<DoubleDecision>(out));
      const auto& d = std::get<DoubleDecision>(out);
      CHECK(d.clocks_used == 1);
      CHECK(d.hat1_missing == (p_from_hat1 ? 3u : 1u));
      CHECK(d.hat2_missing == (p_from_hat1 ? 1u : 3u));
    }
  }
  SUBCASE("equal zero counts decide correctly, sometimes later") {
    Clock longest = 0;
    for (Seed seed = 0; seed < 300; ++seed) {
      const bool p_from_hat1 = seed % 3 != 0;
      const DoubleOutcome out = run_double(32, seed, 2, 1, p_from_hat1);
      REQUIRE(std::holds_alternative<DoubleDecision>(out));
      const auto& d = std::get<DoubleDecision>(out);
      CHECK(d.hat1_missing == (p_from_hat1 ? 2u : 1u));
      longest = std::max(longest, d.clocks_used);
    }
    CHECK(longest > 1);
  }
  SUBCASE("the decision clock is the first clock where G^p and G^q differ") {
    const ReferenceSystem ref(32, 77);
    const DoubleOutcome out = run_double(32, 77, 2, 1, true);
    const Clock used = std::get<DoubleDecision>(out).clocks_used;
    for (Clock t = 1; t < used; ++t) {
      CHECK(product_string_sample(ref, 2, t) == product_string_sample(ref, 1, t));
    }
    CHECK(product_string_sample(ref, 2, used) != product_string_sample(ref, 1, used));
  }
  SUBCASE("undecided when the budget runs out") {
    std::size_t undecided = 0;
    for (Seed seed = 0; seed < 400; ++seed) {
      const DoubleOutcome out = run_double(8, seed, 2, 1, true, 1);
      if (const auto* u = std::get_if<Undecided>(&out)) {
        CHECK(u->clocks_exhausted == 1);
        ++undecided;
      }
    }
    // Binomial(400, 1/2): 3 sigma = 30.
    CHECK(undecided > 170);
    CHECK(undecided < 230);
  }
  SUBCASE("argument and protocol errors") {
    const ReferenceSystem ref(8, 1);
    const auto [hat1, hat2] = setup_hats(ref);
    const auto s1 = stream_of(hat1.draw(5));
    const auto s2 = stream_of(hat2.draw(6));
    CHECK_THROWS_AS(decide_double_draw(ref, 5, 5, s1, s2), ArgumentError);
    CHECK_THROWS_AS(decide_double_draw(ref, 5, 256, s1, s2), ArgumentError);
    CHECK_THROWS_AS(decide_double_draw(ref, 5, 6, s1, s2, 0), ArgumentError);
    CHECK_THROWS_AS(decide_double_draw(ReferenceSystem(8, 2), 5, 6, s1, s2), ReferenceMismatch);
    // Hat 2 also lost 5 instead of 6.
    CHECK_THROWS_AS(decide_double_draw(ref, 5, 6, s1, stream_of(hat2.draw(5))), ProtocolError);
  }
}

TEST_CASE("exclusivity: one of the two differences is always zero") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const unsigned n = 2 + gen() % 40;
    const ReferenceSystem ref(n, gen());
    const Number mask = (Number{1} << n) - 1;
    const Number p = gen() & mask;
    Number q = gen() & mask;
    if (q == p) q = p ^ 1;
    const HatState hat1 = HatState(ref).draw(p);
    for (Clock t = 1; t <= 20; ++t) {
      const DyadicSample u = universe_sample(ref, t);
      const DyadicSample d_p = hat_sample(hat1, t) - (u - product_string_sample(ref, p, t));
      const DyadicSample d_q = hat_sample(hat1, t) - (u - product_string_sample(ref, q, t));
      CHECK(d_p.is_zero());
      CHECK(d_q == product_string_sample(ref, q, t) - product_string_sample(ref, p, t));
      if (zero_bit_count(p, n) != zero_bit_count(q, n)) CHECK_FALSE(d_q.is_zero());
    }
  }
}
