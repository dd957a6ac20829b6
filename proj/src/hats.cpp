#include "inbl/hats.hpp"

#include "inbl/errors.hpp"

#include <string>

namespace inbl {
namespace {

void require_grid(const ReferenceSystem& bob_ref, const DyadicSample& s) {
  if (s.scale() != bob_ref.n_bits()) {
    throw ReferenceMismatch("hat sample on the 2^-" + std::to_string(s.scale()) +
                            " grid but Bob's reference has N = " +
                            std::to_string(bob_ref.n_bits()));
  }
}

DyadicSample subtract(const DyadicSample& a, const DyadicSample& b, OpCounter* ops) {
  if (ops) ++ops->additions;
  return a - b;
}

}  // namespace

HatState HatState::draw(Number k) const {
  require_number_in_range(k, ref_.n_bits());
  if (removed_.contains(k)) {
    throw ProtocolError("number " + std::to_string(k) + " was already drawn from this hat");
  }
  HatState next = *this;
  next.removed_.insert(k);
  return next;
}

DyadicSample HatState::sample(Clock t, OpCounter* ops) const {
  DyadicSample value = universe_sample(ref_, t, ops);
  for (const Number k : removed_) {
    value = subtract(value, product_string_sample(ref_, k, t, ops), ops);
  }
  return value;
}

SampleStream stream_of(HatState hat) {
  return [hat = std::move(hat)](Clock t) { return hat.sample(t); };
}

std::pair<HatState, HatState> setup_hats(const ReferenceSystem& ref) {
  return {HatState(ref), HatState(ref)};
}

HatState draw_number(const HatState& hat, Number k) { return hat.draw(k); }

DyadicSample hat_sample(const HatState& hat, Clock t, OpCounter* ops) {
  return hat.sample(t, ops);
}

SingleDecision decide_single_draw(const ReferenceSystem& bob_ref, const SampleStream& hat1,
                                  const SampleStream& hat2, OpCounter* ops) {
  constexpr Clock t = 1;
  const DyadicSample bob = universe_sample(bob_ref, t, ops);
  const DyadicSample s1 = hat1(t);
  const DyadicSample s2 = hat2(t);
  require_grid(bob_ref, s1);
  require_grid(bob_ref, s2);

  // Zero difference marks the intact hat; |G^(k)| = 2^-r(k) > 0 at every clock.
  DyadicSample d1 = subtract(bob, s1, ops);
  DyadicSample d2 = subtract(bob, s2, ops);
  if (d1.is_zero() && d2.is_zero()) {
    throw ProtocolError("both hats match Bob's universe: no number was drawn");
  }
  if (!d1.is_zero() && !d2.is_zero()) {
    throw ReferenceMismatch("neither hat matches Bob's universe");
  }
  if (d1.is_zero()) return {HatId::Hat2, t, std::move(d2)};
  return {HatId::Hat1, t, std::move(d1)};
}

DoubleOutcome decide_double_draw(const ReferenceSystem& bob_ref, Number p, Number q,
                                 const SampleStream& hat1, const SampleStream& hat2,
                                 Clock max_clocks, OpCounter* ops) {
  require_number_in_range(p, bob_ref.n_bits());
  require_number_in_range(q, bob_ref.n_bits());
  if (p == q) {
    throw ArgumentError("p and q must differ, got " + std::to_string(p) + " twice");
  }
  if (max_clocks < 1) throw ArgumentError("max_clocks must be at least 1");

  for (Clock t = 1; t <= max_clocks; ++t) {
    const DyadicSample universe = universe_sample(bob_ref, t, ops);
    const DyadicSample without_p =
        subtract(universe, product_string_sample(bob_ref, p, t, ops), ops);
    const DyadicSample without_q =
        subtract(universe, product_string_sample(bob_ref, q, t, ops), ops);

    const DyadicSample s1 = hat1(t);
    require_grid(bob_ref, s1);
    const DyadicSample d_p = subtract(s1, without_p, ops);
    const DyadicSample d_q = subtract(s1, without_q, ops);

    if (!d_p.is_zero() && !d_q.is_zero()) {
      throw ReferenceMismatch("hat 1 matches neither U^(p) nor U^(q) at clock " +
                              std::to_string(t));
    }
    if (d_p.is_zero() && d_q.is_zero()) continue;  // G^p(t) == G^q(t): inconclusive

    const bool hat1_lost_p = d_p.is_zero();
    const DyadicSample s2 = hat2(t);
    require_grid(bob_ref, s2);
    if (!subtract(s2, hat1_lost_p ? without_q : without_p, ops).is_zero()) {
      throw ProtocolError("hat 2 is not missing the other number at clock " +
                          std::to_string(t));
    }
    return DoubleDecision{hat1_lost_p ? p : q, hat1_lost_p ? q : p, t};
  }
  return Undecided{max_clocks};
}

}  // namespace inbl
