#pragma once

#include "inbl/dyadic.hpp"
#include "inbl/rtw_core.hpp"

#include <cstdint>
#include <functional>
#include <set>
#include <utility>
#include <variant>

namespace inbl {

/// A universe with some numbers drawn out of it.
class HatState {
 public:
  explicit HatState(ReferenceSystem ref) : ref_(ref) {}

  const ReferenceSystem& reference() const noexcept { return ref_; }
  const std::set<Number>& removed() const noexcept { return removed_; }

  /// Copy of this hat with k removed. Throws ProtocolError if k was already drawn.
  HatState draw(Number k) const;

  /// U(t) - sum of G^(k)(t) over removed k.
  DyadicSample sample(Clock t, OpCounter* ops = nullptr) const;

  friend bool operator==(const HatState&, const HatState&) = default;

 private:
  ReferenceSystem ref_;
  std::set<Number> removed_;
};

enum class HatId : std::uint8_t { Hat1 = 1, Hat2 = 2 };

constexpr HatId other(HatId h) noexcept { return h == HatId::Hat1 ? HatId::Hat2 : HatId::Hat1; }

/// Pull-based view of a hat: the decider asks for the sample at a clock.
using SampleStream = std::function<DyadicSample(Clock)>;

SampleStream stream_of(HatState hat);

struct SingleDecision {
  HatId deficient_hat;
  Clock clocks_used;
  DyadicSample witness;  // Bob's universe minus the deficient hat at the deciding clock
};

struct DoubleDecision {
  Number hat1_missing;
  Number hat2_missing;
  Clock clocks_used;
  friend bool operator==(const DoubleDecision&, const DoubleDecision&) = default;
};

struct Undecided {
  Clock clocks_exhausted;
  friend bool operator==(const Undecided&, const Undecided&) = default;
};

using DoubleOutcome = std::variant<DoubleDecision, Undecided>;

inline constexpr Clock kDefaultMaxClocks = 64;

std::pair<HatState, HatState> setup_hats(const ReferenceSystem& ref);

HatState draw_number(const HatState& hat, Number k);

DyadicSample hat_sample(const HatState& hat, Clock t, OpCounter* ops = nullptr);

/// Problem 1: which hat is missing a (secret) number. Decides at clock 1.
SingleDecision decide_single_draw(const ReferenceSystem& bob_ref, const SampleStream& hat1,
                                  const SampleStream& hat2, OpCounter* ops = nullptr);

/// Problem 2: p and q were drawn one from each hat; find which went where.
/// Anchors on hat1: per clock, d_p = hat1 - (U - G^p) and d_q = hat1 - (U - G^q).
/// The zero difference names hat1's missing number once the other one is nonzero.
/// hat2 is read once, at the deciding clock, to confirm it lost the other number.
DoubleOutcome decide_double_draw(const ReferenceSystem& bob_ref, Number p, Number q,
                                 const SampleStream& hat1, const SampleStream& hat2,
                                 Clock max_clocks = kDefaultMaxClocks, OpCounter* ops = nullptr);

}  // namespace inbl
