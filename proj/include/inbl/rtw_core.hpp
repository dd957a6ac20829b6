#pragma once

#include "inbl/dyadic.hpp"

#include <cstdint>

namespace inbl {

using Clock = std::uint64_t;
using Number = std::uint64_t;
using Seed = std::uint64_t;

inline constexpr unsigned kMaxBits = 64;
inline constexpr unsigned kMaxOracleBits = 16;

enum class Role : std::uint8_t { High = 1, Low = 0 };
enum class Sign : int { Minus = -1, Plus = 1 };

constexpr int to_int(Sign s) noexcept { return static_cast<int>(s); }

/// Arithmetic work done while evaluating signals. Callers own the counter;
/// nothing is accumulated globally.
struct OpCounter {
  std::uint64_t additions = 0;       // additions and subtractions
  std::uint64_t multiplications = 0;
  std::uint64_t stream_samples = 0;  // reference-noise reads

  std::uint64_t arithmetic() const noexcept { return additions + multiplications; }
  friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

/// The 2N reference random telegraph waves H_1..H_N, L_1..L_N shared by
/// Alice and Bob. Each stream redraws a uniform sign every clock period;
/// a sign is a keyed pseudorandom function of (seed, bit, role, clock), so
/// any clock can be read in O(1) without replaying the stream.
class ReferenceSystem {
 public:
  ReferenceSystem(unsigned n_bits, Seed seed);

  unsigned n_bits() const noexcept { return n_bits_; }
  Seed seed() const noexcept { return seed_; }

  /// Largest representable number, 2^N - 1.
  Number max_number() const noexcept;

  Sign sign(unsigned bit, Role role, Clock t) const;

  friend bool operator==(const ReferenceSystem& a, const ReferenceSystem& b) {
    return a.n_bits_ == b.n_bits_ && a.seed_ == b.seed_;
  }

 private:
  std::uint64_t stream_key(unsigned bit, Role role) const noexcept;

  unsigned n_bits_;
  Seed seed_;
  std::uint64_t key_;
};

/// Role selected by bit `bit` (1 = least significant) of k.
constexpr Role role_of(Number k, unsigned bit) noexcept {
  return ((k >> (bit - 1)) & 1u) ? Role::High : Role::Low;
}

Sign sign_sample(const ReferenceSystem& ref, unsigned bit, Role role, Clock t);

/// H_bit(t) in {+-1} or L_bit(t) in {+-1/2}.
DyadicSample rtw_sample(const ReferenceSystem& ref, unsigned bit, Role role, Clock t);

/// Product string G^(k)(t) = prod_j G_j^(k)(t); |value| = 2^-r(k).
DyadicSample product_string_sample(const ReferenceSystem& ref, Number k, Clock t,
                                   OpCounter* ops = nullptr);

/// Universe U(t) = prod_i [H_i(t) + L_i(t)], N additions and N-1 multiplications.
DyadicSample universe_sample(const ReferenceSystem& ref, Clock t, OpCounter* ops = nullptr);

/// Sum of all 2^N product strings, evaluated term by term. Refuses N > 16.
DyadicSample universe_sum_oracle(const ReferenceSystem& ref, Clock t);

/// Number of zero bits of k in its N-bit representation.
unsigned zero_bit_count(Number k, unsigned n_bits);

/// sign(u) * ln(2^N |u|), with 0 for u == 0. Plot emission only.
double log_distort(const DyadicSample& u, unsigned n_bits);

void require_number_in_range(Number k, unsigned n_bits);

}  // namespace inbl
