#include "inbl/rtw_core.hpp"

#include "inbl/detail/mix.hpp"
#include "inbl/errors.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace inbl {
namespace {

using detail::kGolden;
using detail::mix64;

void require_bits(unsigned n_bits) {
  if (n_bits < 1 || n_bits > kMaxBits) {
    throw ArgumentError("number of noise-bits must be in [1, 64], got " + std::to_string(n_bits));
  }
}

void require_bit_index(const ReferenceSystem& ref, unsigned bit) {
  if (bit < 1 || bit > ref.n_bits()) {
    throw ArgumentError("bit index " + std::to_string(bit) + " outside [1, " +
                        std::to_string(ref.n_bits()) + "]");
  }
}

// Amplitude of one reference wave in units of 1/2: H -> +-2, L -> +-1.
int half_units(Role role, Sign s) noexcept { return (role == Role::High ? 2 : 1) * to_int(s); }

}  // namespace

ReferenceSystem::ReferenceSystem(unsigned n_bits, Seed seed) : n_bits_(n_bits), seed_(seed) {
  require_bits(n_bits);
  key_ = mix64(mix64(seed ^ 0x6a09e667f3bcc908ULL) + n_bits);
}

Number ReferenceSystem::max_number() const noexcept {
  return n_bits_ == 64 ? ~Number{0} : (Number{1} << n_bits_) - 1;
}

std::uint64_t ReferenceSystem::stream_key(unsigned bit, Role role) const noexcept {
  const std::uint64_t id = (std::uint64_t{bit} << 1) | static_cast<std::uint64_t>(role);
  return mix64(key_ ^ mix64(id * kGolden));
}

Sign ReferenceSystem::sign(unsigned bit, Role role, Clock t) const {
  require_bit_index(*this, bit);
  // Random access into the SplitMix64 sequence rooted at the stream key.
  const std::uint64_t z = mix64(stream_key(bit, role) + (t + 1) * kGolden);
  return (z >> 63) ? Sign::Minus : Sign::Plus;
}

void require_number_in_range(Number k, unsigned n_bits) {
  require_bits(n_bits);
  if (n_bits < 64 && (k >> n_bits) != 0) {
    throw ArgumentError("number " + std::to_string(k) + " outside [0, 2^" +
                        std::to_string(n_bits) + " - 1]");
  }
}

Sign sign_sample(const ReferenceSystem& ref, unsigned bit, Role role, Clock t) {
  return ref.sign(bit, role, t);
}

DyadicSample rtw_sample(const ReferenceSystem& ref, unsigned bit, Role role, Clock t) {
  const Sign s = ref.sign(bit, role, t);
  return DyadicSample::power_of_two(role == Role::High ? 0 : -1, ref.n_bits(), s == Sign::Minus);
}

DyadicSample product_string_sample(const ReferenceSystem& ref, Number k, Clock t,
                                   OpCounter* ops) {
  const unsigned n = ref.n_bits();
  require_number_in_range(k, n);
  BigInt acc = half_units(role_of(k, 1), ref.sign(1, role_of(k, 1), t));
  for (unsigned j = 2; j <= n; ++j) {
    const Role role = role_of(k, j);
    acc *= half_units(role, ref.sign(j, role, t));
  }
  if (ops) {
    ops->stream_samples += n;
    ops->multiplications += n - 1;
  }
  // Product of N half-unit factors is 2^N times the amplitude.
  return {std::move(acc), n};
}

DyadicSample universe_sample(const ReferenceSystem& ref, Clock t, OpCounter* ops) {
  const unsigned n = ref.n_bits();
  BigInt acc;
  for (unsigned i = 1; i <= n; ++i) {
    const int factor = half_units(Role::High, ref.sign(i, Role::High, t)) +
                       half_units(Role::Low, ref.sign(i, Role::Low, t));
    if (i == 1) {
      acc = factor;
    } else {
      acc *= factor;
    }
  }
  if (ops) {
    ops->stream_samples += 2 * n;
    ops->additions += n;
    ops->multiplications += n - 1;
  }
  return {std::move(acc), n};
}

DyadicSample universe_sum_oracle(const ReferenceSystem& ref, Clock t) {
  const unsigned n = ref.n_bits();
  if (n > kMaxOracleBits) {
    throw ArgumentError("brute-force universe oracle refuses N = " + std::to_string(n) +
                        " (2^N product strings); limit is N <= " +
                        std::to_string(kMaxOracleBits));
  }
  DyadicSample sum(0, n);
  for (Number k = 0; k <= ref.max_number(); ++k) {
    sum += product_string_sample(ref, k, t);
  }
  return sum;
}

unsigned zero_bit_count(Number k, unsigned n_bits) {
  require_number_in_range(k, n_bits);
  return n_bits - static_cast<unsigned>(std::popcount(k));
}

double log_distort(const DyadicSample& u, unsigned n_bits) {
  if (u.is_zero()) return 0.0;
  // ln(2^N |num| / 2^scale); logs taken separately so large numerators stay finite.
  const BigInt mag = boost::multiprecision::abs(u.numerator());
  const double ln_mag = std::log(mag.convert_to<double>());
  const double shift = (static_cast<double>(n_bits) - u.scale()) * std::numbers::ln2;
  return u.sign() * (ln_mag + shift);
}

}  // namespace inbl
