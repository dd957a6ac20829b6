#pragma once

// Test-only reference computations. They read the raw reference signs and do
// their own fixed-width arithmetic, sharing no code with the dyadic
// evaluation paths they check.

#include "inbl/rtw_core.hpp"

#include <cstdint>

namespace inbl::testing {

// 2^N * G^(k)(t) as a machine integer; valid for N <= 62.
inline std::int64_t product_numerator(const ReferenceSystem& ref, Number k, Clock t) {
  std::int64_t acc = 1;
  for (unsigned j = 1; j <= ref.n_bits(); ++j) {
    const bool high = (k >> (j - 1)) & 1u;
    const int s = to_int(ref.sign(j, high ? Role::High : Role::Low, t));
    acc *= high ? 2 * s : s;
  }
  return acc;
}

// 2^N * sum over all k of G^(k)(t); N <= 20 keeps this affordable.
inline std::int64_t universe_numerator_by_enumeration(const ReferenceSystem& ref, Clock t,
                                                      Number skip = ~Number{0}) {
  std::int64_t sum = 0;
  const Number count = Number{1} << ref.n_bits();
  for (Number k = 0; k < count; ++k) {
    if (k != skip) sum += product_numerator(ref, k, t);
  }
  return sum;
}

inline unsigned count_zero_bits(Number k, unsigned n_bits) {
  unsigned zeros = 0;
  for (unsigned j = 0; j < n_bits; ++j) zeros += ((k >> j) & 1u) == 0;
  return zeros;
}

}  // namespace inbl::testing
