#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace ecsafe {

using Integer = mpz_class;

/// Lowercase big-endian hex without prefix; negative values carry a leading '-'.
std::string to_hex(const Integer& v);
Integer from_hex(std::string_view text);
Integer from_dec(std::string_view text);

std::size_t bit_length(const Integer& v);
Integer isqrt(const Integer& v);
bool is_perfect_square(const Integer& v);

/// Non-negative residue of v modulo m (m > 0).
Integer mod(const Integer& v, const Integer& m);

/// v must fit in 64 bits.
std::uint64_t to_u64(const Integer& v);
Integer from_u64(std::uint64_t v);

inline Integer pow2(unsigned k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, k);
  return r;
}

}  // namespace ecsafe
