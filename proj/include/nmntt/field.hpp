#pragma once
// Modular arithmetic over F_q and transform parameter derivation.

#include <cstdint>
#include <vector>

namespace nmntt {

using FieldElement = std::uint32_t;
using Polynomial = std::vector<FieldElement>;

// Largest supported serial word width. Keeps every Barrett intermediate
// (t * mu < 2^(3L+1)) inside 64 bits.
inline constexpr std::uint32_t kMaxBitWidth = 20;

/// Parameter bundle for length-n cyclic transforms over F_q.
/// Produced by derive_params(); all fields are consistent by construction.
struct NttParams {
  std::uint32_t n = 0;           // transform length, power of two, n >= 2
  FieldElement q = 0;            // prime modulus, q < 2^bit_width, q == 1 (mod n)
  std::uint32_t bit_width = 0;   // serial word width L
  FieldElement omega = 0;        // smallest primitive n-th root of unity mod q
  FieldElement omega_inv = 0;    // omega^-1 mod q
  FieldElement n_inv = 0;        // n^-1 mod q
  std::uint64_t barrett_mu = 0;  // floor(2^(2L) / q)
  std::uint32_t barrett_k = 0;   // reduction shift parameter, == bit_width
};

/// (a + b) mod q. Preconditions: a, b < q.
FieldElement mod_add(FieldElement a, FieldElement b, FieldElement q);

/// (a - b) mod q. Preconditions: a, b < q.
FieldElement mod_sub(FieldElement a, FieldElement b, FieldElement q);

/// base^exp mod q by square-and-multiply. pow_mod(x, 0, q) == 1 for any x.
FieldElement pow_mod(FieldElement base, std::uint64_t exp, FieldElement q);

/// (a * b) mod q via Barrett reduction with k = L, mu = floor(2^(2L)/q).
/// Uses at most two conditional subtractions after the quotient estimate.
FieldElement barrett_mul(FieldElement a, FieldElement b, const NttParams& params);

/// Builds a consistent NttParams for (n, q, bit_width).
/// Throws std::invalid_argument if n is not a power of two >= 2, q is not
/// prime, q != 1 (mod n), q >= 2^bit_width, or bit_width > kMaxBitWidth.
NttParams derive_params(std::uint32_t n, FieldElement q, std::uint32_t bit_width);

/// Re-checks every NttParams invariant (used by tests and at module seams).
/// Throws std::invalid_argument on the first violation.
void validate_params(const NttParams& params);

}  // namespace nmntt
