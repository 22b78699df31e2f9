#pragma once
// Cyclic NTT/INTT kernels over F_q: an O(n^2) reference DFT, iterative
// Cooley-Tukey / Gentleman-Sande ladders, and pointwise/convolution helpers.
// The *_parallel variants are OpenMP ports of the serial kernels and return
// bit-identical results.

#include <cstdint>

#include "nmntt/field.hpp"

namespace nmntt {

enum class Direction { Forward, Inverse };

/// One butterfly of a transform layer: working-array indices (i, j) and the
/// address of its twiddle in the bit-reverse-ordered table.
struct Butterfly {
  std::uint32_t i;
  std::uint32_t j;
  std::uint32_t tw_index;
};

/// log2(n) for exact powers of two; throws std::invalid_argument otherwise.
std::uint32_t log2_exact(std::uint32_t n);

/// x with its low `bits` bits reversed.
std::uint32_t bit_reverse(std::uint32_t x, std::uint32_t bits);

/// out[i] = p[bit_reverse(i)]. Throws on non-power-of-two length.
Polynomial bit_reverse_permute(const Polynomial& p);

/// n/2 twiddle powers stored in bit-reversed index order:
/// table[i] = w^bit_reverse(i, log2(n)-1) with w = omega (Forward) or
/// omega_inv (Inverse). Shared by the transforms and the simulator ROM.
std::vector<FieldElement> twiddle_table(const NttParams& params, Direction dir);

/// Butterfly schedule for one layer, layer in [0, log2(n)); entry b is the
/// butterfly executed by lane b. Forward layers run spans 2, 4, ..., n
/// (decimation in time, twiddle on the input of index j); inverse layers run
/// n, ..., 4, 2 (decimation in frequency, twiddle on the difference output).
std::vector<Butterfly> butterfly_layer(const NttParams& params, Direction dir,
                                       std::uint32_t layer);

/// O(n^2) DFT straight from the defining sums, A_i = sum a_j w^(ij); the
/// inverse direction applies the 1/n factor. Plain %-arithmetic throughout,
/// independent of the Barrett path and of the ladder schedules.
Polynomial dft_reference(const Polynomial& p, Direction dir,
                         const NttParams& params);

/// Iterative Cooley-Tukey forward NTT, natural order in and out.
Polynomial ntt_ct(const Polynomial& p, const NttParams& params);
Polynomial ntt_ct(const Polynomial& p, const NttParams& params,
                  const std::vector<FieldElement>& table);

/// Iterative Gentleman-Sande inverse NTT including the 1/n factor, natural
/// order in and out.
Polynomial intt_gs(const Polynomial& p, const NttParams& params);
Polynomial intt_gs(const Polynomial& p, const NttParams& params,
                   const std::vector<FieldElement>& table);

/// c[i] = a[i] * b[i] mod q.
Polynomial pointwise_mul(const Polynomial& a, const Polynomial& b,
                         const NttParams& params);

/// Cyclic convolution mod (x^n - 1, q): NTT, pointwise multiply, INTT.
Polynomial polymul_cyclic(const Polynomial& a, const Polynomial& b,
                          const NttParams& params);

// OpenMP counterparts, parallel across the independent butterflies of each
// layer (or across output indices). Exact integer arithmetic, so results
// match the serial kernels bit for bit.
Polynomial dft_reference_parallel(const Polynomial& p, Direction dir,
                                  const NttParams& params);
Polynomial ntt_ct_parallel(const Polynomial& p, const NttParams& params);
Polynomial intt_gs_parallel(const Polynomial& p, const NttParams& params);
Polynomial pointwise_mul_parallel(const Polynomial& a, const Polynomial& b,
                                  const NttParams& params);
Polynomial polymul_cyclic_parallel(const Polynomial& a, const Polynomial& b,
                                   const NttParams& params);

}  // namespace nmntt
