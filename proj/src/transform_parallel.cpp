// OpenMP ports of the serial transform kernels. Each layer's butterflies are
// independent, so a parallel-for per layer (with its implicit barrier) keeps
// the exact serial semantics; all arithmetic is integral, so results are
// bit-identical to the serial kernels regardless of thread count.

#include <cstdint>
#include <stdexcept>
#include <string>

#include "nmntt/transform.hpp"

namespace nmntt {

namespace {

void check_len(const Polynomial& p, const NttParams& params, const char* op) {
  if (p.size() != params.n) {
    throw std::invalid_argument(std::string(op) + ": input length mismatch");
  }
}

}  // namespace

Polynomial dft_reference_parallel(const Polynomial& p, Direction dir,
                                  const NttParams& params) {
  check_len(p, params, "dft_reference_parallel");
  if (params.n == 1) return p;
  const std::uint32_t n = params.n;
  const FieldElement q = params.q;
  const FieldElement w =
      dir == Direction::Forward ? params.omega : params.omega_inv;
  Polynomial out(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    std::uint64_t acc = 0;
    for (std::uint32_t j = 0; j < n; ++j) {
      const FieldElement pw =
          pow_mod(w, static_cast<std::uint64_t>(i) * j, q);
      acc = (acc + static_cast<std::uint64_t>(p[j]) * pw) % q;
    }
    if (dir == Direction::Inverse) acc = acc * params.n_inv % q;
    out[i] = static_cast<FieldElement>(acc);
  }
  return out;
}

Polynomial ntt_ct_parallel(const Polynomial& p, const NttParams& params) {
  check_len(p, params, "ntt_ct_parallel");
  if (params.n == 1) return p;
  const auto table = twiddle_table(params, Direction::Forward);
  Polynomial x = bit_reverse_permute(p);
  const std::uint32_t layers = log2_exact(params.n);
  for (std::uint32_t l = 0; l < layers; ++l) {
    const auto sched = butterfly_layer(params, Direction::Forward, l);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(sched.size()); ++b) {
      const Butterfly& bf = sched[b];
      const FieldElement t = x[bf.i];
      const FieldElement u = barrett_mul(x[bf.j], table[bf.tw_index], params);
      x[bf.i] = mod_add(t, u, params.q);
      x[bf.j] = mod_sub(t, u, params.q);
    }
  }
  return x;
}

Polynomial intt_gs_parallel(const Polynomial& p, const NttParams& params) {
  check_len(p, params, "intt_gs_parallel");
  if (params.n == 1) return p;
  const auto table = twiddle_table(params, Direction::Inverse);
  Polynomial x = p;
  const std::uint32_t layers = log2_exact(params.n);
  for (std::uint32_t l = 0; l < layers; ++l) {
    const auto sched = butterfly_layer(params, Direction::Inverse, l);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(sched.size()); ++b) {
      const Butterfly& bf = sched[b];
      const FieldElement t = x[bf.i];
      const FieldElement u = x[bf.j];
      x[bf.i] = mod_add(t, u, params.q);
      x[bf.j] = barrett_mul(mod_sub(t, u, params.q), table[bf.tw_index], params);
    }
  }
  x = bit_reverse_permute(x);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(x.size()); ++i) {
    x[i] = barrett_mul(x[i], params.n_inv, params);
  }
  return x;
}

Polynomial pointwise_mul_parallel(const Polynomial& a, const Polynomial& b,
                                  const NttParams& params) {
  check_len(a, params, "pointwise_mul_parallel");
  check_len(b, params, "pointwise_mul_parallel");
  Polynomial out(params.n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(params.n); ++i) {
    out[i] = barrett_mul(a[i], b[i], params);
  }
  return out;
}

Polynomial polymul_cyclic_parallel(const Polynomial& a, const Polynomial& b,
                                   const NttParams& params) {
  const Polynomial fa = ntt_ct_parallel(a, params);
  const Polynomial fb = ntt_ct_parallel(b, params);
  return intt_gs_parallel(pointwise_mul_parallel(fa, fb, params), params);
}

}  // namespace nmntt
