#include "nmntt/transform.hpp"

#include <stdexcept>
#include <string>

namespace nmntt {

namespace {

void check_input(const Polynomial& p, const NttParams& params, const char* op) {
  if (p.size() != params.n) {
    throw std::invalid_argument(std::string(op) + ": input length " +
                                std::to_string(p.size()) + " != n = " +
                                std::to_string(params.n));
  }
  for (FieldElement c : p) {
    if (c >= params.q) {
      throw std::invalid_argument(std::string(op) + ": coefficient " +
                                  std::to_string(c) + " >= q");
    }
  }
}

}  // namespace

std::uint32_t log2_exact(std::uint32_t n) {
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("log2_exact: not a power of two");
  }
  std::uint32_t b = 0;
  while ((n >> b) != 1) ++b;
  return b;
}

std::uint32_t bit_reverse(std::uint32_t x, std::uint32_t bits) {
  std::uint32_t r = 0;
  for (std::uint32_t i = 0; i < bits; ++i) {
    r = (r << 1) | ((x >> i) & 1);
  }
  return r;
}

Polynomial bit_reverse_permute(const Polynomial& p) {
  const std::uint32_t n = static_cast<std::uint32_t>(p.size());
  const std::uint32_t bits = log2_exact(n);
  Polynomial out(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    out[i] = p[bit_reverse(i, bits)];
  }
  return out;
}

std::vector<FieldElement> twiddle_table(const NttParams& params, Direction dir) {
  const FieldElement w =
      dir == Direction::Forward ? params.omega : params.omega_inv;
  const std::uint32_t half = params.n / 2;
  const std::uint32_t bits = params.n == 2 ? 0 : log2_exact(half);
  std::vector<FieldElement> table(half);
  for (std::uint32_t i = 0; i < half; ++i) {
    table[i] = pow_mod(w, bit_reverse(i, bits), params.q);
  }
  return table;
}

std::vector<Butterfly> butterfly_layer(const NttParams& params, Direction dir,
                                       std::uint32_t layer) {
  const std::uint32_t n = params.n;
  const std::uint32_t layers = log2_exact(n);
  if (layer >= layers) {
    throw std::invalid_argument("butterfly_layer: layer out of range");
  }
  const std::uint32_t span =
      dir == Direction::Forward ? (2u << layer) : (n >> layer);
  const std::uint32_t half = span / 2;
  const std::uint32_t stride = n / span;
  const std::uint32_t bits = n == 2 ? 0 : layers - 1;
  std::vector<Butterfly> sched;
  sched.reserve(n / 2);
  for (std::uint32_t start = 0; start < n; start += span) {
    for (std::uint32_t k = 0; k < half; ++k) {
      Butterfly bf;
      bf.i = start + k;
      bf.j = start + k + half;
      bf.tw_index = bit_reverse(k * stride, bits);
      sched.push_back(bf);
    }
  }
  return sched;
}

Polynomial dft_reference(const Polynomial& p, Direction dir,
                         const NttParams& params) {
  check_input(p, params, "dft_reference");
  if (params.n == 1) return p;
  const std::uint32_t n = params.n;
  const FieldElement q = params.q;
  const FieldElement w =
      dir == Direction::Forward ? params.omega : params.omega_inv;
  Polynomial out(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint64_t acc = 0;
    for (std::uint32_t j = 0; j < n; ++j) {
      const FieldElement pw =
          pow_mod(w, static_cast<std::uint64_t>(i) * j, q);
      acc = (acc + static_cast<std::uint64_t>(p[j]) * pw) % q;
    }
    if (dir == Direction::Inverse) {
      acc = acc * params.n_inv % q;
    }
    out[i] = static_cast<FieldElement>(acc);
  }
  return out;
}

Polynomial ntt_ct(const Polynomial& p, const NttParams& params) {
  return ntt_ct(p, params, twiddle_table(params, Direction::Forward));
}

Polynomial ntt_ct(const Polynomial& p, const NttParams& params,
                  const std::vector<FieldElement>& table) {
  check_input(p, params, "ntt_ct");
  if (params.n == 1) return p;
  Polynomial x = bit_reverse_permute(p);
  const std::uint32_t layers = log2_exact(params.n);
  for (std::uint32_t l = 0; l < layers; ++l) {
    for (const Butterfly& bf : butterfly_layer(params, Direction::Forward, l)) {
      const FieldElement t = x[bf.i];
      const FieldElement u = barrett_mul(x[bf.j], table[bf.tw_index], params);
      x[bf.i] = mod_add(t, u, params.q);
      x[bf.j] = mod_sub(t, u, params.q);
    }
  }
  return x;
}

Polynomial intt_gs(const Polynomial& p, const NttParams& params) {
  return intt_gs(p, params, twiddle_table(params, Direction::Inverse));
}

Polynomial intt_gs(const Polynomial& p, const NttParams& params,
                   const std::vector<FieldElement>& table) {
  check_input(p, params, "intt_gs");
  if (params.n == 1) return p;
  Polynomial x = p;
  const std::uint32_t layers = log2_exact(params.n);
  for (std::uint32_t l = 0; l < layers; ++l) {
    for (const Butterfly& bf : butterfly_layer(params, Direction::Inverse, l)) {
      const FieldElement t = x[bf.i];
      const FieldElement u = x[bf.j];
      x[bf.i] = mod_add(t, u, params.q);
      x[bf.j] = barrett_mul(mod_sub(t, u, params.q), table[bf.tw_index], params);
    }
  }
  x = bit_reverse_permute(x);
  for (FieldElement& c : x) {
    c = barrett_mul(c, params.n_inv, params);
  }
  return x;
}

Polynomial pointwise_mul(const Polynomial& a, const Polynomial& b,
                         const NttParams& params) {
  check_input(a, params, "pointwise_mul");
  check_input(b, params, "pointwise_mul");
  Polynomial out(params.n);
  for (std::uint32_t i = 0; i < params.n; ++i) {
    out[i] = barrett_mul(a[i], b[i], params);
  }
  return out;
}

Polynomial polymul_cyclic(const Polynomial& a, const Polynomial& b,
                          const NttParams& params) {
  const auto fwd = twiddle_table(params, Direction::Forward);
  const auto inv = twiddle_table(params, Direction::Inverse);
  const Polynomial fa = ntt_ct(a, params, fwd);
  const Polynomial fb = ntt_ct(b, params, fwd);
  return intt_gs(pointwise_mul(fa, fb, params), params, inv);
}

}  // namespace nmntt
