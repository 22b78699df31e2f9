#include "nmntt/field.hpp"

#include <cassert>
#include <stdexcept>
#include <string>

namespace nmntt {

namespace {

bool is_power_of_two(std::uint32_t x) { return x != 0 && (x & (x - 1)) == 0; }

bool is_prime(std::uint32_t x) {
  if (x < 2) return false;
  if (x % 2 == 0) return x == 2;
  for (std::uint32_t d = 3; d * d <= x; d += 2) {
    if (x % d == 0) return false;
  }
  return true;
}

void check_operand(FieldElement v, FieldElement q, const char* what) {
  if (v >= q) {
    throw std::invalid_argument(std::string(what) + " out of range: " +
                                std::to_string(v) + " >= q = " + std::to_string(q));
  }
}

}  // namespace

FieldElement mod_add(FieldElement a, FieldElement b, FieldElement q) {
  check_operand(a, q, "mod_add operand a");
  check_operand(b, q, "mod_add operand b");
  FieldElement s = a + b;
  return s >= q ? s - q : s;
}

FieldElement mod_sub(FieldElement a, FieldElement b, FieldElement q) {
  check_operand(a, q, "mod_sub operand a");
  check_operand(b, q, "mod_sub operand b");
  return a >= b ? a - b : a + q - b;
}

FieldElement pow_mod(FieldElement base, std::uint64_t exp, FieldElement q) {
  if (q == 0) throw std::invalid_argument("pow_mod: q must be nonzero");
  std::uint64_t result = 1 % q;
  std::uint64_t acc = base % q;
  while (exp != 0) {
    if (exp & 1) result = result * acc % q;
    acc = acc * acc % q;
    exp >>= 1;
  }
  return static_cast<FieldElement>(result);
}

FieldElement barrett_mul(FieldElement a, FieldElement b, const NttParams& params) {
  const FieldElement q = params.q;
  check_operand(a, q, "barrett_mul operand a");
  check_operand(b, q, "barrett_mul operand b");
  const std::uint64_t t = static_cast<std::uint64_t>(a) * b;
  const std::uint64_t u = (t * params.barrett_mu) >> (2 * params.barrett_k);
  std::uint64_t r = t - u * q;
  int subs = 0;
  while (r >= q) {
    r -= q;
    ++subs;
  }
  assert(subs <= 2);
  (void)subs;
  return static_cast<FieldElement>(r);
}

NttParams derive_params(std::uint32_t n, FieldElement q, std::uint32_t bit_width) {
  if (!is_power_of_two(n) || n < 2) {
    throw std::invalid_argument("derive_params: n must be a power of two >= 2");
  }
  if (bit_width == 0 || bit_width > kMaxBitWidth) {
    throw std::invalid_argument("derive_params: bit_width must be in [1, " +
                                std::to_string(kMaxBitWidth) + "]");
  }
  if (!is_prime(q)) {
    throw std::invalid_argument("derive_params: q = " + std::to_string(q) +
                                " is not prime");
  }
  if (q >> bit_width != 0) {
    throw std::invalid_argument("derive_params: q does not fit in bit_width bits");
  }
  if ((q - 1) % n != 0) {
    throw std::invalid_argument("derive_params: q is not congruent to 1 mod n");
  }

  // Smallest primitive n-th root: for power-of-two n, w^n == 1 with
  // w^(n/2) != 1 is exactly primitivity, so an ascending scan finds the
  // deterministic smallest root.
  FieldElement omega = 0;
  for (FieldElement w = 2; w < q; ++w) {
    if (pow_mod(w, n, q) == 1 && pow_mod(w, n / 2, q) != 1) {
      omega = w;
      break;
    }
  }
  if (omega == 0) {
    throw std::invalid_argument("derive_params: no primitive n-th root found");
  }

  NttParams p;
  p.n = n;
  p.q = q;
  p.bit_width = bit_width;
  p.omega = omega;
  p.omega_inv = pow_mod(omega, q - 2, q);
  p.n_inv = pow_mod(static_cast<FieldElement>(n % q), q - 2, q);
  p.barrett_k = bit_width;
  p.barrett_mu = (static_cast<std::uint64_t>(1) << (2 * bit_width)) / q;
  validate_params(p);
  return p;
}

void validate_params(const NttParams& p) {
  if (!is_power_of_two(p.n) || p.n < 2) {
    throw std::invalid_argument("params: n must be a power of two >= 2");
  }
  if (!is_prime(p.q)) throw std::invalid_argument("params: q not prime");
  if (p.bit_width == 0 || p.bit_width > kMaxBitWidth || (p.q >> p.bit_width) != 0) {
    throw std::invalid_argument("params: q does not fit in bit_width bits");
  }
  if ((p.q - 1) % p.n != 0) {
    throw std::invalid_argument("params: q is not congruent to 1 mod n");
  }
  if (pow_mod(p.omega, p.n, p.q) != 1 || pow_mod(p.omega, p.n / 2, p.q) == 1) {
    throw std::invalid_argument("params: omega is not a primitive n-th root");
  }
  const std::uint64_t ww = static_cast<std::uint64_t>(p.omega) * p.omega_inv % p.q;
  if (ww != 1) throw std::invalid_argument("params: omega_inv mismatch");
  const std::uint64_t nn = static_cast<std::uint64_t>(p.n % p.q) * p.n_inv % p.q;
  if (nn != 1) throw std::invalid_argument("params: n_inv mismatch");
  if (p.barrett_k != p.bit_width) {
    throw std::invalid_argument("params: barrett_k must equal bit_width");
  }
  const std::uint64_t mu = (static_cast<std::uint64_t>(1) << (2 * p.bit_width)) / p.q;
  if (p.barrett_mu != mu) throw std::invalid_argument("params: barrett_mu mismatch");
}

}  // namespace nmntt
