#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <stdexcept>

#include "nmntt/transform.hpp"

using namespace nmntt;

namespace {

Polynomial random_poly(std::mt19937_64& rng, std::uint32_t n, FieldElement q) {
  Polynomial p(n);
  for (auto& c : p) c = static_cast<FieldElement>(rng() % q);
  return p;
}

// schoolbook cyclic convolution, the independent oracle for polymul
Polynomial schoolbook_cyclic(const Polynomial& a, const Polynomial& b,
                             FieldElement q) {
  const std::size_t n = a.size();
  Polynomial out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = (i + j) % n;
      out[k] = static_cast<FieldElement>(
          (out[k] + static_cast<std::uint64_t>(a[i]) * b[j]) % q);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("log2_exact and bit_reverse") {
  CHECK(log2_exact(2) == 1);
  CHECK(log2_exact(1024) == 10);
  CHECK_THROWS_AS(log2_exact(12), std::invalid_argument);
  CHECK_THROWS_AS(log2_exact(0), std::invalid_argument);

  const std::uint32_t want[8] = {0, 4, 2, 6, 1, 5, 3, 7};
  for (std::uint32_t i = 0; i < 8; ++i) {
    CHECK(bit_reverse(i, 3) == want[i]);
    CHECK(bit_reverse(bit_reverse(i, 3), 3) == i);  // involution
  }
  CHECK(bit_reverse(1, 10) == 512);
}

TEST_CASE("bit_reverse_permute") {
  const Polynomial p{10, 11, 12, 13, 14, 15, 16, 17};
  const Polynomial got = bit_reverse_permute(p);
  CHECK(got == Polynomial{10, 14, 12, 16, 11, 15, 13, 17});
  CHECK(bit_reverse_permute(got) == p);
  CHECK_THROWS_AS(bit_reverse_permute(Polynomial(6, 0)),
                  std::invalid_argument);
}

TEST_CASE("twiddle table is bit-reverse ordered") {
  const NttParams p = derive_params(4, 17, 5);
  CHECK(twiddle_table(p, Direction::Forward) == std::vector<FieldElement>{1, 4});
  CHECK(twiddle_table(p, Direction::Inverse) == std::vector<FieldElement>{1, 13});

  const NttParams p8 = derive_params(8, 17, 5);
  const auto t = twiddle_table(p8, Direction::Forward);
  REQUIRE(t.size() == 4);
  for (std::uint32_t i = 0; i < 4; ++i) {
    CHECK(t[i] == pow_mod(p8.omega, bit_reverse(i, 2), 17));
  }
}

TEST_CASE("butterfly_layer frozen schedules at n=8") {
  const NttParams p = derive_params(8, 17, 5);

  // forward: spans 2, 4, 8
  auto l0 = butterfly_layer(p, Direction::Forward, 0);
  REQUIRE(l0.size() == 4);
  CHECK(l0[0].i == 0); CHECK(l0[0].j == 1); CHECK(l0[0].tw_index == 0);
  CHECK(l0[3].i == 6); CHECK(l0[3].j == 7); CHECK(l0[3].tw_index == 0);

  auto l2 = butterfly_layer(p, Direction::Forward, 2);
  REQUIRE(l2.size() == 4);
  const std::uint32_t tw_want[4] = {0, 2, 1, 3};  // bitrev(k, 2)
  for (std::uint32_t k = 0; k < 4; ++k) {
    CHECK(l2[k].i == k);
    CHECK(l2[k].j == k + 4);
    CHECK(l2[k].tw_index == tw_want[k]);
  }

  // inverse runs the spans the other way: first layer pairs stride n/2
  auto inv0 = butterfly_layer(p, Direction::Inverse, 0);
  CHECK(inv0[0].i == 0);
  CHECK(inv0[0].j == 4);
  auto inv2 = butterfly_layer(p, Direction::Inverse, 2);
  CHECK(inv2[0].i == 0);
  CHECK(inv2[0].j == 1);

  CHECK_THROWS_AS(butterfly_layer(p, Direction::Forward, 3),
                  std::invalid_argument);
}

TEST_CASE("dft_reference frozen examples at n=4 q=17") {
  const NttParams p = derive_params(4, 17, 5);
  CHECK(dft_reference({1, 0, 0, 0}, Direction::Forward, p) ==
        Polynomial{1, 1, 1, 1});
  CHECK(dft_reference({1, 2, 3, 4}, Direction::Forward, p) ==
        Polynomial{10, 7, 15, 6});
  CHECK(dft_reference({10, 7, 15, 6}, Direction::Inverse, p) ==
        Polynomial{1, 2, 3, 4});
}

TEST_CASE("ladders match the reference DFT") {
  const NttParams p4 = derive_params(4, 17, 5);
  CHECK(ntt_ct({1, 2, 3, 4}, p4) == Polynomial{10, 7, 15, 6});
  CHECK(intt_gs({10, 7, 15, 6}, p4) == Polynomial{1, 2, 3, 4});

  std::mt19937_64 rng(3);
  for (std::uint32_t n : {2u, 8u, 32u, 128u}) {
    const NttParams p = derive_params(n, 12289, 14);
    for (int round = 0; round < 10; ++round) {
      const Polynomial in = random_poly(rng, n, p.q);
      const Polynomial fwd = ntt_ct(in, p);
      CHECK(fwd == dft_reference(in, Direction::Forward, p));
      CHECK(intt_gs(fwd, p) == in);
      CHECK(intt_gs(fwd, p) == dft_reference(fwd, Direction::Inverse, p));
    }
  }
}

TEST_CASE("precomputed-table overloads agree") {
  const NttParams p = derive_params(64, 12289, 14);
  std::mt19937_64 rng(4);
  const Polynomial in = random_poly(rng, 64, p.q);
  const auto fwd_table = twiddle_table(p, Direction::Forward);
  const auto inv_table = twiddle_table(p, Direction::Inverse);
  CHECK(ntt_ct(in, p, fwd_table) == ntt_ct(in, p));
  CHECK(intt_gs(in, p, inv_table) == intt_gs(in, p));
}

TEST_CASE("inputs are validated") {
  const NttParams p = derive_params(4, 17, 5);
  CHECK_THROWS_AS(ntt_ct({1, 2, 3}, p), std::invalid_argument);
  CHECK_THROWS_AS(ntt_ct({1, 2, 3, 17}, p), std::invalid_argument);
  CHECK_THROWS_AS(intt_gs({1, 2, 3, 4, 5}, p), std::invalid_argument);
  CHECK_THROWS_AS(dft_reference({18, 0, 0, 0}, Direction::Forward, p),
                  std::invalid_argument);
}

TEST_CASE("cyclic convolution matches the schoolbook oracle") {
  const NttParams p4 = derive_params(4, 17, 5);
  CHECK(polymul_cyclic({1, 1, 1, 1}, {1, 1, 1, 1}, p4) ==
        Polynomial{4, 4, 4, 4});
  // x * x^3 = x^4 = 1 in the cyclic ring
  CHECK(polymul_cyclic({0, 1, 0, 0}, {0, 0, 0, 1}, p4) ==
        Polynomial{1, 0, 0, 0});

  // exhaustive at n=2, q=5: all 625 operand pairs
  const NttParams p2 = derive_params(2, 5, 3);
  for (FieldElement a0 = 0; a0 < 5; ++a0)
    for (FieldElement a1 = 0; a1 < 5; ++a1)
      for (FieldElement b0 = 0; b0 < 5; ++b0)
        for (FieldElement b1 = 0; b1 < 5; ++b1) {
          const Polynomial a{a0, a1}, b{b0, b1};
          CHECK(polymul_cyclic(a, b, p2) == schoolbook_cyclic(a, b, 5));
        }

  std::mt19937_64 rng(5);
  for (std::uint32_t n : {4u, 64u}) {
    const NttParams p = derive_params(n, 12289, 14);
    for (int round = 0; round < 20; ++round) {
      const Polynomial a = random_poly(rng, n, p.q);
      const Polynomial b = random_poly(rng, n, p.q);
      CHECK(polymul_cyclic(a, b, p) == schoolbook_cyclic(a, b, p.q));
    }
  }
}

TEST_CASE("parallel kernels are bit-identical to serial") {
  const NttParams p = derive_params(256, 12289, 14);
  std::mt19937_64 rng(6);
  for (int round = 0; round < 5; ++round) {
    const Polynomial a = random_poly(rng, 256, p.q);
    const Polynomial b = random_poly(rng, 256, p.q);
    CHECK(ntt_ct_parallel(a, p) == ntt_ct(a, p));
    CHECK(intt_gs_parallel(a, p) == intt_gs(a, p));
    CHECK(pointwise_mul_parallel(a, b, p) == pointwise_mul(a, b, p));
    CHECK(polymul_cyclic_parallel(a, b, p) == polymul_cyclic(a, b, p));
    CHECK(dft_reference_parallel(a, Direction::Forward, p) ==
          dft_reference(a, Direction::Forward, p));
  }
}
