// Microbenchmarks for the transform kernels, serial against OpenMP builds.
// The quadratic reference is included to show what the fast paths buy.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>

#include "nmntt/field.hpp"
#include "nmntt/transform.hpp"

namespace {

using namespace nmntt;

Polynomial make_input(std::uint32_t n, FieldElement q) {
  std::mt19937_64 rng(12345);
  Polynomial p(n);
  for (auto& c : p) c = static_cast<FieldElement>(rng() % q);
  return p;
}

NttParams params_for(std::uint32_t n) { return derive_params(n, 12289, 14); }

void BM_ntt_serial(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const NttParams params = params_for(n);
  const Polynomial p = make_input(n, params.q);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ntt_ct(p, params));
  }
}

void BM_ntt_parallel(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const NttParams params = params_for(n);
  const Polynomial p = make_input(n, params.q);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ntt_ct_parallel(p, params));
  }
}

void BM_intt_serial(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const NttParams params = params_for(n);
  const Polynomial p = make_input(n, params.q);
  for (auto _ : state) {
    benchmark::DoNotOptimize(intt_gs(p, params));
  }
}

void BM_intt_parallel(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const NttParams params = params_for(n);
  const Polynomial p = make_input(n, params.q);
  for (auto _ : state) {
    benchmark::DoNotOptimize(intt_gs_parallel(p, params));
  }
}

void BM_polymul_serial(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const NttParams params = params_for(n);
  const Polynomial a = make_input(n, params.q);
  const Polynomial b = make_input(n, params.q);
  for (auto _ : state) {
    benchmark::DoNotOptimize(polymul_cyclic(a, b, params));
  }
}

void BM_polymul_parallel(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const NttParams params = params_for(n);
  const Polynomial a = make_input(n, params.q);
  const Polynomial b = make_input(n, params.q);
  for (auto _ : state) {
    benchmark::DoNotOptimize(polymul_cyclic_parallel(a, b, params));
  }
}

void BM_dft_serial(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const NttParams params = params_for(n);
  const Polynomial p = make_input(n, params.q);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dft_reference(p, Direction::Forward, params));
  }
}

void BM_dft_parallel(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const NttParams params = params_for(n);
  const Polynomial p = make_input(n, params.q);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dft_reference_parallel(p, Direction::Forward, params));
  }
}

BENCHMARK(BM_ntt_serial)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(BM_ntt_parallel)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(BM_intt_serial)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(BM_intt_parallel)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(BM_polymul_serial)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(BM_polymul_parallel)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(BM_dft_serial)->Arg(256)->Arg(1024);
BENCHMARK(BM_dft_parallel)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
