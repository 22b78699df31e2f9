#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>
#include <stdexcept>

#include "nmntt/scheduler.hpp"

using namespace nmntt;
using namespace nmntt::sim;

namespace {

Polynomial random_poly(std::mt19937_64& rng, std::uint32_t n, FieldElement q) {
  Polynomial p(n);
  for (auto& c : p) c = static_cast<FieldElement>(rng() % q);
  return p;
}

}  // namespace

TEST_CASE("frozen transform results at n=4 q=17") {
  const NttParams p = derive_params(4, 17, 5);
  Simulator sim(p);
  CHECK(sim.run_transform({1, 0, 0, 0}, Direction::Forward).output ==
        Polynomial{1, 1, 1, 1});
  CHECK(sim.run_transform({1, 2, 3, 4}, Direction::Forward).output ==
        Polynomial{10, 7, 15, 6});
  CHECK(sim.run_transform({10, 7, 15, 6}, Direction::Inverse).output ==
        Polynomial{1, 2, 3, 4});
  CHECK(sim.run_polymul({1, 1, 1, 1}, {1, 1, 1, 1}).output ==
        Polynomial{4, 4, 4, 4});
}

TEST_CASE("simulator output equals the library kernels") {
  std::mt19937_64 rng(21);
  for (std::uint32_t n : {2u, 8u, 16u, 64u}) {
    const NttParams p = derive_params(n, 12289, 14);
    Simulator sim(p);
    for (int round = 0; round < 5; ++round) {
      const Polynomial in = random_poly(rng, n, p.q);
      const Polynomial b = random_poly(rng, n, p.q);
      const SimResult fwd = sim.run_transform(in, Direction::Forward);
      CHECK(fwd.output == ntt_ct(in, p));
      CHECK(sim.run_transform(fwd.output, Direction::Inverse).output == in);
      CHECK(sim.run_polymul(in, b).output == polymul_cyclic(in, b, p));
    }
  }
}

TEST_CASE("cycle ledger at the default calibration") {
  const NttParams p = derive_params(256, 12289, 14);
  Simulator sim(p);
  CHECK(sim.stage1_cycles() == 111);  // 3L + 69
  CHECK(sim.stage2_cycles() == 112);  // 2L + 16 + 68
  CHECK(sim.stage3_cycles() == 73);   // 4L + 17

  const CycleStats st =
      sim.run_transform(Polynomial(256, 1), Direction::Forward).stats;
  CHECK(st.op == "ntt");
  CHECK(st.layers == 8);
  CHECK(st.io_cycles == 256);  // 2 * ceil(256*14/28)
  CHECK(st.total_cycles == 2624);
  CHECK(st.total_cycles ==
        st.io_cycles + st.layers * (st.stage1_cycles + st.stage2_cycles +
                                    st.stage3_cycles));

  const NttParams p512 = derive_params(512, 12289, 14);
  CHECK(Simulator(p512)
            .run_transform(Polynomial(512, 2), Direction::Forward)
            .stats.total_cycles == 3176);
  const NttParams p1024 = derive_params(1024, 12289, 14);
  CHECK(Simulator(p1024)
            .run_transform(Polynomial(1024, 3), Direction::Forward)
            .stats.total_cycles == 3984);
}

TEST_CASE("stage formulas track the calibration constants") {
  const NttParams p = derive_params(16, 97, 7);
  CostModel m;
  m.stage1_overhead = 10;
  m.stage2_overhead = 5;
  m.io_mux_width = 7;
  Simulator sim(p, m);
  CHECK(sim.stage1_cycles() == 3 * 7 + 10);
  CHECK(sim.stage2_cycles() == 2 * 7 + 16 + 5);
  CHECK(sim.stage3_cycles() == 4 * 7 + 17);

  const CycleStats st =
      sim.run_transform(Polynomial(16, 0), Direction::Forward).stats;
  CHECK(st.io_cycles == 2 * ((16 * 7 + 6) / 7));
  CHECK(st.total_cycles == st.io_cycles + 4 * (31 + 35 + 45));
}

TEST_CASE("inverse and polymul ledgers") {
  const NttParams p = derive_params(16, 12289, 14);
  Simulator sim(p);
  const CycleStats inv =
      sim.run_transform(Polynomial(16, 5), Direction::Inverse).stats;
  CHECK(inv.op == "intt");
  CHECK(inv.layers == 4);
  CHECK(inv.pointwise_cycles == 0);
  CHECK(inv.total_cycles ==
        inv.io_cycles + 4 * (inv.stage1_cycles + inv.stage2_cycles +
                             inv.stage3_cycles));

  const CycleStats pm = sim.run_polymul(Polynomial(16, 1), Polynomial(16, 2)).stats;
  CHECK(pm.op == "polymul");
  CHECK(pm.layers == 8);  // forward on both groups counts once; inverse once
  CHECK(pm.pointwise_cycles == sim.stage2_cycles());
  CHECK(pm.io_cycles == inv.io_cycles);  // loads run concurrently
  CHECK(pm.total_cycles ==
        pm.io_cycles + 8 * (pm.stage1_cycles + pm.stage2_cycles +
                            pm.stage3_cycles) + pm.pointwise_cycles);
}

TEST_CASE("stage-3 law holds across word widths") {
  struct Case {
    std::uint32_t n;
    FieldElement q;
    std::uint32_t l;
  };
  for (const Case c : {Case{4, 17, 5}, Case{8, 97, 7}, Case{16, 12289, 14},
                       Case{4, 786433, 20}}) {
    const NttParams p = derive_params(c.n, c.q, c.l);
    Simulator sim(p);
    const CycleStats st =
        sim.run_transform(Polynomial(c.n, 1), Direction::Forward).stats;
    CHECK(st.stage3_cycles == 4 * c.l + 17);
  }
}

TEST_CASE("with_frequency and report_stats") {
  CycleStats st;
  st.op = "ntt";
  st.n = 256;
  st.q = 12289;
  st.bit_width = 14;
  st.layers = 8;
  st.stage1_cycles = 111;
  st.stage2_cycles = 112;
  st.stage3_cycles = 73;
  st.io_cycles = 256;
  st.total_cycles = 2624;
  st.phase_ops = {6, 1040, 8216, 3088};

  const CycleStats timed = with_frequency(st, 176.0);
  CHECK(timed.latency_us == doctest::Approx(14.909091).epsilon(1e-6));
  CHECK(timed.throughput_kntts == doctest::Approx(67.073171).epsilon(1e-6));
  CHECK_THROWS_AS(with_frequency(st, 0), std::invalid_argument);
  CHECK_THROWS_AS(with_frequency(st, -5), std::invalid_argument);

  CHECK(report_stats(st, 176.0) ==
        "{\"op\":\"ntt\",\"n\":256,\"q\":12289,\"bit_width\":14,\"layers\":8,"
        "\"stage1_cycles\":111,\"stage2_cycles\":112,\"stage3_cycles\":73,"
        "\"pointwise_cycles\":0,\"io_cycles\":256,\"total_cycles\":2624,"
        "\"freq_mhz\":176.000000,\"latency_us\":14.909091,"
        "\"throughput_kntts\":67.073171,\"phase_ops\":{\"select\":6,"
        "\"read\":1040,\"compute\":8216,\"writeback\":3088},"
        "\"energy_nj\":null}");
}

TEST_CASE("optional energy table accumulates per-phase ops") {
  const NttParams p = derive_params(4, 17, 5);
  CostModel m;
  m.energy_nj_per_op = std::array<double, 4>{1.0, 2.0, 3.0, 4.0};
  Simulator sim(p, m);
  const CycleStats st =
      sim.run_transform({1, 2, 3, 4}, Direction::Forward).stats;
  REQUIRE(st.energy_nj.has_value());
  const double want = 1.0 * st.phase_ops[0] + 2.0 * st.phase_ops[1] +
                      3.0 * st.phase_ops[2] + 4.0 * st.phase_ops[3];
  CHECK(*st.energy_nj == doctest::Approx(want));

  Simulator plain(p);
  CHECK_FALSE(plain.run_transform({1, 2, 3, 4}, Direction::Forward)
                  .stats.energy_nj.has_value());
}

TEST_CASE("inputs are validated before any cycle is charged") {
  const NttParams p = derive_params(4, 17, 5);
  Simulator sim(p);
  CHECK_THROWS_AS(sim.run_transform({1, 2, 3}, Direction::Forward),
                  std::invalid_argument);
  CHECK_THROWS_AS(sim.run_transform({1, 2, 3, 17}, Direction::Forward),
                  std::invalid_argument);
  CHECK_THROWS_AS(sim.run_polymul({1, 2, 3, 4}, {1, 2, 3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sim.run_polymul({17, 0, 0, 0}, {1, 2, 3, 4}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Simulator(p, CostModel{0, 0, 0, {}}),
                  std::invalid_argument);
}

TEST_CASE("identical runs give byte-identical stats and traces") {
  const NttParams p = derive_params(16, 12289, 14);
  std::mt19937_64 rng(33);
  const Polynomial in = random_poly(rng, 16, p.q);

  auto run_once = [&](std::string& trace_out) {
    std::ostringstream os;
    TraceWriter tw(os);
    Simulator sim(p, {}, &tw);
    const SimResult r = sim.run_transform(in, Direction::Forward);
    trace_out = os.str();
    return report_stats(r.stats, 176.0);
  };

  std::string trace1, trace2;
  const std::string stats1 = run_once(trace1);
  const std::string stats2 = run_once(trace2);
  CHECK(stats1 == stats2);
  CHECK(trace1 == trace2);
  CHECK_FALSE(trace1.empty());

  std::istringstream is(trace1);
  const TraceValidation v = validate_trace(is);
  CHECK(v.ok);
  INFO(v.error);
  CHECK(v.events > 0);
}

TEST_CASE("polymul trace carries both engine groups and validates") {
  const NttParams p = derive_params(8, 12289, 14);
  std::ostringstream os;
  TraceWriter tw(os);
  Simulator sim(p, {}, &tw);
  std::mt19937_64 rng(34);
  const Polynomial a = random_poly(rng, 8, p.q);
  const Polynomial b = random_poly(rng, 8, p.q);
  CHECK(sim.run_polymul(a, b).output == polymul_cyclic(a, b, p));

  const std::string text = os.str();
  CHECK(text.find("\"unit\":\"g1:A\"") != std::string::npos);
  CHECK(text.find("\"unit\":\"g2:B\"") != std::string::npos);
  CHECK(text.find("\"op\":\"modmul\"") != std::string::npos);

  std::istringstream is(text);
  const TraceValidation v = validate_trace(is);
  CHECK(v.ok);
  INFO(v.error);
}
