// Command-line front end: library transforms on coefficient files, the
// cycle-accurate simulator with stats/trace output, sweeps over problem
// sizes, and the seeded self-check suite.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nmntt/io.hpp"
#include "nmntt/scheduler.hpp"
#include "nmntt/transform.hpp"

namespace {

using nmntt::Direction;
using nmntt::FieldElement;
using nmntt::NttParams;
using nmntt::Polynomial;
using nmntt::sim::CostModel;
using nmntt::sim::CycleStats;
using nmntt::sim::SimResult;
using nmntt::sim::Simulator;
using nmntt::sim::TraceWriter;

// Verification failures exit with a code distinct from config errors so
// scripts can tell "you mistyped a flag" from "the model is wrong".
struct VerifyMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOpts {
  std::uint32_t n = 0;
  FieldElement q = 12289;
  std::uint32_t bitwidth = 14;
  double freq_mhz = 0;
  std::string input;
  std::string input_b;
  std::string output;
  std::string stats;
  std::string trace;
  std::string calib;
  std::uint64_t seed = 0;
};

// Published operating points; other sizes need an explicit --freq-mhz.
double default_freq(std::uint32_t n) {
  switch (n) {
    case 256: return 176.0;
    case 512: return 163.0;
    case 1024: return 148.0;
    default: return 0.0;
  }
}

double resolve_freq(const CommonOpts& o) {
  if (o.freq_mhz > 0) return o.freq_mhz;
  const double f = default_freq(o.n);
  if (f <= 0) {
    throw std::runtime_error("no default frequency for n=" +
                             std::to_string(o.n) + "; pass --freq-mhz");
  }
  return f;
}

CostModel load_calibration(const std::string& path) {
  CostModel model;
  if (path.empty()) return model;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open calibration file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("calibration file '" + path + "': " + e.what());
  }
  if (!j.is_object()) {
    throw std::runtime_error("calibration file '" + path + "': not a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "stage1_overhead") {
      model.stage1_overhead = value.get<std::uint32_t>();
    } else if (key == "stage2_overhead") {
      model.stage2_overhead = value.get<std::uint32_t>();
    } else if (key == "io_mux_width") {
      model.io_mux_width = value.get<std::uint32_t>();
    } else if (key == "energy_nj_per_op") {
      if (!value.is_object()) {
        throw std::runtime_error("calibration: energy_nj_per_op must be an object");
      }
      std::array<double, 4> table{};
      const char* names[4] = {"select", "read", "compute", "writeback"};
      for (int i = 0; i < 4; ++i) {
        if (!value.contains(names[i])) {
          throw std::runtime_error(std::string("calibration: energy_nj_per_op missing '") +
                                   names[i] + "'");
        }
        table[static_cast<std::size_t>(i)] = value[names[i]].get<double>();
      }
      if (value.size() != 4) {
        throw std::runtime_error("calibration: energy_nj_per_op has unknown keys");
      }
      model.energy_nj_per_op = table;
    } else {
      throw std::runtime_error("calibration: unknown key '" + key + "'");
    }
  }
  return model;
}

Polynomial random_poly(std::mt19937_64& rng, std::uint32_t n, FieldElement q) {
  Polynomial p(n);
  for (FieldElement& c : p) c = static_cast<FieldElement>(rng() % q);
  return p;
}

void emit_poly(const CommonOpts& o, const Polynomial& p) {
  if (!o.output.empty()) {
    nmntt::write_coefficients_file(o.output, p);
    return;
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) std::cout << ' ';
    std::cout << p[i];
  }
  std::cout << '\n';
}

int run_kernel(const CommonOpts& o, const std::string& which) {
  const NttParams params = nmntt::derive_params(o.n, o.q, o.bitwidth);
  const Polynomial a = nmntt::read_coefficients_file(o.input, o.n, o.q);
  Polynomial out;
  if (which == "ntt") {
    out = nmntt::ntt_ct(a, params);
  } else if (which == "intt") {
    out = nmntt::intt_gs(a, params);
  } else {
    const Polynomial b = nmntt::read_coefficients_file(o.input_b, o.n, o.q);
    out = nmntt::polymul_cyclic(a, b, params);
  }
  emit_poly(o, out);
  return 0;
}

int run_simulate(const CommonOpts& o, const std::string& direction) {
  const NttParams params = nmntt::derive_params(o.n, o.q, o.bitwidth);
  const CostModel model = load_calibration(o.calib);
  const double freq = resolve_freq(o);
  const bool polymul = !o.input_b.empty();
  if (polymul && direction == "inverse") {
    throw std::runtime_error("--input-b selects a convolution; it has no --direction");
  }

  std::mt19937_64 rng(o.seed);
  const Polynomial a = o.input.empty()
                           ? random_poly(rng, o.n, o.q)
                           : nmntt::read_coefficients_file(o.input, o.n, o.q);

  std::ofstream trace_file;
  TraceWriter* trace = nullptr;
  TraceWriter writer{trace_file};
  if (!o.trace.empty()) {
    trace_file.open(o.trace);
    if (!trace_file) {
      throw std::runtime_error("cannot open trace file '" + o.trace + "'");
    }
    trace = &writer;
  }

  Simulator sim(params, model, trace);
  SimResult res;
  if (polymul) {
    const Polynomial b = nmntt::read_coefficients_file(o.input_b, o.n, o.q);
    res = sim.run_polymul(a, b);
  } else {
    res = sim.run_transform(
        a, direction == "inverse" ? Direction::Inverse : Direction::Forward);
  }

  const std::string record = nmntt::sim::report_stats(res.stats, freq);
  if (!o.output.empty()) nmntt::write_coefficients_file(o.output, res.output);
  if (!o.stats.empty()) {
    std::ofstream sf(o.stats);
    if (!sf) throw std::runtime_error("cannot open stats file '" + o.stats + "'");
    sf << record << '\n';
    if (!sf) throw std::runtime_error("write to '" + o.stats + "' failed");
  }
  std::cout << record << '\n';
  return 0;
}

int run_sweep(const CommonOpts& o, const std::string& n_list) {
  const CostModel model = load_calibration(o.calib);
  std::vector<std::uint32_t> sizes;
  std::stringstream ss(n_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const unsigned long v = std::stoul(item, &pos);
    if (pos != item.size() || v == 0) {
      throw std::runtime_error("sweep: bad n value '" + item + "'");
    }
    sizes.push_back(static_cast<std::uint32_t>(v));
  }
  if (sizes.empty()) throw std::runtime_error("sweep: empty n list");

  std::vector<std::string> records;
  for (const std::uint32_t n : sizes) {
    CommonOpts point = o;
    point.n = n;
    const NttParams params = nmntt::derive_params(n, o.q, o.bitwidth);
    const double freq = resolve_freq(point);
    std::mt19937_64 rng(o.seed);
    Simulator sim(params, model);
    const SimResult res =
        sim.run_transform(random_poly(rng, n, o.q), Direction::Forward);
    records.push_back(nmntt::sim::report_stats(res.stats, freq));
  }

  for (const std::string& r : records) std::cout << r << '\n';
  if (!o.stats.empty()) {
    std::ofstream sf(o.stats);
    if (!sf) throw std::runtime_error("cannot open stats file '" + o.stats + "'");
    for (const std::string& r : records) sf << r << '\n';
    if (!sf) throw std::runtime_error("write to '" + o.stats + "' failed");
  }
  return 0;
}

void check(bool ok, const std::string& what) {
  if (!ok) throw VerifyMismatch(what);
  std::cout << "check " << what << ": ok\n";
}

int run_verify(const CommonOpts& o) {
  const NttParams params = nmntt::derive_params(o.n, o.q, o.bitwidth);
  std::mt19937_64 rng(o.seed);

  bool ok = true;
  for (int round = 0; round < 20 && ok; ++round) {
    const Polynomial p = random_poly(rng, o.n, o.q);
    ok = nmntt::ntt_ct(p, params) ==
         nmntt::dft_reference(p, Direction::Forward, params);
  }
  check(ok, "ntt_ct matches dft_reference");

  ok = true;
  for (int round = 0; round < 20 && ok; ++round) {
    const Polynomial p = random_poly(rng, o.n, o.q);
    ok = nmntt::intt_gs(p, params) ==
         nmntt::dft_reference(p, Direction::Inverse, params);
  }
  check(ok, "intt_gs matches dft_reference");

  ok = true;
  for (int round = 0; round < 20 && ok; ++round) {
    const Polynomial p = random_poly(rng, o.n, o.q);
    ok = nmntt::intt_gs(nmntt::ntt_ct(p, params), params) == p;
  }
  check(ok, "round trip is the identity");

  {
    const Polynomial p = random_poly(rng, o.n, o.q);
    const Polynomial b = random_poly(rng, o.n, o.q);
    check(nmntt::ntt_ct_parallel(p, params) == nmntt::ntt_ct(p, params),
          "parallel ntt matches serial");
    check(nmntt::intt_gs_parallel(p, params) == nmntt::intt_gs(p, params),
          "parallel intt matches serial");
    check(nmntt::polymul_cyclic_parallel(p, b, params) ==
              nmntt::polymul_cyclic(p, b, params),
          "parallel polymul matches serial");
  }

  {
    const Polynomial p = random_poly(rng, o.n, o.q);
    const Polynomial b = random_poly(rng, o.n, o.q);
    Simulator sim(params);
    const SimResult fwd = sim.run_transform(p, Direction::Forward);
    check(fwd.output == nmntt::ntt_ct(p, params),
          "simulator forward matches ntt_ct");
    const SimResult inv = sim.run_transform(fwd.output, Direction::Inverse);
    check(inv.output == p, "simulator inverse recovers the input");
    check(sim.run_polymul(p, b).output == nmntt::polymul_cyclic(p, b, params),
          "simulator convolution matches polymul_cyclic");
  }

  std::cout << "verify: all checks passed (n=" << o.n << ", q=" << o.q
            << ", seed=" << o.seed << ")\n";
  return 0;
}

void add_param_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--n", o.n, "transform length (power of two)")->required();
  cmd->add_option("--q", o.q, "prime modulus (default 12289)");
  cmd->add_option("--bitwidth", o.bitwidth, "word width L in bits (default 14)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"near-memory NTT accelerator: transforms, simulation, sweeps"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string direction = "forward";
  std::string n_list = "256,512,1024";
  int rc = 0;

  for (const char* name : {"ntt", "intt"}) {
    CLI::App* cmd = app.add_subcommand(
        name, std::string(name) == "ntt" ? "forward transform of a coefficient file"
                                         : "inverse transform of a coefficient file");
    add_param_flags(cmd, o);
    cmd->add_option("--input", o.input, "coefficient file")->required();
    cmd->add_option("--output", o.output, "write result here instead of stdout");
    cmd->callback([&o, &rc, name] { rc = run_kernel(o, name); });
  }

  {
    CLI::App* cmd = app.add_subcommand("polymul",
                                       "cyclic convolution of two coefficient files");
    add_param_flags(cmd, o);
    cmd->add_option("--input", o.input, "left operand file")->required();
    cmd->add_option("--input-b", o.input_b, "right operand file")->required();
    cmd->add_option("--output", o.output, "write result here instead of stdout");
    cmd->callback([&o, &rc] { rc = run_kernel(o, "polymul"); });
  }

  {
    CLI::App* cmd = app.add_subcommand(
        "simulate", "cycle-accurate accelerator run with stats and trace");
    add_param_flags(cmd, o);
    cmd->add_option("--freq-mhz", o.freq_mhz,
                    "clock in MHz (defaults per published operating point)");
    cmd->add_option("--direction", direction, "forward | inverse")
        ->check(CLI::IsMember({"forward", "inverse"}));
    cmd->add_option("--input", o.input,
                    "coefficient file (default: seeded random input)");
    cmd->add_option("--input-b", o.input_b,
                    "second operand file; switches to a convolution run");
    cmd->add_option("--output", o.output, "write simulated output coefficients");
    cmd->add_option("--stats", o.stats, "write the stats record to this file");
    cmd->add_option("--trace", o.trace, "write a JSONL glitch-phase trace");
    cmd->add_option("--seed", o.seed, "seed for generated inputs (default 0)");
    cmd->add_option("--calib", o.calib, "JSON file with cost-model overrides");
    cmd->callback([&o, &rc, &direction] { rc = run_simulate(o, direction); });
  }

  {
    CLI::App* cmd = app.add_subcommand(
        "sweep", "simulate a list of sizes and emit one stats record each");
    cmd->add_option("--n", n_list, "comma-separated sizes (default 256,512,1024)");
    cmd->add_option("--q", o.q, "prime modulus (default 12289)");
    cmd->add_option("--bitwidth", o.bitwidth, "word width L in bits (default 14)");
    cmd->add_option("--freq-mhz", o.freq_mhz,
                    "clock for every point (defaults per published point)");
    cmd->add_option("--stats", o.stats, "write all records to this file");
    cmd->add_option("--seed", o.seed, "seed for generated inputs (default 0)");
    cmd->add_option("--calib", o.calib, "JSON file with cost-model overrides");
    cmd->callback([&o, &rc, &n_list] { rc = run_sweep(o, n_list); });
  }

  {
    CLI::App* cmd = app.add_subcommand(
        "verify", "seeded oracle cross-checks of kernels and simulator");
    add_param_flags(cmd, o);
    cmd->add_option("--seed", o.seed, "seed for random test inputs (default 0)");
    cmd->callback([&o, &rc] { rc = run_verify(o); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const VerifyMismatch& e) {
    std::cerr << "mismatch: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return rc;
}
