#pragma once
// Glitch-phase scheduler: drives the SRAM sub-array pair and the near-memory
// unit groups through the three-stage butterfly pipeline (migrate, twiddle
// multiply, serial add/sub), charges the cycle ledger, and reports calibrated
// latency and throughput.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nmntt/field.hpp"
#include "nmntt/nearmem.hpp"
#include "nmntt/sram.hpp"
#include "nmntt/trace.hpp"
#include "nmntt/transform.hpp"

namespace nmntt::sim {

/// Cost calibration. The structural pass costs (3L, 2L+16, 4L+17 per stage,
/// L cycles per word on either port) are architectural; the two stage
/// overheads and the I/O mux width are fitted constants, chosen once so the
/// default model lands on the published operating points within tolerance.
struct CostModel {
  std::uint32_t stage1_overhead = 69;  // c1: migration select/exchange window
  std::uint32_t stage2_overhead = 68;  // c2: twiddle fetch/route window
  std::uint32_t io_mux_width = 28;     // external I/O bit lanes for bulk moves
  /// Optional per-phase energy table (nJ per primitive op), order
  /// select/read/compute/writeback. Unset by default: energy reports null.
  std::optional<std::array<double, 4>> energy_nj_per_op;
};

/// Cycle ledger for one simulated operation. The stage counts are per layer
/// and identical across layers by construction;
///   total == io + layers * (stage1 + stage2 + stage3) + pointwise.
struct CycleStats {
  std::string op;  // "ntt", "intt" or "polymul"
  std::uint32_t n = 0;
  FieldElement q = 0;
  std::uint32_t bit_width = 0;
  std::uint32_t layers = 0;
  std::uint64_t stage1_cycles = 0;
  std::uint64_t stage2_cycles = 0;
  std::uint64_t stage3_cycles = 0;
  std::uint64_t pointwise_cycles = 0;  // nonzero only for polymul
  std::uint64_t io_cycles = 0;
  std::uint64_t total_cycles = 0;
  /// Primitive operations issued per glitch phase, order
  /// select/read/compute/writeback.
  std::array<std::uint64_t, 4> phase_ops{};
  std::optional<double> energy_nj;
  double freq_mhz = 0;  // filled by with_frequency
  double latency_us = 0;
  double throughput_kntts = 0;
};

/// Returns the stats with latency_us = total_cycles / freq_mhz and
/// throughput_kntts = 1000 / latency_us filled in. Throws
/// std::invalid_argument on zero or negative frequency.
CycleStats with_frequency(CycleStats stats, double freq_mhz);

/// Formatted single-line JSON stats record (fixed field order, fixed float
/// precision, byte-stable for golden diffs).
std::string report_stats(const CycleStats& stats, double freq_mhz);

struct SimResult {
  Polynomial output;
  CycleStats stats;
};

/// Cycle-accurate behavioral model of the accelerator. Functional results
/// come out of the bit-serial adders and the modular-multiply blocks, not
/// out of the transform kernels; equality with ntt_ct / intt_gs /
/// polymul_cyclic is checked by the tests, not assumed.
///
/// Single-threaded by design: lane parallelism is lockstep within a pass and
/// is modeled, not threaded, so identical configurations give byte-identical
/// traces.
class Simulator {
 public:
  Simulator(const NttParams& params, CostModel model = {},
            TraceWriter* trace = nullptr);

  /// Full transform: bulk load (natural coefficient order; the bit-reversal
  /// of the decimation-in-time schedule is realized by the first migration's
  /// address mapping), log2(n) butterfly layers, bulk unload.
  SimResult run_transform(const Polynomial& input, Direction dir);

  /// Cyclic convolution: the two operands stream into separate engine groups
  /// whose forward transforms run in lockstep, one stage-2-equivalent
  /// pointwise multiply pass runs across the inter-group channels, and the
  /// inverse transform runs on group 1.
  SimResult run_polymul(const Polynomial& a, const Polynomial& b);

  /// Stage cycle formulae for this configuration (L = bit_width):
  /// stage1 = 3L + c1, stage2 = 2L + 16 + c2, stage3 = 4L + 17.
  std::uint64_t stage1_cycles() const;
  std::uint64_t stage2_cycles() const;
  std::uint64_t stage3_cycles() const;

 private:
  struct Engine;
  struct StageCycles {
    std::uint64_t s1 = 0;
    std::uint64_t s2 = 0;
    std::uint64_t s3 = 0;
  };

  void load_inputs(
      const std::vector<std::pair<Engine*, const Polynomial*>>& loads);
  Polynomial unload_outputs(Engine& eng, Direction dir);
  StageCycles run_butterfly_layer(std::vector<Engine*>& engines,
                                  std::uint32_t layer, Direction dir);
  void stage1_migrate(std::vector<Engine*>& engines,
                      const std::vector<Butterfly>& sched);
  void stage2_modmul(std::vector<Engine*>& engines,
                     const std::vector<Butterfly>& sched, Direction dir);
  void stage3_addsub(std::vector<Engine*>& engines,
                     const std::vector<Butterfly>& sched, Direction dir);
  void pointwise_pass(Engine& g1, Engine& g2);
  CycleStats finalize(const char* op, std::uint32_t layers,
                      std::uint64_t pointwise);
  void note(GlitchPhase phase);
  void marker(GlitchPhase phase, const std::string& unit, const char* op,
              std::optional<std::uint64_t> data);

  NttParams params_;
  CostModel model_;
  TraceWriter* trace_;
  TwiddleRom rom_fwd_;
  TwiddleRom rom_inv_scaled_;
  std::uint64_t cycle_ = 0;
  std::uint64_t io_cycles_ = 0;
  std::array<std::uint64_t, 4> phase_ops_{};
};

}  // namespace nmntt::sim
