#include "nmntt/scheduler.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace nmntt::sim {

namespace {

// Each row holds four L-bit word slots, bit columns [slot*L, slot*L + L):
//   T   paired left operand (written to sub-array A)
//   U   paired right operand / its twiddled copy (written to sub-array B,
//       mirrored into A by the stage-2 exchange on forward layers)
//   INV bitwise-inverted subtrahend staged for the serial subtract
//   RES layer results: sums land in A rows, differences in B rows, and the
//       external ports move words through this slot
constexpr std::uint32_t kSlotT = 0;
constexpr std::uint32_t kSlotU = 1;
constexpr std::uint32_t kSlotInv = 2;
constexpr std::uint32_t kSlotRes = 3;
constexpr std::uint32_t kSlots = 4;

// The stage-3 correction window: one conditional +/-q fixup per output plus
// the16-bit carry settle, a fixed 17 cycles regardless of L.
constexpr std::uint64_t kCorrectionCycles = 17;

// Logical value index -> physical word location at a layer boundary.
struct Loc {
  bool in_a = true;
  std::uint32_t row = 0;
};

// Natural placement used by the bulk ports: index k sits in row k of A for
// the first half, row k - n/2 of B for the second.
Loc natural_place(std::uint32_t k, std::uint32_t half) {
  if (k < half) return {true, k};
  return {false, k - half};
}

template <typename Word>
std::vector<std::uint8_t> bits_of(const std::vector<Word>& words,
                                  std::uint32_t bit) {
  std::vector<std::uint8_t> lane(words.size());
  for (std::size_t r = 0; r < words.size(); ++r) {
    lane[r] = static_cast<std::uint8_t>((words[r] >> bit) & 1);
  }
  return lane;
}

// 2^-1 mod q by shifting: even values halve directly, odd values borrow q
// (q is odd) to become even first. Equals multiplication by (q + 1) / 2.
FieldElement halve_mod(FieldElement v, FieldElement q) {
  if (v & 1) return static_cast<FieldElement>((static_cast<std::uint64_t>(v) + q) >> 1);
  return v >> 1;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

// One accelerator engine: the sub-array pair plus its two unit groups.
// Group A units sit beside sub-array A rows and produce sums; group B units
// sit beside sub-array B rows and produce differences and twiddle products.
// loc tracks where each logical working value currently lives.
struct Simulator::Engine {
  SramSubArray a;
  SramSubArray b;
  std::vector<NearMemUnit> group_a;
  std::vector<NearMemUnit> group_b;
  std::vector<Loc> loc;
  std::uint32_t half;
  std::string label;

  Engine(const NttParams& p, TraceWriter* trace, std::string lbl)
      : a(SubArrayId::A, p.n / 2, kSlots * p.bit_width, trace, lbl),
        b(SubArrayId::B, p.n / 2, kSlots * p.bit_width, trace, lbl),
        half(p.n / 2),
        label(std::move(lbl)) {
    group_a.reserve(half);
    group_b.reserve(half);
    for (std::uint32_t r = 0; r < half; ++r) {
      group_a.emplace_back(r, r, p.bit_width);
      group_b.emplace_back(r, r, p.bit_width);
    }
    loc.resize(p.n);
  }

  std::string unit_name(const char* suffix) const { return label + suffix; }

  // Per-lane compute unit name, e.g. "B[5]" or "g1:A[0]".
  std::string lane_name(char group, std::uint32_t r) const {
    return label + group + '[' + std::to_string(r) + ']';
  }
};

Simulator::Simulator(const NttParams& params, CostModel model,
                     TraceWriter* trace)
    : params_(params),
      model_(model),
      trace_(trace),
      rom_fwd_(TwiddleRom::build(params, Direction::Forward)),
      rom_inv_scaled_(TwiddleRom::build_inverse_scaled(params)) {
  validate_params(params_);
  if (model_.io_mux_width == 0) {
    throw std::invalid_argument("Simulator: io_mux_width must be positive");
  }
}

std::uint64_t Simulator::stage1_cycles() const {
  return 3ull * params_.bit_width + model_.stage1_overhead;
}

std::uint64_t Simulator::stage2_cycles() const {
  return 2ull * params_.bit_width + kModMulCycles + model_.stage2_overhead;
}

std::uint64_t Simulator::stage3_cycles() const {
  return 4ull * params_.bit_width + kCorrectionCycles;
}

void Simulator::note(GlitchPhase phase) {
  ++phase_ops_[static_cast<std::size_t>(phase)];
}

void Simulator::marker(GlitchPhase phase, const std::string& unit,
                       const char* op, std::optional<std::uint64_t> data) {
  note(phase);
  if (!trace_) return;
  TraceEvent ev;
  ev.cycle = cycle_;
  ev.phase = phase;
  ev.unit = unit;
  ev.op = op;
  ev.data = data;
  trace_->emit(ev);
}

// Bulk load through the column ports. All listed engines fill concurrently
// (the operand streams of a convolution arrive together), so the wall-clock
// charge of ceil(n * L / W) external cycles is paid once.
void Simulator::load_inputs(
    const std::vector<std::pair<Engine*, const Polynomial*>>& loads) {
  const std::uint32_t n = params_.n;
  const std::uint32_t lw = params_.bit_width;
  const std::uint32_t w = model_.io_mux_width;
  PhaseCtx sel{cycle_, GlitchPhase::Select};
  for (auto& [eng, poly] : loads) {
    eng->a.set_access_mode(AccessMode::ColumnPort, sel);
    note(GlitchPhase::Select);
    eng->b.set_access_mode(AccessMode::ColumnPort, sel);
    note(GlitchPhase::Select);
  }
  for (std::uint32_t j = 0; j < n; ++j) {
    const std::uint64_t off = static_cast<std::uint64_t>(j) * lw / w;
    PhaseCtx ctx{cycle_ + off, GlitchPhase::WriteBack};
    for (auto& [eng, poly] : loads) {
      const Loc lc = natural_place(j, eng->half);
      SramSubArray& arr = lc.in_a ? eng->a : eng->b;
      arr.column_write(lc.row, kSlotRes * lw, lw, (*poly)[j], ctx);
      note(GlitchPhase::WriteBack);
    }
  }
  const std::uint64_t charge =
      (static_cast<std::uint64_t>(n) * lw + w - 1) / w;
  cycle_ += charge;
  io_cycles_ += charge;
}

// Bulk unload. The forward transform leaves output index m at loc[m]; the
// inverse ladder leaves it at loc[bitrev(m)] (the decimation-in-frequency
// ladder emits bit-reversed order, and per-layer halving has already applied
// the 1/n factor).
Polynomial Simulator::unload_outputs(Engine& eng, Direction dir) {
  const std::uint32_t n = params_.n;
  const std::uint32_t lw = params_.bit_width;
  const std::uint32_t w = model_.io_mux_width;
  const std::uint32_t bits = log2_exact(n);
  PhaseCtx sel{cycle_, GlitchPhase::Select};
  eng.a.set_access_mode(AccessMode::ColumnPort, sel);
  note(GlitchPhase::Select);
  eng.b.set_access_mode(AccessMode::ColumnPort, sel);
  note(GlitchPhase::Select);
  Polynomial out(n);
  for (std::uint32_t m = 0; m < n; ++m) {
    const std::uint32_t k = dir == Direction::Forward ? m : bit_reverse(m, bits);
    const Loc lc = eng.loc[k];
    const std::uint64_t off = static_cast<std::uint64_t>(m) * lw / w;
    PhaseCtx ctx{cycle_ + off, GlitchPhase::Read};
    SramSubArray& arr = lc.in_a ? eng.a : eng.b;
    out[m] = static_cast<FieldElement>(
        arr.column_read(lc.row, kSlotRes * lw, lw, ctx));
    note(GlitchPhase::Read);
  }
  const std::uint64_t charge =
      (static_cast<std::uint64_t>(n) * lw + w - 1) / w;
  cycle_ += charge;
  io_cycles_ += charge;
  return out;
}

// Stage 1, operand migration: the previous layer's results stream off the
// RES columns (destructively), the exchange window routes each butterfly's
// two operands onto one lane pair, the pair is written back as T and U words
// in the same row of the two arrays, and the consumed source words are
// restored by copy-back. Costs L + c1 + L + L cycles.
void Simulator::stage1_migrate(std::vector<Engine*>& engines,
                               const std::vector<Butterfly>& sched) {
  const std::uint32_t lw = params_.bit_width;
  const std::uint32_t half = params_.n / 2;
  PhaseCtx sel{cycle_, GlitchPhase::Select};
  for (Engine* e : engines) {
    if (e->a.mode() != AccessMode::RowPort) {
      e->a.set_access_mode(AccessMode::RowPort, sel);
      note(GlitchPhase::Select);
    }
    if (e->b.mode() != AccessMode::RowPort) {
      e->b.set_access_mode(AccessMode::RowPort, sel);
      note(GlitchPhase::Select);
    }
  }

  std::vector<std::vector<std::uint64_t>> vals_a(engines.size());
  std::vector<std::vector<std::uint64_t>> vals_b(engines.size());
  for (auto& v : vals_a) v.assign(half, 0);
  for (auto& v : vals_b) v.assign(half, 0);
  for (std::uint32_t bit = 0; bit < lw; ++bit) {
    PhaseCtx ctx{cycle_ + bit, GlitchPhase::Read};
    for (std::size_t ei = 0; ei < engines.size(); ++ei) {
      Engine* e = engines[ei];
      const auto col_a = e->a.row_read(kSlotRes * lw + bit, ctx);
      note(GlitchPhase::Read);
      const auto col_b = e->b.row_read(kSlotRes * lw + bit, ctx);
      note(GlitchPhase::Read);
      for (std::uint32_t r = 0; r < half; ++r) {
        vals_a[ei][r] |= static_cast<std::uint64_t>(col_a[r]) << bit;
        vals_b[ei][r] |= static_cast<std::uint64_t>(col_b[r]) << bit;
      }
    }
  }
  cycle_ += lw;

  for (std::size_t ei = 0; ei < engines.size(); ++ei) {
    Engine* e = engines[ei];
    marker(GlitchPhase::Compute, e->unit_name("channel"), "exchange",
           std::nullopt);
    auto value_of = [&](const Loc& lc) {
      return lc.in_a ? vals_a[ei][lc.row] : vals_b[ei][lc.row];
    };
    for (std::uint32_t r = 0; r < half; ++r) {
      e->group_a[r].serial_load(Operand::A, value_of(e->loc[sched[r].i]));
      note(GlitchPhase::Compute);
      e->group_b[r].serial_load(Operand::A, value_of(e->loc[sched[r].j]));
      note(GlitchPhase::Compute);
    }
  }
  cycle_ += model_.stage1_overhead;

  for (std::uint32_t bit = 0; bit < lw; ++bit) {
    PhaseCtx ctx{cycle_ + bit, GlitchPhase::WriteBack};
    for (Engine* e : engines) {
      std::vector<std::uint8_t> lane_t(half);
      std::vector<std::uint8_t> lane_u(half);
      for (std::uint32_t r = 0; r < half; ++r) {
        lane_t[r] = static_cast<std::uint8_t>(
            (e->group_a[r].latch(Operand::A) >> bit) & 1);
        lane_u[r] = static_cast<std::uint8_t>(
            (e->group_b[r].latch(Operand::A) >> bit) & 1);
      }
      e->a.row_write(kSlotT * lw + bit, lane_t, ctx);
      note(GlitchPhase::WriteBack);
      e->b.row_write(kSlotU * lw + bit, lane_u, ctx);
      note(GlitchPhase::WriteBack);
    }
  }
  cycle_ += lw;

  PhaseCtx cb{cycle_, GlitchPhase::WriteBack};
  for (std::size_t ei = 0; ei < engines.size(); ++ei) {
    Engine* e = engines[ei];
    for (std::uint32_t r = 0; r < half; ++r) {
      e->a.copy_back({SubArrayId::A, r, kSlotRes * lw}, vals_a[ei][r], lw, cb);
      note(GlitchPhase::WriteBack);
      e->b.copy_back({SubArrayId::B, r, kSlotRes * lw}, vals_b[ei][r], lw, cb);
      note(GlitchPhase::WriteBack);
    }
  }
  cycle_ += lw;
}

// Stage 2, twiddle multiply: the words in the U slots (right operands on
// forward layers, raw differences on inverse layers) stream to the group-B
// multipliers, the ROM window fetches and routes the per-lane factors, the
// 16-cycle multiply runs, and the products are written back. On forward
// layers the product crosses the channel so both arrays hold a copy; on
// inverse layers it is the layer's difference output and lands in B RES.
// Costs L + c2 + 16 + L cycles.
void Simulator::stage2_modmul(std::vector<Engine*>& engines,
                              const std::vector<Butterfly>& sched,
                              Direction dir) {
  const std::uint32_t lw = params_.bit_width;
  const std::uint32_t half = params_.n / 2;
  const std::vector<FieldElement>& rom =
      dir == Direction::Forward ? rom_fwd_.words : rom_inv_scaled_.words;

  std::vector<std::vector<std::uint64_t>> uvals(engines.size());
  for (auto& v : uvals) v.assign(half, 0);
  for (std::uint32_t bit = 0; bit < lw; ++bit) {
    PhaseCtx ctx{cycle_ + bit, GlitchPhase::Read};
    for (std::size_t ei = 0; ei < engines.size(); ++ei) {
      const auto col = engines[ei]->b.row_read(kSlotU * lw + bit, ctx);
      note(GlitchPhase::Read);
      for (std::uint32_t r = 0; r < half; ++r) {
        uvals[ei][r] |= static_cast<std::uint64_t>(col[r]) << bit;
      }
    }
  }
  cycle_ += lw;

  for (Engine* e : engines) {
    marker(GlitchPhase::Compute, e->unit_name("rom"), "twiddle_fetch",
           std::nullopt);
  }
  cycle_ += model_.stage2_overhead;

  std::vector<std::vector<FieldElement>> prods(engines.size());
  for (std::size_t ei = 0; ei < engines.size(); ++ei) {
    Engine* e = engines[ei];
    prods[ei].resize(half);
    for (std::uint32_t r = 0; r < half; ++r) {
      const ModMulResult mr = e->group_b[r].run_modmul(
          static_cast<FieldElement>(uvals[ei][r]), rom[sched[r].tw_index],
          params_);
      if (mr.cycles != kModMulCycles) {
        throw std::logic_error("stage2: modular multiply latency violated");
      }
      prods[ei][r] = mr.value;
      marker(GlitchPhase::Compute, e->lane_name('B', r), "modmul", mr.value);
    }
  }
  cycle_ += kModMulCycles;

  if (dir == Direction::Forward) {
    for (std::size_t ei = 0; ei < engines.size(); ++ei) {
      Engine* e = engines[ei];
      marker(GlitchPhase::Compute, e->unit_name("channel"), "exchange",
             std::nullopt);
      for (std::uint32_t r = 0; r < half; ++r) {
        e->group_b[r].serial_load(Operand::B, prods[ei][r]);
        note(GlitchPhase::Compute);
        e->group_b[r].serial_load(Operand::A, prods[ei][r]);
        note(GlitchPhase::Compute);
        NearMemUnit::exchange_operands(e->group_a[r], e->group_b[r]);
        note(GlitchPhase::Compute);
      }
    }
    for (std::uint32_t bit = 0; bit < lw; ++bit) {
      PhaseCtx ctx{cycle_ + bit, GlitchPhase::WriteBack};
      for (Engine* e : engines) {
        std::vector<std::uint8_t> lane_a(half);
        std::vector<std::uint8_t> lane_b(half);
        for (std::uint32_t r = 0; r < half; ++r) {
          lane_a[r] = static_cast<std::uint8_t>(
              (e->group_a[r].latch(Operand::A) >> bit) & 1);
          lane_b[r] = static_cast<std::uint8_t>(
              (e->group_b[r].latch(Operand::B) >> bit) & 1);
        }
        e->a.row_write(kSlotU * lw + bit, lane_a, ctx);
        note(GlitchPhase::WriteBack);
        e->b.row_write(kSlotU * lw + bit, lane_b, ctx);
        note(GlitchPhase::WriteBack);
      }
    }
  } else {
    for (std::size_t ei = 0; ei < engines.size(); ++ei) {
      Engine* e = engines[ei];
      for (std::uint32_t r = 0; r < half; ++r) {
        e->group_b[r].serial_load(Operand::B, prods[ei][r]);
        note(GlitchPhase::Compute);
      }
    }
    for (std::uint32_t bit = 0; bit < lw; ++bit) {
      PhaseCtx ctx{cycle_ + bit, GlitchPhase::WriteBack};
      for (Engine* e : engines) {
        std::vector<std::uint8_t> lane_b(half);
        for (std::uint32_t r = 0; r < half; ++r) {
          lane_b[r] = static_cast<std::uint8_t>(
              (e->group_b[r].latch(Operand::B) >> bit) & 1);
        }
        e->b.row_write(kSlotRes * lw + bit, lane_b, ctx);
        note(GlitchPhase::WriteBack);
      }
    }
  }
  cycle_ += lw;
}

// Stage 3, serial add/sub: the subtrahend streams out once more and its
// inverted copy is staged in INV (forward layers read the twiddled copy from
// A U; inverse layers read the original right operand from B U and route it
// across the channel). Then T and INV stream together while both adder
// groups step bit-serially, the correction window applies the conditional
// +/-q fixup (folding the per-layer halving on inverse sums), and the two
// result passes store sums to A RES and differences to B RES, except on
// inverse layers where the raw difference parks in B U for the multiplier.
// Costs L + L + 17 + L + L cycles.
void Simulator::stage3_addsub(std::vector<Engine*>& engines,
                              const std::vector<Butterfly>& /*sched*/,
                              Direction dir) {
  const std::uint32_t lw = params_.bit_width;
  const std::uint32_t half = params_.n / 2;
  const FieldElement q = params_.q;

  for (std::uint32_t bit = 0; bit < lw; ++bit) {
    PhaseCtx rd{cycle_ + bit, GlitchPhase::Read};
    PhaseCtx wb{cycle_ + bit, GlitchPhase::WriteBack};
    std::vector<std::vector<std::uint8_t>> inv(engines.size());
    for (std::size_t ei = 0; ei < engines.size(); ++ei) {
      Engine* e = engines[ei];
      std::vector<std::uint8_t> src;
      if (dir == Direction::Forward) {
        const auto col_a = e->a.row_read(kSlotU * lw + bit, rd);
        note(GlitchPhase::Read);
        for (std::uint32_t r = 0; r < half; ++r) {
          e->group_a[r].load_bit(Operand::B, bit, col_a[r]);
        }
        src = e->b.row_read(kSlotU * lw + bit, rd);
        note(GlitchPhase::Read);
      } else {
        src = e->b.row_read(kSlotU * lw + bit, rd);
        note(GlitchPhase::Read);
        for (std::uint32_t r = 0; r < half; ++r) {
          e->group_a[r].load_bit(Operand::B, bit, src[r]);
        }
      }
      inv[ei].resize(half);
      for (std::uint32_t r = 0; r < half; ++r) {
        inv[ei][r] = static_cast<std::uint8_t>(src[r] ^ 1);
      }
    }
    // All reads land before any write so engines interleave cleanly within
    // the shared cycle.
    for (std::size_t ei = 0; ei < engines.size(); ++ei) {
      engines[ei]->b.row_write(kSlotInv * lw + bit, inv[ei], wb);
      note(GlitchPhase::WriteBack);
    }
  }
  cycle_ += lw;

  for (Engine* e : engines) {
    for (std::uint32_t r = 0; r < half; ++r) {
      e->group_a[r].begin_pass(AluOp::Add);
      e->group_b[r].begin_pass(AluOp::Sub);
    }
  }
  for (std::uint32_t bit = 0; bit < lw; ++bit) {
    PhaseCtx rd{cycle_ + bit, GlitchPhase::Read};
    for (Engine* e : engines) {
      const auto col_t = e->a.row_read(kSlotT * lw + bit, rd);
      note(GlitchPhase::Read);
      const auto col_i = e->b.row_read(kSlotInv * lw + bit, rd);
      note(GlitchPhase::Read);
      for (std::uint32_t r = 0; r < half; ++r) {
        e->group_a[r].load_bit(Operand::A, bit, col_t[r]);
        e->group_a[r].addsub_step(AluOp::Add, bit);
        e->group_b[r].load_bit(Operand::A, bit, col_t[r]);
        e->group_b[r].load_bit(Operand::B, bit, col_i[r]);
        e->group_b[r].addsub_step(AluOp::Sub, bit);
      }
    }
  }
  cycle_ += lw;

  std::vector<std::vector<std::uint64_t>> sums(engines.size());
  std::vector<std::vector<std::uint64_t>> diffs(engines.size());
  for (std::size_t ei = 0; ei < engines.size(); ++ei) {
    Engine* e = engines[ei];
    sums[ei].resize(half);
    diffs[ei].resize(half);
    for (std::uint32_t r = 0; r < half; ++r) {
      FieldElement s = e->group_a[r].finish_addsub(AluOp::Add, q);
      if (dir == Direction::Inverse) s = halve_mod(s, q);
      sums[ei][r] = s;
      diffs[ei][r] = e->group_b[r].finish_addsub(AluOp::Sub, q);
      marker(GlitchPhase::Compute, e->lane_name('A', r), "addsub", s);
      marker(GlitchPhase::Compute, e->lane_name('B', r), "addsub",
             diffs[ei][r]);
    }
  }
  cycle_ += kCorrectionCycles;

  for (std::uint32_t bit = 0; bit < lw; ++bit) {
    PhaseCtx ctx{cycle_ + bit, GlitchPhase::WriteBack};
    for (std::size_t ei = 0; ei < engines.size(); ++ei) {
      engines[ei]->a.row_write(kSlotRes * lw + bit, bits_of(sums[ei], bit),
                               ctx);
      note(GlitchPhase::WriteBack);
    }
  }
  cycle_ += lw;

  const std::uint32_t diff_slot = dir == Direction::Forward ? kSlotRes : kSlotU;
  for (std::uint32_t bit = 0; bit < lw; ++bit) {
    PhaseCtx ctx{cycle_ + bit, GlitchPhase::WriteBack};
    for (std::size_t ei = 0; ei < engines.size(); ++ei) {
      engines[ei]->b.row_write(diff_slot * lw + bit, bits_of(diffs[ei], bit),
                               ctx);
      note(GlitchPhase::WriteBack);
    }
  }
  cycle_ += lw;
}

// One butterfly layer across all engines in lockstep: migrate, then multiply
// and add/sub. Forward layers twiddle the right operand before the add/sub;
// inverse layers add/sub first and twiddle the difference. After the layer,
// pair r's sum sits in A row r and its difference output in B row r.
Simulator::StageCycles Simulator::run_butterfly_layer(
    std::vector<Engine*>& engines, std::uint32_t layer, Direction dir) {
  const std::vector<Butterfly> sched = butterfly_layer(params_, dir, layer);
  StageCycles meas;
  std::uint64_t mark = cycle_;
  stage1_migrate(engines, sched);
  meas.s1 = cycle_ - mark;
  if (dir == Direction::Forward) {
    mark = cycle_;
    stage2_modmul(engines, sched, dir);
    meas.s2 = cycle_ - mark;
    mark = cycle_;
    stage3_addsub(engines, sched, dir);
    meas.s3 = cycle_ - mark;
  } else {
    mark = cycle_;
    stage3_addsub(engines, sched, dir);
    meas.s3 = cycle_ - mark;
    mark = cycle_;
    stage2_modmul(engines, sched, dir);
    meas.s2 = cycle_ - mark;
  }
  for (Engine* e : engines) {
    for (std::uint32_t r = 0; r < e->half; ++r) {
      e->loc[sched[r].i] = {true, r};
      e->loc[sched[r].j] = {false, r};
    }
  }
  if (meas.s1 != stage1_cycles() || meas.s2 != stage2_cycles() ||
      meas.s3 != stage3_cycles()) {
    throw std::logic_error("butterfly layer: stage cycle structure violated");
  }
  return meas;
}

// The convolution's pointwise pass: one stage-2-shaped window in which all n
// multipliers of engine 1 run at once. Engine 2's spectrum words cross the
// inter-group channel during the route window and the products land back in
// engine 1's RES slots, in place, so the inverse transform starts from the
// placement the forward transform left behind.
void Simulator::pointwise_pass(Engine& g1, Engine& g2) {
  const std::uint32_t lw = params_.bit_width;
  const std::uint32_t half = params_.n / 2;
  const std::uint64_t mark = cycle_;

  std::vector<std::uint64_t> a1(half, 0), b1(half, 0), a2(half, 0), b2(half, 0);
  for (std::uint32_t bit = 0; bit < lw; ++bit) {
    PhaseCtx ctx{cycle_ + bit, GlitchPhase::Read};
    const auto c_a1 = g1.a.row_read(kSlotRes * lw + bit, ctx);
    note(GlitchPhase::Read);
    const auto c_b1 = g1.b.row_read(kSlotRes * lw + bit, ctx);
    note(GlitchPhase::Read);
    const auto c_a2 = g2.a.row_read(kSlotRes * lw + bit, ctx);
    note(GlitchPhase::Read);
    const auto c_b2 = g2.b.row_read(kSlotRes * lw + bit, ctx);
    note(GlitchPhase::Read);
    for (std::uint32_t r = 0; r < half; ++r) {
      a1[r] |= static_cast<std::uint64_t>(c_a1[r]) << bit;
      b1[r] |= static_cast<std::uint64_t>(c_b1[r]) << bit;
      a2[r] |= static_cast<std::uint64_t>(c_a2[r]) << bit;
      b2[r] |= static_cast<std::uint64_t>(c_b2[r]) << bit;
      g1.group_a[r].load_bit(Operand::B, bit, c_a1[r]);
      g1.group_b[r].load_bit(Operand::B, bit, c_b1[r]);
    }
  }
  cycle_ += lw;

  marker(GlitchPhase::Compute, g1.unit_name("channel"), "exchange",
         std::nullopt);
  for (std::uint32_t r = 0; r < half; ++r) {
    g1.group_a[r].serial_load(Operand::A, a2[r]);
    note(GlitchPhase::Compute);
    g1.group_b[r].serial_load(Operand::A, b2[r]);
    note(GlitchPhase::Compute);
  }
  cycle_ += model_.stage2_overhead;

  std::vector<FieldElement> prod_a(half), prod_b(half);
  for (std::uint32_t r = 0; r < half; ++r) {
    prod_a[r] = g1.group_a[r]
                    .run_modmul(static_cast<FieldElement>(a1[r]),
                                static_cast<FieldElement>(a2[r]), params_)
                    .value;
    marker(GlitchPhase::Compute, g1.lane_name('A', r), "modmul", prod_a[r]);
    prod_b[r] = g1.group_b[r]
                    .run_modmul(static_cast<FieldElement>(b1[r]),
                                static_cast<FieldElement>(b2[r]), params_)
                    .value;
    marker(GlitchPhase::Compute, g1.lane_name('B', r), "modmul", prod_b[r]);
  }
  cycle_ += kModMulCycles;

  for (std::uint32_t bit = 0; bit < lw; ++bit) {
    PhaseCtx ctx{cycle_ + bit, GlitchPhase::WriteBack};
    g1.a.row_write(kSlotRes * lw + bit, bits_of(prod_a, bit), ctx);
    note(GlitchPhase::WriteBack);
    g1.b.row_write(kSlotRes * lw + bit, bits_of(prod_b, bit), ctx);
    note(GlitchPhase::WriteBack);
  }
  cycle_ += lw;

  if (cycle_ - mark != stage2_cycles()) {
    throw std::logic_error("pointwise pass: cycle structure violated");
  }
}

CycleStats Simulator::finalize(const char* op, std::uint32_t layers,
                               std::uint64_t pointwise) {
  CycleStats st;
  st.op = op;
  st.n = params_.n;
  st.q = params_.q;
  st.bit_width = params_.bit_width;
  st.layers = layers;
  st.stage1_cycles = stage1_cycles();
  st.stage2_cycles = stage2_cycles();
  st.stage3_cycles = stage3_cycles();
  st.pointwise_cycles = pointwise;
  st.io_cycles = io_cycles_;
  st.total_cycles = cycle_;
  st.phase_ops = phase_ops_;
  if (st.stage3_cycles != 4ull * params_.bit_width + kCorrectionCycles) {
    throw std::logic_error("stats: stage-3 cycle law violated");
  }
  const std::uint64_t expect =
      st.io_cycles +
      static_cast<std::uint64_t>(layers) *
          (st.stage1_cycles + st.stage2_cycles + st.stage3_cycles) +
      pointwise;
  if (st.total_cycles != expect) {
    throw std::logic_error("stats: cycle ledger does not decompose");
  }
  if (model_.energy_nj_per_op) {
    double e = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      e += static_cast<double>(phase_ops_[i]) * (*model_.energy_nj_per_op)[i];
    }
    st.energy_nj = e;
  }
  return st;
}

SimResult Simulator::run_transform(const Polynomial& input, Direction dir) {
  if (input.size() != params_.n) {
    throw std::invalid_argument("run_transform: input length != n");
  }
  for (FieldElement c : input) {
    if (c >= params_.q) {
      throw std::invalid_argument("run_transform: coefficient not in [0, q)");
    }
  }
  cycle_ = 0;
  io_cycles_ = 0;
  phase_ops_ = {};

  Engine eng(params_, trace_, "");
  std::vector<Engine*> engines{&eng};
  load_inputs({{&eng, &input}});

  const std::uint32_t bits = log2_exact(params_.n);
  for (std::uint32_t k = 0; k < params_.n; ++k) {
    const std::uint32_t src = dir == Direction::Forward ? bit_reverse(k, bits) : k;
    eng.loc[k] = natural_place(src, eng.half);
  }
  for (std::uint32_t layer = 0; layer < bits; ++layer) {
    run_butterfly_layer(engines, layer, dir);
  }

  SimResult res;
  res.output = unload_outputs(eng, dir);
  res.stats = finalize(dir == Direction::Forward ? "ntt" : "intt", bits, 0);
  return res;
}

SimResult Simulator::run_polymul(const Polynomial& a, const Polynomial& b) {
  if (a.size() != params_.n || b.size() != params_.n) {
    throw std::invalid_argument("run_polymul: input length != n");
  }
  for (FieldElement c : a) {
    if (c >= params_.q) {
      throw std::invalid_argument("run_polymul: coefficient not in [0, q)");
    }
  }
  for (FieldElement c : b) {
    if (c >= params_.q) {
      throw std::invalid_argument("run_polymul: coefficient not in [0, q)");
    }
  }
  cycle_ = 0;
  io_cycles_ = 0;
  phase_ops_ = {};

  Engine g1(params_, trace_, "g1:");
  Engine g2(params_, trace_, "g2:");
  std::vector<Engine*> both{&g1, &g2};
  load_inputs({{&g1, &a}, {&g2, &b}});

  const std::uint32_t bits = log2_exact(params_.n);
  for (std::uint32_t k = 0; k < params_.n; ++k) {
    const Loc lc = natural_place(bit_reverse(k, bits), g1.half);
    g1.loc[k] = lc;
    g2.loc[k] = lc;
  }
  for (std::uint32_t layer = 0; layer < bits; ++layer) {
    run_butterfly_layer(both, layer, Direction::Forward);
  }

  pointwise_pass(g1, g2);

  std::vector<Engine*> g1_only{&g1};
  for (std::uint32_t layer = 0; layer < bits; ++layer) {
    run_butterfly_layer(g1_only, layer, Direction::Inverse);
  }

  SimResult res;
  res.output = unload_outputs(g1, Direction::Inverse);
  res.stats = finalize("polymul", 2 * bits, stage2_cycles());
  return res;
}

CycleStats with_frequency(CycleStats stats, double freq_mhz) {
  if (!(freq_mhz > 0)) {
    throw std::invalid_argument("with_frequency: frequency must be positive");
  }
  stats.freq_mhz = freq_mhz;
  stats.latency_us = static_cast<double>(stats.total_cycles) / freq_mhz;
  stats.throughput_kntts = 1000.0 / stats.latency_us;
  return stats;
}

std::string report_stats(const CycleStats& stats, double freq_mhz) {
  const CycleStats st = with_frequency(stats, freq_mhz);
  std::ostringstream out;
  out << "{\"op\":\"" << st.op << "\"";
  out << ",\"n\":" << st.n;
  out << ",\"q\":" << st.q;
  out << ",\"bit_width\":" << st.bit_width;
  out << ",\"layers\":" << st.layers;
  out << ",\"stage1_cycles\":" << st.stage1_cycles;
  out << ",\"stage2_cycles\":" << st.stage2_cycles;
  out << ",\"stage3_cycles\":" << st.stage3_cycles;
  out << ",\"pointwise_cycles\":" << st.pointwise_cycles;
  out << ",\"io_cycles\":" << st.io_cycles;
  out << ",\"total_cycles\":" << st.total_cycles;
  out << ",\"freq_mhz\":" << fmt_double(st.freq_mhz);
  out << ",\"latency_us\":" << fmt_double(st.latency_us);
  out << ",\"throughput_kntts\":" << fmt_double(st.throughput_kntts);
  out << ",\"phase_ops\":{\"select\":" << st.phase_ops[0];
  out << ",\"read\":" << st.phase_ops[1];
  out << ",\"compute\":" << st.phase_ops[2];
  out << ",\"writeback\":" << st.phase_ops[3] << "}";
  out << ",\"energy_nj\":";
  if (st.energy_nj) {
    out << fmt_double(*st.energy_nj);
  } else {
    out << "null";
  }
  out << "}";
  return out.str();
}

}  // namespace nmntt::sim
