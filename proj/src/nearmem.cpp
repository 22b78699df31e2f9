#include "nmntt/nearmem.hpp"

#include <stdexcept>
#include <utility>

namespace nmntt::sim {

NearMemUnit::NearMemUnit(std::uint32_t lane, std::uint32_t peer,
                         std::uint32_t width)
    : lane_(lane), peer_(peer), width_(width) {
  if (width == 0 || width > kMaxBitWidth) {
    throw std::invalid_argument("NearMemUnit: unsupported word width");
  }
}

void NearMemUnit::serial_load(Operand which, std::uint64_t word) {
  if (pass_active_) {
    throw std::logic_error("serial_load: serial pass in flight");
  }
  if ((word >> width_) != 0) {
    throw std::invalid_argument("serial_load: word wider than L bits");
  }
  if (which == Operand::A) {
    latch_a_ = word;
    loaded_a_ = true;
  } else {
    latch_b_ = word;
    loaded_b_ = true;
  }
}

void NearMemUnit::load_bit(Operand which, std::uint32_t index, std::uint8_t bit) {
  if (index >= width_) throw std::invalid_argument("load_bit: index out of range");
  if (bit > 1) throw std::invalid_argument("load_bit: non-binary bit");
  std::uint64_t& latch = which == Operand::A ? latch_a_ : latch_b_;
  latch = (latch & ~(std::uint64_t{1} << index)) |
          (static_cast<std::uint64_t>(bit) << index);
  if (which == Operand::A) {
    loaded_a_ = true;
  } else {
    loaded_b_ = true;
  }
}

void NearMemUnit::invert_b() {
  if (pass_active_) throw std::logic_error("invert_b: serial pass in flight");
  if (!loaded_b_) throw std::logic_error("invert_b: latch B is empty");
  latch_b_ = ~latch_b_ & ((std::uint64_t{1} << width_) - 1);
}

std::uint64_t NearMemUnit::latch(Operand which) const {
  return which == Operand::A ? latch_a_ : latch_b_;
}

bool NearMemUnit::loaded(Operand which) const {
  return which == Operand::A ? loaded_a_ : loaded_b_;
}

void NearMemUnit::begin_pass(AluOp op) {
  if (pass_active_) throw std::logic_error("begin_pass: pass already active");
  pass_active_ = true;
  next_bit_ = 0;
  result_ = 0;
  carry_ = op == AluOp::Sub ? 1 : 0;
}

std::uint8_t NearMemUnit::addsub_step(AluOp /*op*/, std::uint32_t bit_index) {
  if (!pass_active_) throw std::logic_error("addsub_step: no active pass");
  if (bit_index != next_bit_) {
    throw std::logic_error("addsub_step: bits must stream in order");
  }
  const std::uint8_t a = (latch_a_ >> bit_index) & 1;
  const std::uint8_t b = (latch_b_ >> bit_index) & 1;
  const std::uint8_t s = a ^ b ^ carry_;
  carry_ = static_cast<std::uint8_t>((a & b) | (a & carry_) | (b & carry_));
  result_ |= static_cast<std::uint64_t>(s) << bit_index;
  ++next_bit_;
  return s;
}

bool NearMemUnit::pass_done() const {
  return pass_active_ && next_bit_ == width_;
}

FieldElement NearMemUnit::finish_addsub(AluOp op, FieldElement q) {
  if (!pass_done()) {
    throw std::logic_error("finish_addsub: serial pass not complete");
  }
  pass_active_ = false;
  if (op == AluOp::Add) {
    // Full sum is carry * 2^L + result, at most 2q - 2: one subtraction.
    std::uint64_t full =
        (static_cast<std::uint64_t>(carry_) << width_) | result_;
    if (full >= q) full -= q;
    return static_cast<FieldElement>(full);
  }
  // Sub: carry-out set means a >= b and result is already a - b; clear means
  // a borrow, and adding q (dropping the wrapped 2^L) lands in [0, q).
  if (carry_) return static_cast<FieldElement>(result_);
  return static_cast<FieldElement>(result_ + q - (std::uint64_t{1} << width_));
}

FieldElement NearMemUnit::run_addsub(AluOp op, FieldElement q) {
  if (!loaded_a_ || !loaded_b_) {
    throw std::logic_error("run_addsub: operand latch is empty");
  }
  if (latch_a_ >= q || latch_b_ >= q) {
    throw std::invalid_argument("run_addsub: operand not reduced mod q");
  }
  if (op == AluOp::Sub) invert_b();
  begin_pass(op);
  for (std::uint32_t i = 0; i < width_; ++i) addsub_step(op, i);
  return finish_addsub(op, q);
}

ModMulResult NearMemUnit::run_modmul(FieldElement a, FieldElement b,
                                     const NttParams& params) const {
  return {barrett_mul(a, b, params), kModMulCycles};
}

void NearMemUnit::exchange_operands(NearMemUnit& ua, NearMemUnit& ub) {
  if (ua.peer_ != ub.lane_ || ub.peer_ != ua.lane_) {
    throw std::logic_error("exchange_operands: lanes are not peers");
  }
  if (ua.pass_active_ || ub.pass_active_) {
    throw std::logic_error("exchange_operands: serial pass in flight");
  }
  if (!ua.loaded_a_ || !ub.loaded_a_) {
    throw std::logic_error("exchange_operands: empty operand latch");
  }
  std::swap(ua.latch_a_, ub.latch_a_);
}

TwiddleRom TwiddleRom::build(const NttParams& params, Direction dir) {
  return {twiddle_table(params, dir)};
}

TwiddleRom TwiddleRom::build_inverse_scaled(const NttParams& params) {
  TwiddleRom rom = build(params, Direction::Inverse);
  const FieldElement inv2 = pow_mod(2, params.q - 2, params.q);
  for (FieldElement& w : rom.words) {
    w = barrett_mul(w, inv2, params);
  }
  return rom;
}

}  // namespace nmntt::sim
