#pragma once
// Per-row near-memory compute units: operand latches feeding a bit-serial
// full adder, an opaque 16-cycle Barrett modular-multiply block, and the
// exchange channel that links paired lanes of the two unit groups.

#include <cstdint>
#include <vector>

#include "nmntt/field.hpp"
#include "nmntt/transform.hpp"

namespace nmntt::sim {

enum class AluOp { Add, Sub };
enum class Operand { A, B };

/// The modular multiplier is treated as a black box with a fixed latency.
inline constexpr std::uint32_t kModMulCycles = 16;

struct ModMulResult {
  FieldElement value;
  std::uint32_t cycles;  // always kModMulCycles
};

class NearMemUnit {
 public:
  /// `lane` is this unit's row; `peer` is the row it exchanges with in the
  /// opposite group; `width` is the serial word width L.
  NearMemUnit(std::uint32_t lane, std::uint32_t peer, std::uint32_t width);

  /// Fills a whole operand latch (the register load that takes one L-cycle
  /// pass on the row port). Throws if a serial pass is active or the word has
  /// bits beyond L.
  void serial_load(Operand which, std::uint64_t word);

  /// Places one bit as it streams off a row-port read.
  void load_bit(Operand which, std::uint32_t index, std::uint8_t bit);

  /// Bitwise inversion of latch B within L bits; the subtrahend is inverted
  /// during its read-out pass at no extra per-bit cost.
  void invert_b();

  std::uint64_t latch(Operand which) const;
  bool loaded(Operand which) const;

  /// Starts a serial pass: carry preset to 0 (Add) or 1 (Sub). For Sub the
  /// B latch must already hold the inverted subtrahend.
  void begin_pass(AluOp op);

  /// One adder step: s_i = a_i ^ b_i ^ c, carry = majority(a_i, b_i, c).
  /// Steps must run in bit order 0..L-1; throws on out-of-order indices or
  /// when no pass is active. Returns s_i.
  std::uint8_t addsub_step(AluOp op, std::uint32_t bit_index);

  bool pass_done() const;
  std::uint8_t carry() const { return carry_; }

  /// Low L sum bits accumulated by the steps of the current/last pass.
  std::uint64_t raw_result() const { return result_; }

  /// Final modular correction (the single correction cycle): Add folds the
  /// carry-out and subtracts q once if needed; Sub re-adds q when the final
  /// carry indicates a borrow. Ends the pass.
  FieldElement finish_addsub(AluOp op, FieldElement q);

  /// Whole serial pass over pre-loaded latches: inversion (Sub), L steps,
  /// correction. Operands must be reduced mod q.
  FieldElement run_addsub(AluOp op, FieldElement q);

  /// The 16-cycle modular multiplier. Result equals barrett_mul exactly;
  /// cycles is kModMulCycles regardless of operands.
  ModMulResult run_modmul(FieldElement a, FieldElement b,
                          const NttParams& params) const;

  std::uint32_t lane() const { return lane_; }
  std::uint32_t peer() const { return peer_; }
  std::uint32_t width() const { return width_; }

  /// Swaps the A latches of two paired units across the channel. Throws if
  /// the lanes are not each other's peers, a pass is active, or either latch
  /// is empty. Exchanging twice restores the original placement.
  static void exchange_operands(NearMemUnit& ua, NearMemUnit& ub);

 private:
  std::uint32_t lane_;
  std::uint32_t peer_;
  std::uint32_t width_;
  std::uint64_t latch_a_ = 0;
  std::uint64_t latch_b_ = 0;
  bool loaded_a_ = false;
  bool loaded_b_ = false;
  bool pass_active_ = false;
  std::uint32_t next_bit_ = 0;
  std::uint8_t carry_ = 0;
  std::uint64_t result_ = 0;
};

/// Twiddle ROM sitting beside the unit groups. `build` mirrors the transform
/// module's bit-reverse-ordered table bitwise; `build_inverse_scaled` is the
/// inverse table with every entry multiplied by 2^-1, the per-layer halving
/// that realizes the 1/n factor on difference outputs.
struct TwiddleRom {
  std::vector<FieldElement> words;

  static TwiddleRom build(const NttParams& params, Direction dir);
  static TwiddleRom build_inverse_scaled(const NttParams& params);
};

}  // namespace nmntt::sim
