#pragma once
// Behavioral model of one reconfigurable 10T SRAM sub-array: an R x C bit
// matrix behind two mutually exclusive ports. The row port streams one bit
// column per cycle across all rows at once (reads are destructive, like the
// real cell, so consumed words must be copied back); the column port moves
// one L-bit word per access for external I/O.

#include <cstdint>
#include <string>
#include <vector>

#include "nmntt/trace.hpp"

namespace nmntt::sim {

enum class SubArrayId { A, B };

/// Port configuration. Word-line levels per mode:
///   RowPort:    RWL=1 HWL=1 CWL=0
///   ColumnPort: RWL=1 HWL=0 CWL=1
///   Idle:       RWL=0 HWL=0 CWL=0
enum class AccessMode { Idle, RowPort, ColumnPort };

struct WordLines {
  bool rwl = false;
  bool hwl = false;
  bool cwl = false;
};

const char* subarray_name(SubArrayId id);
WordLines word_lines(AccessMode mode);

/// Word address: bits col_base .. col_base+L-1 of `row`, LSB first.
struct WordAddress {
  SubArrayId array = SubArrayId::A;
  std::uint32_t row = 0;
  std::uint32_t col_base = 0;
};

class SramSubArray {
 public:
  /// All-zero rows x cols matrix. Throws std::invalid_argument on a zero
  /// dimension. `label` prefixes the array name in trace records (used to
  /// distinguish engine groups, e.g. "g1:A").
  SramSubArray(SubArrayId id, std::uint32_t rows, std::uint32_t cols,
               TraceWriter* trace = nullptr, std::string label = "");

  /// Switches the port configuration. Only legal in the select phase and only
  /// if no access has run in the same (cycle, phase); throws std::logic_error
  /// on a mid-phase switch.
  void set_access_mode(AccessMode mode, const PhaseCtx& ctx);
  AccessMode mode() const { return mode_; }

  /// Reads bit column `col` of every row in one cycle (read phase, row-port
  /// mode). Destructive: the column is cleared, mirroring the 10T cell; the
  /// caller must copy_back any word it still needs.
  std::vector<std::uint8_t> row_read(std::uint32_t col, const PhaseCtx& ctx);

  /// Writes one bit per row into column `col` in one cycle (writeback phase,
  /// row-port mode).
  void row_write(std::uint32_t col, const std::vector<std::uint8_t>& lane_bits,
                 const PhaseCtx& ctx);

  /// Moves one L-bit word through the column port; L cycles per word are
  /// charged to the port ledger. Column reads are buffered by the I/O sense
  /// path and leave the cells intact.
  std::uint64_t column_read(std::uint32_t row, std::uint32_t col_base,
                            std::uint32_t width, const PhaseCtx& ctx);
  void column_write(std::uint32_t row, std::uint32_t col_base,
                    std::uint32_t width, std::uint64_t word,
                    const PhaseCtx& ctx);

  /// Restores a word consumed by a destructive row-port read (writeback
  /// phase, row-port mode); charged like any other L-bit word move.
  void copy_back(const WordAddress& addr, std::uint64_t word,
                 std::uint32_t width, const PhaseCtx& ctx);

  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }
  SubArrayId id() const { return id_; }

  /// Cycles charged per port so far. Every L-bit word move costs exactly L:
  /// L single-cycle column steps on the row port, or one L-cycle access on
  /// the column port.
  std::uint64_t row_port_cycles() const { return row_port_cycles_; }
  std::uint64_t column_port_cycles() const { return column_port_cycles_; }

  /// FNV-1a over the bit matrix; unchanged by anything but transfers.
  std::uint64_t content_hash() const;

  /// One '0'/'1' line per row, for debugging golden files.
  std::string dump() const;

 private:
  std::uint8_t& at(std::uint32_t row, std::uint32_t col);
  void check_row_ctx(const PhaseCtx& ctx, GlitchPhase expect, const char* op) const;
  void check_col_ctx(const PhaseCtx& ctx, GlitchPhase expect, const char* op) const;
  void note_access(const PhaseCtx& ctx);
  void emit(const PhaseCtx& ctx, const char* op, std::int64_t row,
            std::int64_t col, std::optional<std::uint64_t> data);

  SubArrayId id_;
  std::uint32_t rows_;
  std::uint32_t cols_;
  std::vector<std::uint8_t> bits_;
  AccessMode mode_ = AccessMode::Idle;
  TraceWriter* trace_;
  std::string label_;
  bool accessed_ = false;
  PhaseCtx last_ctx_{};
  std::uint64_t row_port_cycles_ = 0;
  std::uint64_t column_port_cycles_ = 0;
};

}  // namespace nmntt::sim
