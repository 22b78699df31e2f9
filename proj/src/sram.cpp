#include "nmntt/sram.hpp"

#include <stdexcept>

namespace nmntt::sim {

const char* subarray_name(SubArrayId id) {
  return id == SubArrayId::A ? "A" : "B";
}

WordLines word_lines(AccessMode mode) {
  switch (mode) {
    case AccessMode::RowPort: return {true, true, false};
    case AccessMode::ColumnPort: return {true, false, true};
    case AccessMode::Idle: return {false, false, false};
  }
  return {};
}

SramSubArray::SramSubArray(SubArrayId id, std::uint32_t rows, std::uint32_t cols,
                           TraceWriter* trace, std::string label)
    : id_(id), rows_(rows), cols_(cols), trace_(trace), label_(std::move(label)) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("SramSubArray: zero dimension");
  }
  bits_.assign(static_cast<std::size_t>(rows) * cols, 0);
}

std::uint8_t& SramSubArray::at(std::uint32_t row, std::uint32_t col) {
  return bits_[static_cast<std::size_t>(row) * cols_ + col];
}

void SramSubArray::note_access(const PhaseCtx& ctx) {
  accessed_ = true;
  last_ctx_ = ctx;
}

void SramSubArray::emit(const PhaseCtx& ctx, const char* op, std::int64_t row,
                        std::int64_t col, std::optional<std::uint64_t> data) {
  if (!trace_) return;
  TraceEvent ev;
  ev.cycle = ctx.cycle;
  ev.phase = ctx.phase;
  ev.unit = label_ + subarray_name(id_);
  ev.op = op;
  ev.array = label_ + subarray_name(id_);
  if (row >= 0) ev.row = row;
  if (col >= 0) ev.col = col;
  ev.data = data;
  trace_->emit(ev);
}

void SramSubArray::set_access_mode(AccessMode mode, const PhaseCtx& ctx) {
  if (ctx.phase != GlitchPhase::Select) {
    throw std::logic_error("set_access_mode: mode changes only in the select phase");
  }
  if (accessed_ && last_ctx_.cycle == ctx.cycle && last_ctx_.phase == ctx.phase &&
      mode != mode_) {
    throw std::logic_error("set_access_mode: mid-phase mode switch");
  }
  mode_ = mode;
  note_access(ctx);
  emit(ctx, "set_mode", -1, -1, static_cast<std::uint64_t>(mode));
}

void SramSubArray::check_row_ctx(const PhaseCtx& ctx, GlitchPhase expect,
                                 const char* op) const {
  if (mode_ != AccessMode::RowPort) {
    throw std::logic_error(std::string(op) + ": sub-array not in row-port mode");
  }
  if (ctx.phase != expect) {
    throw std::logic_error(std::string(op) + ": wrong glitch phase");
  }
}

void SramSubArray::check_col_ctx(const PhaseCtx& ctx, GlitchPhase expect,
                                 const char* op) const {
  if (mode_ != AccessMode::ColumnPort) {
    throw std::logic_error(std::string(op) +
                           ": sub-array not in column-port mode");
  }
  if (ctx.phase != expect) {
    throw std::logic_error(std::string(op) + ": wrong glitch phase");
  }
}

std::vector<std::uint8_t> SramSubArray::row_read(std::uint32_t col,
                                                 const PhaseCtx& ctx) {
  check_row_ctx(ctx, GlitchPhase::Read, "row_read");
  if (col >= cols_) throw std::invalid_argument("row_read: column out of range");
  std::vector<std::uint8_t> out(rows_);
  for (std::uint32_t r = 0; r < rows_; ++r) {
    out[r] = at(r, col);
    at(r, col) = 0;  // destructive read
  }
  row_port_cycles_ += 1;
  note_access(ctx);
  emit(ctx, "row_read", -1, col, std::nullopt);
  return out;
}

void SramSubArray::row_write(std::uint32_t col,
                             const std::vector<std::uint8_t>& lane_bits,
                             const PhaseCtx& ctx) {
  check_row_ctx(ctx, GlitchPhase::WriteBack, "row_write");
  if (col >= cols_) throw std::invalid_argument("row_write: column out of range");
  if (lane_bits.size() != rows_) {
    throw std::invalid_argument("row_write: need one bit per row");
  }
  for (std::uint32_t r = 0; r < rows_; ++r) {
    if (lane_bits[r] > 1) {
      throw std::invalid_argument("row_write: non-binary lane bit");
    }
    at(r, col) = lane_bits[r];
  }
  row_port_cycles_ += 1;
  note_access(ctx);
  emit(ctx, "row_write", -1, col, std::nullopt);
}

std::uint64_t SramSubArray::column_read(std::uint32_t row, std::uint32_t col_base,
                                        std::uint32_t width, const PhaseCtx& ctx) {
  check_col_ctx(ctx, GlitchPhase::Read, "col_read");
  if (row >= rows_ || width == 0 || col_base + width > cols_) {
    throw std::invalid_argument("col_read: address out of range");
  }
  std::uint64_t word = 0;
  for (std::uint32_t b = 0; b < width; ++b) {
    word |= static_cast<std::uint64_t>(at(row, col_base + b)) << b;
  }
  column_port_cycles_ += width;
  note_access(ctx);
  emit(ctx, "col_read", row, col_base, word);
  return word;
}

void SramSubArray::column_write(std::uint32_t row, std::uint32_t col_base,
                                std::uint32_t width, std::uint64_t word,
                                const PhaseCtx& ctx) {
  check_col_ctx(ctx, GlitchPhase::WriteBack, "col_write");
  if (row >= rows_ || width == 0 || col_base + width > cols_) {
    throw std::invalid_argument("col_write: address out of range");
  }
  if (width < 64 && (word >> width) != 0) {
    throw std::invalid_argument("col_write: word wider than the address window");
  }
  for (std::uint32_t b = 0; b < width; ++b) {
    at(row, col_base + b) = static_cast<std::uint8_t>((word >> b) & 1);
  }
  column_port_cycles_ += width;
  note_access(ctx);
  emit(ctx, "col_write", row, col_base, word);
}

void SramSubArray::copy_back(const WordAddress& addr, std::uint64_t word,
                             std::uint32_t width, const PhaseCtx& ctx) {
  check_row_ctx(ctx, GlitchPhase::WriteBack, "copy_back");
  if (addr.array != id_) {
    throw std::invalid_argument("copy_back: address names the other sub-array");
  }
  if (addr.row >= rows_ || width == 0 || addr.col_base + width > cols_) {
    throw std::invalid_argument("copy_back: address out of range");
  }
  if (width < 64 && (word >> width) != 0) {
    throw std::invalid_argument("copy_back: word wider than the address window");
  }
  for (std::uint32_t b = 0; b < width; ++b) {
    at(addr.row, addr.col_base + b) = static_cast<std::uint8_t>((word >> b) & 1);
  }
  row_port_cycles_ += width;
  note_access(ctx);
  emit(ctx, "copy_back", addr.row, addr.col_base, word);
}

std::uint64_t SramSubArray::content_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint8_t b : bits_) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::string SramSubArray::dump() const {
  std::string out;
  out.reserve(static_cast<std::size_t>(rows_) * (cols_ + 1));
  for (std::uint32_t r = 0; r < rows_; ++r) {
    for (std::uint32_t c = 0; c < cols_; ++c) {
      out.push_back(bits_[static_cast<std::size_t>(r) * cols_ + c] ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace nmntt::sim
