#pragma once
// Glitch-phase tags, the trace event stream, and the trace replay validator.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace nmntt::sim {

/// Sub-cycle phases emitted by the glitch generator. Every clock cycle runs
/// them at most once each, in this order.
enum class GlitchPhase { Select, Read, Compute, WriteBack };

/// Lowercase wire name used in traces: select / read / compute / writeback.
const char* phase_name(GlitchPhase phase);

/// The per-cycle phase sequence. The sequence is fixed; the cycle argument is
/// part of the interface because the generator is consulted once per cycle.
std::array<GlitchPhase, 4> phase_sequence(std::uint64_t cycle);

/// Cycle + phase under which an SRAM access or unit operation executes.
struct PhaseCtx {
  std::uint64_t cycle = 0;
  GlitchPhase phase = GlitchPhase::Select;
};

/// One trace record. Serialized field order is fixed (cycle, phase, unit, op,
/// address{array,row,col}, data) so traces diff byte-stably. Row-port
/// accesses touch a whole column, so their `row` is null; `data` is null when
/// an op carries no word value.
struct TraceEvent {
  std::uint64_t cycle = 0;
  GlitchPhase phase = GlitchPhase::Select;
  std::string unit;
  std::string op;
  std::optional<std::string> array;
  std::optional<std::int64_t> row;
  std::optional<std::int64_t> col;
  std::optional<std::uint64_t> data;
};

std::string to_json_line(const TraceEvent& ev);

/// Streams events as JSONL. Components hold a TraceWriter* and treat nullptr
/// as tracing disabled.
class TraceWriter {
 public:
  explicit TraceWriter(std::ostream& out) : out_(out) {}
  void emit(const TraceEvent& ev);
  std::uint64_t events_emitted() const { return count_; }

 private:
  std::ostream& out_;
  std::uint64_t count_ = 0;
};

/// Replay result. `ok` is false on the first violated rule; `error` then
/// carries the 1-based line number and reason.
struct TraceValidation {
  bool ok = true;
  std::string error;
  std::uint64_t events = 0;
};

/// Replays a JSONL trace and checks, line by line:
///  - records parse and carry exactly the fixed fields;
///  - cycle numbers never decrease, and phases never run backwards within a
///    cycle;
///  - access-mode changes happen only in the select phase;
///  - every row-port / column-port access matches the mode its sub-array was
///    last switched to, so each sub-array sees at most one access mode per
///    glitch phase.
TraceValidation validate_trace(std::istream& in);

}  // namespace nmntt::sim
