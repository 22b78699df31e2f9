#include "nmntt/trace.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace nmntt::sim {

const char* phase_name(GlitchPhase phase) {
  switch (phase) {
    case GlitchPhase::Select: return "select";
    case GlitchPhase::Read: return "read";
    case GlitchPhase::Compute: return "compute";
    case GlitchPhase::WriteBack: return "writeback";
  }
  return "?";
}

std::array<GlitchPhase, 4> phase_sequence(std::uint64_t /*cycle*/) {
  return {GlitchPhase::Select, GlitchPhase::Read, GlitchPhase::Compute,
          GlitchPhase::WriteBack};
}

std::string to_json_line(const TraceEvent& ev) {
  std::ostringstream os;
  os << "{\"cycle\":" << ev.cycle << ",\"phase\":\"" << phase_name(ev.phase)
     << "\",\"unit\":\"" << ev.unit << "\",\"op\":\"" << ev.op
     << "\",\"address\":{\"array\":";
  if (ev.array) {
    os << '"' << *ev.array << '"';
  } else {
    os << "null";
  }
  os << ",\"row\":";
  if (ev.row) {
    os << *ev.row;
  } else {
    os << "null";
  }
  os << ",\"col\":";
  if (ev.col) {
    os << *ev.col;
  } else {
    os << "null";
  }
  os << "},\"data\":";
  if (ev.data) {
    os << *ev.data;
  } else {
    os << "null";
  }
  os << '}';
  return os.str();
}

void TraceWriter::emit(const TraceEvent& ev) {
  out_ << to_json_line(ev) << '\n';
  ++count_;
}

namespace {

int phase_index(const std::string& name) {
  if (name == "select") return 0;
  if (name == "read") return 1;
  if (name == "compute") return 2;
  if (name == "writeback") return 3;
  return -1;
}

enum class PortKind { None, Row, Column };

PortKind op_port(const std::string& op) {
  if (op == "row_read" || op == "row_write" || op == "copy_back") {
    return PortKind::Row;
  }
  if (op == "col_read" || op == "col_write") return PortKind::Column;
  return PortKind::None;
}

TraceValidation fail(std::uint64_t line, const std::string& why) {
  TraceValidation v;
  v.ok = false;
  v.error = "line " + std::to_string(line) + ": " + why;
  return v;
}

}  // namespace

TraceValidation validate_trace(std::istream& in) {
  using json = nlohmann::json;
  TraceValidation result;
  std::string line;
  std::uint64_t lineno = 0;
  bool first = true;
  std::uint64_t prev_cycle = 0;
  int prev_phase = 0;
  // Mode each sub-array was last switched to: 0 idle, 1 row port, 2 column.
  std::map<std::string, std::uint64_t> mode_of;
  // Access modes seen per sub-array within the current (cycle, phase).
  std::map<std::string, PortKind> phase_port;

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json ev;
    try {
      ev = json::parse(line);
    } catch (const json::parse_error& e) {
      return fail(lineno, std::string("not valid JSON: ") + e.what());
    }
    for (const char* key : {"cycle", "phase", "unit", "op", "address", "data"}) {
      if (!ev.contains(key)) {
        return fail(lineno, std::string("missing field '") + key + "'");
      }
    }
    if (ev.size() != 6 || !ev["address"].is_object() || ev["address"].size() != 3) {
      return fail(lineno, "unexpected record shape");
    }
    const json& addr = ev["address"];
    for (const char* key : {"array", "row", "col"}) {
      if (!addr.contains(key)) {
        return fail(lineno, std::string("address missing '") + key + "'");
      }
    }

    const std::uint64_t cycle = ev["cycle"].get<std::uint64_t>();
    const int phase = phase_index(ev["phase"].get<std::string>());
    if (phase < 0) return fail(lineno, "unknown phase");
    if (!first) {
      if (cycle < prev_cycle) return fail(lineno, "cycle number decreased");
      if (cycle == prev_cycle && phase < prev_phase) {
        return fail(lineno, "phase order violated within a cycle");
      }
    }
    if (first || cycle != prev_cycle || phase != prev_phase) {
      phase_port.clear();
    }
    first = false;
    prev_cycle = cycle;
    prev_phase = phase;

    const std::string op = ev["op"].get<std::string>();
    if (op == "set_mode") {
      if (phase != 0) return fail(lineno, "set_mode outside the select phase");
      if (!addr["array"].is_string() || !ev["data"].is_number_unsigned()) {
        return fail(lineno, "malformed set_mode record");
      }
      const std::uint64_t mode = ev["data"].get<std::uint64_t>();
      if (mode > 2) return fail(lineno, "unknown access mode");
      mode_of[addr["array"].get<std::string>()] = mode;
      continue;
    }

    const PortKind port = op_port(op);
    if (port == PortKind::None) continue;
    if (!addr["array"].is_string()) {
      return fail(lineno, "port access without a sub-array");
    }
    const std::string array = addr["array"].get<std::string>();
    const std::uint64_t need = port == PortKind::Row ? 1 : 2;
    if (mode_of[array] != need) {
      return fail(lineno, "access mode mismatch on sub-array " + array);
    }
    auto it = phase_port.find(array);
    if (it == phase_port.end()) {
      phase_port[array] = port;
    } else if (it->second != port) {
      return fail(lineno, "two access modes in one phase on sub-array " + array);
    }
    result.events = lineno;
  }
  result.events = lineno;
  return result;
}

}  // namespace nmntt::sim
