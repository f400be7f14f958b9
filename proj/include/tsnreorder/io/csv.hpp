#pragma once

// Trace CSV: header "index,size_bytes,emit_time_s,observe_time_s", one row per
// packet. "-" marks an unknown emit time, "inf" a lost packet.

#include "tsnreorder/trace.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace tsnreorder::io {

inline constexpr const char* kTraceHeader = "index,size_bytes,emit_time_s,observe_time_s";

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(std::string(tsnreorder::detail::trim(cell)));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace detail

inline Trace read_trace_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  Trace tr;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (tsnreorder::detail::trim(line).empty()) continue;
    if (!header) {
      if (tsnreorder::detail::trim(line) != kTraceHeader) {
        throw CsvError("line 1: expected header '" + std::string(kTraceHeader) + "'");
      }
      header = true;
      continue;
    }
    auto cells = detail::split_row(line);
    std::string at = "line " + std::to_string(lineno) + ": ";
    if (cells.size() != 4) throw CsvError(at + "expected 4 columns, got " + std::to_string(cells.size()));
    try {
      Rat idx = parse_rat(cells[0]);
      if (!idx.is_integer() || idx.sign() <= 0) throw CsvError(at + "index must be a positive integer");
      PacketObservation p;
      p.index = static_cast<std::size_t>(idx.numerator());
      p.size = parse_rat(cells[1]);
      if (cells[2] != "-") p.emit = parse_time(cells[2]);
      p.observe = parse_time(cells[3]);
      tr.packets.push_back(std::move(p));
    } catch (const ParseError& e) {
      throw CsvError(at + e.what());
    }
  }
  if (!header) throw CsvError("empty trace file (header required)");
  try {
    validate(tr);
  } catch (const TraceError& e) {
    throw CsvError(e.what());
  }
  return tr;
}

inline void write_trace_csv(std::ostream& out, const Trace& tr) {
  out << kTraceHeader << '\n';
  for (const auto& p : tr.packets) {
    out << p.index << ',' << to_string(p.size) << ',' << (p.emit ? to_string(*p.emit) : std::string("-")) << ','
        << to_string(p.observe) << '\n';
  }
}

}  // namespace tsnreorder::io
