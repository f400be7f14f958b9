#pragma once

// Packet traces: what a flow looked like at one observation point.

#include "tsnreorder/curve.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsnreorder {

class TraceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PacketObservation {
  std::size_t index = 0;     // sequence number, from 1
  Rat size;                  // bytes
  std::optional<Rat> emit;   // A_n, absent if unknown
  Rat observe;               // E_n, +inf when lost

  bool lost() const { return observe.is_infinite(); }
};

struct Trace {
  std::optional<FlowSpec> flow;
  std::vector<PacketObservation> packets;

  std::size_t size() const { return packets.size(); }
  bool has_emit_times() const {
    for (const auto& p : packets) {
      if (!p.emit) return false;
    }
    return !packets.empty();
  }
};

/// Appends a packet with the next index.
inline PacketObservation& push_packet(Trace& tr, Rat size, std::optional<Rat> emit, Rat observe) {
  tr.packets.push_back({tr.packets.size() + 1, std::move(size), std::move(emit), std::move(observe)});
  return tr.packets.back();
}

/// Throws TraceError unless every structural invariant holds.
inline void validate(const Trace& tr) {
  std::vector<Rat> seen;
  for (std::size_t i = 0; i < tr.packets.size(); ++i) {
    const auto& p = tr.packets[i];
    std::string where = "packet " + std::to_string(p.index) + ": ";
    if (p.index != i + 1) throw TraceError("indices must be contiguous from 1 (row " + std::to_string(i + 1) + ")");
    if (p.size.is_infinite() || p.size.sign() <= 0) throw TraceError(where + "size must be positive");
    if (tr.flow && (p.size < tr.flow->l_min || p.size > tr.flow->l_max)) {
      throw TraceError(where + "size outside [l_min, l_max]");
    }
    if (p.emit) {
      if (p.emit->is_infinite()) throw TraceError(where + "emit time must be finite");
      if (i > 0 && tr.packets[i - 1].emit && *p.emit < *tr.packets[i - 1].emit) {
        throw TraceError(where + "emit times must be non-decreasing");
      }
      if (!p.lost() && p.observe < *p.emit) throw TraceError(where + "observed before it was emitted");
    }
    if (!p.lost()) seen.push_back(p.observe);
  }
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 1; i < seen.size(); ++i) {
    if (seen[i] == seen[i - 1]) throw TraceError("duplicate observation time " + to_string(seen[i]));
  }
}

struct ConformanceVerdict {
  bool conforms = true;
  std::size_t first = 0;  // violating window [first, last], 1-based
  std::size_t last = 0;
  Rat required_gap;
  Rat actual_gap;
};

/// Checks that emission times respect the arrival curve: every window of
/// packets m..n needs A_n - A_m >= c^(sum of its sizes), or c^(n-m+1) for a
/// packet-counting curve.
inline ConformanceVerdict check_trace_conforms(const Trace& tr, const Curve& c) {
  ConformanceVerdict v;
  const auto& ps = tr.packets;
  for (const auto& p : ps) {
    if (!p.emit) throw TraceError("conformance check needs emit times");
  }
  for (std::size_t m = 0; m < ps.size(); ++m) {
    Rat amount = 0;
    for (std::size_t n = m; n < ps.size(); ++n) {
      amount += c.unit() == Unit::bytes ? ps[n].size : Rat(1);
      Rat need = lower_pseudo_inverse(c, amount);
      Rat gap = *ps[n].emit - *ps[m].emit;
      if (gap < need) return {false, m + 1, n + 1, need, gap};
    }
  }
  return v;
}

}  // namespace tsnreorder
