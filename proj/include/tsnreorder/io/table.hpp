#pragma once

// Plain aligned text tables for terminal reports.

#include "tsnreorder/path_analysis.hpp"

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

namespace tsnreorder::io {

class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) {
    row.resize(header_.size());
    rows_.push_back(std::move(row));
  }

  void print(std::ostream& os) const {
    std::vector<std::size_t> w(header_.size(), 0);
    auto widen = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
    };
    widen(header_);
    for (const auto& r : rows_) widen(r);
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        // first column left-aligned, numbers right-aligned
        std::string pad(w[i] - r[i].size(), ' ');
        os << (i == 0 ? r[i] + pad : pad + r[i]);
        os << (i + 1 < r.size() ? "  " : "\n");
      }
    };
    line(header_);
    std::size_t total = 0;
    for (auto x : w) total += x + 2;
    os << std::string(total - 2, '-') << '\n';
    for (const auto& r : rows_) line(r);
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Seconds shown in microseconds, rounded half-up to 0.01.
inline std::string us(const Rat& seconds) { return to_fixed(micros(seconds), 2); }
/// Bytes: whole numbers as is, anything else to two decimals.
inline std::string bytes(const Rat& b) { return b.is_integer() ? to_string(b) : to_fixed(b, 2); }

inline void print_report(std::ostream& os, const AnalysisReport& r) {
  os << "loss mode: " << to_string(r.loss_mode) << "\n\n";
  TextTable el({"element", "kind", "d_min (us)", "d_max (us)", "jitter (us)", "rto (us)"});
  for (const auto& e : r.elements) {
    el.add({e.id, to_string(e.kind), us(e.d_min), us(e.d_max), us(e.jitter), e.rto ? us(*e.rto) : "-"});
  }
  el.print(os);
  if (!r.resequencers.empty()) {
    os << '\n';
    TextTable rs({"buffer", "timeout", "T (us)", "upstream RTO (us)", "RBO bound (B)", "required B (B)",
                   "configured B (B)"});
    for (const auto& x : r.resequencers) {
      rs.add({x.id, x.auto_timeout ? "auto" : "explicit", us(x.timeout), us(x.upstream_rto), bytes(x.rbo_bound),
              bytes(x.buffer), x.configured_buffer ? bytes(*x.configured_buffer) : "-"});
    }
    rs.print(os);
  }
  os << '\n';
  TextTable e2e({"end-to-end", "delay (us)", "jitter (us)"});
  e2e.add({"path", us(r.e2e_delay), us(r.e2e_jitter)});
  e2e.add({"baseline", us(r.baseline_delay), us(r.baseline_jitter)});
  e2e.add({"increase", us(r.delta_delay), us(r.delta_jitter)});
  e2e.print(os);
  for (const auto& w : r.warnings) os << "warning: " << w << '\n';
}

}  // namespace tsnreorder::io
