#pragma once

// Reordering metrics of a trace: RTO (how late a packet is, in time) and RBO
// (how many bytes of later packets overtook it), plus delay and jitter.

#include "tsnreorder/trace.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace tsnreorder {

struct RtoResult {
  Rat value;                          // lambda, max over delivered packets
  std::map<std::size_t, Rat> per_packet;
};

struct RboResult {
  Rat value;                          // pi, bytes
  std::map<std::size_t, Rat> per_packet;
};

struct DelayJitter {
  Rat d_max;
  Rat d_min;
  Rat jitter;
};

namespace detail {

inline void require_distinct_observations(const Trace& tr) {
  std::vector<Rat> seen;
  for (const auto& p : tr.packets) {
    if (!p.lost()) seen.push_back(p.observe);
  }
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 1; i < seen.size(); ++i) {
    if (seen[i] == seen[i - 1]) throw TraceError("duplicate observation time " + to_string(seen[i]));
  }
}

}  // namespace detail

/// lambda_n = E_n - min_{j >= n} E_j. The suffix minimum always includes E_n
/// itself, so the "E_j <= E_n" filter of the definition is implicit.
inline RtoResult rto(const Trace& tr) {
  detail::require_distinct_observations(tr);
  RtoResult out;
  out.value = 0;
  Rat suffix_min = Rat::infinity();
  for (auto it = tr.packets.rbegin(); it != tr.packets.rend(); ++it) {
    suffix_min = min(suffix_min, it->observe);
    if (it->lost()) continue;
    Rat lam = it->observe - suffix_min;
    out.value = max(out.value, lam);
    out.per_packet.emplace(it->index, std::move(lam));
  }
  return out;
}

/// pi_n = sum of l_j over later packets j observed before n. Walks the trace
/// backwards with a Fenwick tree keyed by observation rank.
inline RboResult rbo(const Trace& tr) {
  detail::require_distinct_observations(tr);
  std::vector<Rat> times;
  for (const auto& p : tr.packets) {
    if (!p.lost()) times.push_back(p.observe);
  }
  std::sort(times.begin(), times.end());
  auto rank_of = [&](const Rat& t) {
    return static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), t) - times.begin()) + 1;
  };
  std::vector<Rat> tree(times.size() + 1, Rat(0));
  auto add = [&](std::size_t i, const Rat& v) {
    for (; i < tree.size(); i += i & (~i + 1)) tree[i] += v;
  };
  auto prefix = [&](std::size_t i) {
    Rat s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree[i];
    return s;
  };

  RboResult out;
  out.value = 0;
  for (auto it = tr.packets.rbegin(); it != tr.packets.rend(); ++it) {
    if (it->lost()) continue;
    std::size_t r = rank_of(it->observe);
    Rat pi = prefix(r - 1);
    out.value = max(out.value, pi);
    out.per_packet.emplace(it->index, std::move(pi));
    add(r, it->size);
  }
  return out;
}

/// Delay range over delivered packets; lost packets are excluded.
inline DelayJitter delay_jitter(const Trace& tr) {
  std::optional<Rat> hi;
  std::optional<Rat> lo;
  for (const auto& p : tr.packets) {
    if (!p.emit) throw TraceError("delay_jitter needs emit times");
    if (p.lost()) continue;
    Rat d = p.observe - *p.emit;
    if (!hi || *hi < d) hi = d;
    if (!lo || d < *lo) lo = d;
  }
  if (!hi) throw TraceError("delay_jitter needs at least one delivered packet");
  return {*hi, *lo, *hi - *lo};
}

/// True iff x is a finite (possibly empty) sum of packet sizes in [l_min, l_max].
inline bool validate_rbo_value(const Rat& x, const FlowSpec& flow) {
  if (x.is_infinite() || x.sign() < 0) return false;
  if (x.is_zero()) return true;
  if (flow.constant_size()) return (x / flow.l_min).is_integer();
  // with l_max >= 2 l_min the achievable sums cover [l_min, inf)
  return x >= flow.l_min;
}

/// Largest valid RBO value not above x. Any buffer content is such a sum, so
/// this is a sound tightening of a byte bound.
inline Rat largest_valid_rbo(const Rat& x, const FlowSpec& flow) {
  if (x.is_infinite()) return x;
  if (x < flow.l_min) return Rat(0);
  if (flow.constant_size()) return flow.l_min * from_int(floor_int(x / flow.l_min));
  return x;
}

/// Splits x into packet sizes in [l_min, l_max] (as many l_max as possible).
inline std::vector<Rat> decompose(const Rat& x, const FlowSpec& flow) {
  if (!validate_rbo_value(x, flow)) throw TraceError(to_string(x) + " bytes is not a sum of valid packet sizes");
  std::vector<Rat> parts;
  if (flow.constant_size()) {
    BigInt k = floor_int(x / flow.l_min);
    for (BigInt i = 0; i < k; ++i) parts.push_back(flow.l_min);
    return parts;
  }
  Rat rest = x;
  while (rest > flow.l_max) {
    if (rest - flow.l_max >= flow.l_min) {
      parts.push_back(flow.l_max);
      rest -= flow.l_max;
    } else {
      // rest - l_min lies in (l_max - l_min, l_max], inside the size range
      parts.push_back(rest - flow.l_min);
      rest = flow.l_min;
    }
  }
  if (rest.sign() > 0) parts.push_back(rest);
  return parts;
}

}  // namespace tsnreorder
