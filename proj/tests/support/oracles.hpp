#pragma once

// Independent re-implementations used as test oracles. They follow the
// definitions literally (quadratic scans, bisection, brute-force search) and
// share no code with the library beyond the Rat type and curve evaluation.

#include "tsnreorder/tsnreorder.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using tsnreorder::Curve;
using tsnreorder::Rat;
using tsnreorder::Trace;

// lambda_n = E_n - min{E_j : j >= n, E_j <= E_n}
inline std::map<std::size_t, Rat> rto_scan(const Trace& tr) {
  std::map<std::size_t, Rat> out;
  for (std::size_t n = 0; n < tr.packets.size(); ++n) {
    const auto& p = tr.packets[n];
    if (p.lost()) continue;
    Rat lowest = p.observe;
    for (std::size_t j = n + 1; j < tr.packets.size(); ++j) {
      const auto& q = tr.packets[j];
      if (!q.lost() && q.observe < lowest) lowest = q.observe;
    }
    out[p.index] = p.observe - lowest;
  }
  return out;
}

// pi_n = sum of l_j over j > n with E_j < E_n
inline std::map<std::size_t, Rat> rbo_scan(const Trace& tr) {
  std::map<std::size_t, Rat> out;
  for (std::size_t n = 0; n < tr.packets.size(); ++n) {
    const auto& p = tr.packets[n];
    if (p.lost()) continue;
    Rat sum = 0;
    for (std::size_t j = n + 1; j < tr.packets.size(); ++j) {
      const auto& q = tr.packets[j];
      if (!q.lost() && q.observe < p.observe) sum += q.size;
    }
    out[p.index] = sum;
  }
  return out;
}

inline Rat max_of(const std::map<std::size_t, Rat>& m) {
  Rat best = 0;
  for (const auto& [k, v] : m) best = tsnreorder::max(best, v);
  return best;
}

// Bracket inf{s >= 0 : c(s) >= x} by bisection on the exact evaluator.
struct Bracket {
  Rat lo, hi;
};

inline Bracket bisect_pseudo_inverse(const Curve& c, const Rat& x, int iterations = 80) {
  auto ok = [&](const Rat& s) { return tsnreorder::eval(c, s) >= x; };
  if (x.is_zero()) return {Rat(0), Rat(0)};
  Rat hi = 1;
  while (!ok(hi)) hi *= 2;
  Rat lo = 0;
  if (ok(lo)) return {lo, lo};
  for (int i = 0; i < iterations; ++i) {
    Rat mid = (lo + hi) / 2;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {lo, hi};
}

// x is a sum of k sizes in [l_min, l_max] iff k l_min <= x <= k l_max for some k.
inline bool valid_sum_brute(const Rat& x, const Rat& l_min, const Rat& l_max) {
  if (x.is_zero()) return true;
  for (long k = 1; Rat(k) * l_min <= x; ++k) {
    if (x <= Rat(k) * l_max) return true;
  }
  return false;
}

// Integer sizes only: exhaustive subset-sum style search of reachable totals.
inline std::set<long> reachable_sums(long l_min, long l_max, long limit) {
  std::vector<bool> r(limit + 1, false);
  r[0] = true;
  for (long s = 1; s <= limit; ++s) {
    for (long l = l_min; l <= l_max && l <= s; ++l) {
      if (r[s - l]) {
        r[s] = true;
        break;
      }
    }
  }
  std::set<long> out;
  for (long s = 0; s <= limit; ++s) {
    if (r[s]) out.insert(s);
  }
  return out;
}

// Direct event-by-event departures for an infinite buffer, written from the
// release conditions rather than from the recursion: packet n leaves at the
// first time t >= E_n when every lower index has either left or can no
// longer arrive validly (its own timeout horizon has passed).
inline std::vector<Rat> departures_by_definition(const std::vector<Rat>& e, const Rat& timeout) {
  std::size_t n = e.size();
  std::vector<Rat> suffix(n + 1, Rat::infinity());
  for (std::size_t i = n; i-- > 0;) suffix[i] = tsnreorder::min(suffix[i + 1], e[i]);
  std::vector<Rat> d(n, Rat::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    bool valid = !(e[i] > timeout + suffix[i]);
    if (!valid) continue;
    Rat t = e[i];
    // every earlier packet must be gone: released, or declared missing once
    // the oldest buffered successor (min E over j >= k+1 ... ) times out
    for (std::size_t k = 0; k < i; ++k) {
      Rat gone = d[k].is_finite() ? d[k] : timeout + suffix[k + 1];
      if (gone.is_finite()) gone = tsnreorder::min(gone, timeout + suffix[k + 1]);
      t = tsnreorder::max(t, gone);
    }
    d[i] = t;
  }
  return d;
}

struct RandomTraceOptions {
  std::size_t max_packets = 50;
  double loss_probability = 0.2;
  long time_grid = 1000;  // observation times drawn from {0..grid} / 7
};

// Random observation times (pairwise distinct), random sizes 64..1500, random losses.
inline Trace random_trace(std::mt19937_64& rng, const RandomTraceOptions& opt = {}) {
  std::uniform_int_distribution<std::size_t> count(1, opt.max_packets);
  std::size_t n = count(rng);
  std::vector<long> slots(static_cast<std::size_t>(opt.time_grid) + 1);
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = static_cast<long>(i);
  std::shuffle(slots.begin(), slots.end(), rng);
  std::bernoulli_distribution lost(opt.loss_probability);
  std::uniform_int_distribution<long> size(64, 1500);
  Trace tr;
  for (std::size_t i = 0; i < n; ++i) {
    Rat e = lost(rng) ? Rat::infinity() : Rat(slots[i]) / Rat(7);
    tsnreorder::push_packet(tr, Rat(size(rng)), std::nullopt, e);
  }
  return tr;
}

inline Rat random_rat(std::mt19937_64& rng, long lo, long hi, long den) {
  std::uniform_int_distribution<long> d(lo * den, hi * den);
  return Rat(d(rng)) / Rat(den);
}

}  // namespace oracle
