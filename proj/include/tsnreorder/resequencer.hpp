#pragma once

// Re-sequencing buffer: an event-driven simulator of the arrival and timeout
// routines, the closed-form departure recursion, and the dimensioning rules.

#include "tsnreorder/metrics.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tsnreorder {

enum class LossMode { lossless, lossy };

inline const char* to_string(LossMode m) { return m == LossMode::lossless ? "lossless" : "lossy"; }

struct ResequencerConfig {
  Rat timeout = Rat::infinity();
  Rat capacity = Rat::infinity();  // bytes
};

enum class DiscardReason { invalid_late, overflow };

inline const char* to_string(DiscardReason r) { return r == DiscardReason::invalid_late ? "invalid_late" : "overflow"; }

struct Arrival {
  Rat observe;  // E_n, +inf when lost upstream
  Rat size;
};

struct ResequencerOutcome {
  std::map<std::size_t, Rat> departures;  // every index; +inf if never released
  std::map<std::size_t, DiscardReason> discards;
  Rat max_occupancy = 0;
  Rat max_residence = 0;
  std::vector<std::size_t> release_order;

  bool any_discard() const { return !discards.empty(); }
};

inline std::vector<Arrival> arrivals_of(const Trace& tr) {
  std::vector<Arrival> out;
  out.reserve(tr.packets.size());
  for (const auto& p : tr.packets) out.push_back({p.observe, p.size});
  return out;
}

namespace detail {

class ResequencerSim {
 public:
  ResequencerSim(const std::vector<Arrival>& arrivals, const ResequencerConfig& cfg) : in_(arrivals), cfg_(cfg) {
    for (std::size_t i = 1; i <= in_.size(); ++i) out_.departures.emplace(i, Rat::infinity());
  }

  ResequencerOutcome run() {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < in_.size(); ++i) {
      if (in_[i].observe.is_finite()) order.push_back(i + 1);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return at(a).observe < at(b).observe; });
    for (std::size_t id : order) {
      const Rat& now = at(id).observe;
      // A timer due exactly at an arrival instant fires after that arrival.
      while (!timers_.empty() && timers_.begin()->first < now) fire_next_timer();
      on_arrival(id, now);
    }
    while (!timers_.empty()) fire_next_timer();
    return std::move(out_);
  }

 private:
  const Arrival& at(std::size_t id) const { return in_[id - 1]; }

  void on_arrival(std::size_t id, const Rat& now) {
    if (id < next_) {
      out_.discards.emplace(id, DiscardReason::invalid_late);
      return;
    }
    if (id > next_) {
      if (occupancy_ + at(id).size <= cfg_.capacity) {
        start_timer(id, now + cfg_.timeout);
        buf_.insert(id);
        occupancy_ += at(id).size;
        out_.max_occupancy = max(out_.max_occupancy, occupancy_);
      } else {
        out_.discards.emplace(id, DiscardReason::overflow);
      }
      return;
    }
    next_ = id + 1;
    release(id, now);
    check_buffer(now);
  }

  void fire_next_timer() {
    auto it = timers_.begin();
    Rat now = it->first;
    std::size_t pid = it->second;
    while (next_ <= pid) {
      while (!buf_.count(next_)) ++next_;
      std::size_t p = next_;
      dequeue(p);
      next_ = p + 1;
      stop_timer(p);
      release(p, now);
    }
    check_buffer(now);
  }

  void check_buffer(const Rat& now) {
    while (buf_.count(next_)) {
      std::size_t p = next_;
      dequeue(p);
      next_ = p + 1;
      stop_timer(p);
      release(p, now);
    }
  }

  void start_timer(std::size_t id, const Rat& deadline) {
    if (deadline.is_infinite()) return;
    timers_.emplace(deadline, id);
    deadline_of_.emplace(id, deadline);
  }

  void stop_timer(std::size_t id) {
    auto it = deadline_of_.find(id);
    if (it == deadline_of_.end()) return;
    timers_.erase(it->second);
    deadline_of_.erase(it);
  }

  void dequeue(std::size_t id) {
    buf_.erase(id);
    occupancy_ -= at(id).size;
  }

  void release(std::size_t id, const Rat& now) {
    out_.departures[id] = now;
    out_.release_order.push_back(id);
    out_.max_residence = max(out_.max_residence, now - at(id).observe);
  }

  const std::vector<Arrival>& in_;
  ResequencerConfig cfg_;
  ResequencerOutcome out_;
  std::set<std::size_t> buf_;
  Rat occupancy_ = 0;
  std::size_t next_ = 1;
  std::map<Rat, std::size_t> timers_;  // deadlines are distinct because arrival times are
  std::map<std::size_t, Rat> deadline_of_;
};

}  // namespace detail

/// Checks arrival-list preconditions; throws TraceError.
inline void validate(const std::vector<Arrival>& arrivals, const ResequencerConfig& cfg) {
  if (cfg.timeout.sign() < 0) throw TraceError("timeout must be >= 0");
  if (cfg.capacity.sign() < 0) throw TraceError("buffer size must be >= 0");
  std::vector<Rat> seen;
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    if (arrivals[i].size.is_infinite() || arrivals[i].size.sign() <= 0) {
      throw TraceError("packet " + std::to_string(i + 1) + ": size must be positive");
    }
    if (arrivals[i].observe.is_finite()) seen.push_back(arrivals[i].observe);
  }
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 1; i < seen.size(); ++i) {
    if (seen[i] == seen[i - 1]) throw TraceError("duplicate observation time " + to_string(seen[i]));
  }
}

/// Runs the re-sequencing buffer over arrivals indexed 1..n.
inline ResequencerOutcome simulate(const std::vector<Arrival>& arrivals, const ResequencerConfig& cfg) {
  validate(arrivals, cfg);
  return detail::ResequencerSim(arrivals, cfg).run();
}

inline ResequencerOutcome simulate(const Trace& tr, const ResequencerConfig& cfg) {
  return simulate(arrivals_of(tr), cfg);
}

/// Departure times from the input-output recursion (infinite buffer):
/// I_n = +inf if E_n > T + min_{j>=n} E_j else E_n,
/// G_n = min(D_{n-1}, T + min_{j>=n} E_j), D_1 = I_1, D_n = max(G_n, I_n).
inline std::vector<Rat> analytic_departures(const std::vector<Rat>& observe, const Rat& timeout) {
  std::size_t n = observe.size();
  std::vector<Rat> suffix_min(n + 1, Rat::infinity());
  for (std::size_t i = n; i-- > 0;) suffix_min[i] = min(suffix_min[i + 1], observe[i]);
  std::vector<Rat> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rat horizon = timeout + suffix_min[i];
    Rat in = observe[i] > horizon ? Rat::infinity() : observe[i];
    d[i] = i == 0 ? in : max(min(d[i - 1], horizon), in);
  }
  return d;
}

/// Smallest timeout that never discards for a flow whose RTO is lambda.
inline Rat required_timeout(const Rat& lambda) {
  if (lambda.sign() < 0) throw std::invalid_argument("RTO must be >= 0");
  return lambda;
}

/// Smallest buffer that never overflows: the RBO bound when nothing is lost,
/// alpha(V + T) when upstream losses are possible. The window is closed (a
/// packet stored at t is still counted when its timer fires at t + T), so the
/// curve is read as a right limit; this only matters at 0, where alpha(0+) = b.
inline Rat required_buffer(LossMode mode, const Rat& rbo_bound, const Curve& alpha, const Rat& jitter,
                           const Rat& timeout) {
  if (mode == LossMode::lossless) return rbo_bound;
  Rat w = jitter + timeout;
  if (alpha.is_staircase()) return alpha.stair_burst() * (from_int(floor_int(w / alpha.period())) + Rat(1));
  return w.is_zero() ? alpha.burst_at_zero() : eval(alpha, w);
}

}  // namespace tsnreorder
