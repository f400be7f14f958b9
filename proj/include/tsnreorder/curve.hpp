#pragma once

// Arrival and service curves over exact rationals.
//
// A Curve is either the minimum of affine pieces, alpha(t) = min_i(r_i t + b_i)
// for t > 0, or a staircase b * ceil(t / tau). Both vanish at t = 0 and jump to
// their burst at 0+. Values are bytes or packets depending on Curve::unit().

#include "tsnreorder/rational.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsnreorder {

enum class Unit { bytes, packets };

inline const char* to_string(Unit u) { return u == Unit::bytes ? "bytes" : "packets"; }

class CurveError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AffinePiece {
  Rat rate;   // per second
  Rat burst;  // value at 0+

  friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

class Curve {
 public:
  enum class Kind { min_affine, staircase };

  static Curve min_affine(std::vector<AffinePiece> pieces, Unit unit = Unit::bytes) {
    if (pieces.empty()) throw CurveError("min_affine curve needs at least one piece");
    for (const auto& p : pieces) {
      if (p.rate.is_infinite() || p.burst.is_infinite()) throw CurveError("curve pieces must be finite");
      if (p.rate.sign() <= 0) throw CurveError("curve piece rate must be > 0 (curve must be unbounded)");
      if (p.burst.sign() < 0) throw CurveError("curve piece burst must be >= 0");
    }
    Curve c;
    c.kind_ = Kind::min_affine;
    c.unit_ = unit;
    c.pieces_ = std::move(pieces);
    return c;
  }

  static Curve leaky_bucket(Rat rate, Rat burst, Unit unit = Unit::bytes) {
    return min_affine({{std::move(rate), std::move(burst)}}, unit);
  }

  static Curve staircase(Rat burst, Rat period, Unit unit = Unit::packets) {
    if (burst.is_infinite() || period.is_infinite()) throw CurveError("staircase must be finite");
    if (burst.sign() <= 0) throw CurveError("staircase burst must be > 0");
    if (period.sign() <= 0) throw CurveError("staircase period must be > 0");
    Curve c;
    c.kind_ = Kind::staircase;
    c.unit_ = unit;
    c.stair_burst_ = std::move(burst);
    c.period_ = std::move(period);
    return c;
  }

  Kind kind() const { return kind_; }
  Unit unit() const { return unit_; }
  bool is_min_affine() const { return kind_ == Kind::min_affine; }
  bool is_staircase() const { return kind_ == Kind::staircase; }

  const std::vector<AffinePiece>& pieces() const {
    if (!is_min_affine()) throw CurveError("staircase curve has no affine pieces");
    return pieces_;
  }
  const Rat& stair_burst() const { return stair_burst_; }
  const Rat& period() const { return period_; }

  /// alpha(0+).
  Rat burst_at_zero() const {
    if (is_staircase()) return stair_burst_;
    Rat m = pieces_.front().burst;
    for (const auto& p : pieces_) m = min(m, p.burst);
    return m;
  }

  /// Smallest long-run growth rate (bytes/s or packets/s).
  Rat long_run_rate() const {
    if (is_staircase()) return stair_burst_ / period_;
    Rat m = pieces_.front().rate;
    for (const auto& p : pieces_) m = min(m, p.rate);
    return m;
  }

  friend bool operator==(const Curve&, const Curve&) = default;

 private:
  Curve() = default;

  Kind kind_ = Kind::min_affine;
  Unit unit_ = Unit::bytes;
  std::vector<AffinePiece> pieces_;
  Rat stair_burst_;
  Rat period_;
};

struct RateLatencyService {
  Rat rate;     // R, bytes/s
  Rat latency;  // T0, seconds

  RateLatencyService(Rat r, Rat t0) : rate(std::move(r)), latency(std::move(t0)) {
    if (rate.is_infinite() || rate.sign() <= 0) throw CurveError("service rate must be finite and > 0");
    if (latency.is_infinite() || latency.sign() < 0) throw CurveError("service latency must be finite and >= 0");
  }
};

struct FlowSpec {
  Curve source_curve;
  std::optional<Curve> packet_curve;
  Rat l_min;
  Rat l_max;

  /// True when every packet has the same size.
  bool constant_size() const { return l_min == l_max; }
};

/// Checks the FlowSpec invariants; throws CurveError on violation.
inline void validate(const FlowSpec& f) {
  if (f.source_curve.unit() != Unit::bytes) throw CurveError("flow source curve must count bytes");
  if (f.packet_curve && f.packet_curve->unit() != Unit::packets) {
    throw CurveError("flow packet curve must count packets");
  }
  if (f.l_min.is_infinite() || f.l_max.is_infinite() || f.l_min.sign() <= 0 || f.l_min > f.l_max) {
    throw CurveError("packet sizes must satisfy 0 < l_min <= l_max");
  }
  if (f.source_curve.burst_at_zero() < f.l_max) {
    throw CurveError("source curve burst must be at least l_max");
  }
  if (!(f.l_max >= Rat(2) * f.l_min || f.l_min == f.l_max)) {
    throw CurveError("packet sizes must satisfy l_max >= 2*l_min or l_min == l_max");
  }
}

inline FlowSpec make_flow(Curve source, Rat l_min, Rat l_max, std::optional<Curve> packet_curve = std::nullopt) {
  FlowSpec f{std::move(source), std::move(packet_curve), std::move(l_min), std::move(l_max)};
  validate(f);
  return f;
}

/// alpha(t); 0 at t = 0, left-continuous elsewhere.
inline Rat eval(const Curve& c, const Rat& t) {
  if (t.sign() < 0) throw CurveError("curve evaluated at negative time");
  if (t.is_zero()) return Rat(0);
  if (t.is_infinite()) return Rat::infinity();
  if (c.is_staircase()) return c.stair_burst() * from_int(ceil_int(t / c.period()));
  const auto& ps = c.pieces();
  Rat best = ps.front().rate * t + ps.front().burst;
  for (std::size_t i = 1; i < ps.size(); ++i) best = min(best, ps[i].rate * t + ps[i].burst);
  return best;
}

/// inf{ s >= 0 : c(s) >= x }.
inline Rat lower_pseudo_inverse(const Curve& c, const Rat& x) {
  if (x.sign() < 0) throw CurveError("pseudo-inverse of a negative value");
  if (x.is_zero()) return Rat(0);
  if (x.is_infinite()) return Rat::infinity();
  if (c.is_staircase()) {
    const Rat& b = c.stair_burst();
    return c.period() * from_int(ceil_int((x - b) / b));
  }
  // c(s) >= x iff every piece is >= x, so take the latest per-piece crossing.
  Rat s = 0;
  for (const auto& p : c.pieces()) s = max(s, positive_part((x - p.burst) / p.rate));
  return s;
}

/// alpha'(t) = alpha(t + V): output curve after a system with delay jitter V.
inline Curve shift_jitter(const Curve& c, const Rat& jitter) {
  if (jitter.sign() < 0 || jitter.is_infinite()) throw CurveError("jitter must be finite and >= 0");
  if (!c.is_min_affine()) throw CurveError("shift_jitter supports min_affine curves only");
  std::vector<AffinePiece> out;
  out.reserve(c.pieces().size());
  for (const auto& p : c.pieces()) out.push_back({p.rate, p.burst + p.rate * jitter});
  return Curve::min_affine(std::move(out), c.unit());
}

/// Pointwise minimum. Pieces dominated everywhere on t > 0 are dropped.
inline Curve min_curves(const Curve& a, const Curve& b) {
  if (a.unit() != b.unit()) throw CurveError("min_curves: unit mismatch");
  if (!a.is_min_affine() || !b.is_min_affine()) throw CurveError("min_curves supports min_affine curves only");
  std::vector<AffinePiece> all = a.pieces();
  all.insert(all.end(), b.pieces().begin(), b.pieces().end());
  std::vector<AffinePiece> kept;
  for (std::size_t i = 0; i < all.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < all.size() && !dominated; ++j) {
      if (i == j) continue;
      const auto& p = all[i];
      const auto& q = all[j];
      bool le = q.rate <= p.rate && q.burst <= p.burst;
      // identical pieces: keep the first occurrence only
      if (le && (q.rate < p.rate || q.burst < p.burst || j < i)) dominated = true;
    }
    if (!dominated) kept.push_back(all[i]);
  }
  return Curve::min_affine(std::move(kept), a.unit());
}

/// Data present in a (not necessarily FIFO) system whose delay is at most U.
inline Rat backlog_bound(const Curve& c, const Rat& worst_delay) { return eval(c, worst_delay); }

class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// sup_{t>0} (a(t) - R t), for a with long-run rate <= R.
inline Rat sup_excess(const Curve& a, const Rat& rate) {
  if (a.long_run_rate() > rate) {
    throw InstabilityError("arrival rate " + to_string(a.long_run_rate()) + " exceeds service rate " +
                           to_string(rate));
  }
  if (a.is_staircase()) return a.stair_burst();
  // a(t) - R t is concave; its supremum is at 0+ or where two pieces cross.
  const auto& ps = a.pieces();
  Rat best = a.burst_at_zero();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      if (ps[i].rate == ps[j].rate) continue;
      Rat t = (ps[j].burst - ps[i].burst) / (ps[i].rate - ps[j].rate);
      if (t.sign() <= 0) continue;
      best = max(best, eval(a, t) - rate * t);
    }
  }
  return best;
}

}  // namespace detail

/// Delay bound of a FIFO system offering beta(t) = R [t - T0]^+ to arrival curve a.
inline Rat horizontal_deviation(const Curve& a, const RateLatencyService& s) {
  return s.latency + detail::sup_excess(a, s.rate) / s.rate;
}

/// Output arrival curve of a FIFO system offering a rate-latency service
/// (min-plus deconvolution). Pieces with rate <= R are shifted by T0; faster
/// pieces collapse into one piece of rate R.
inline Curve deconvolve(const Curve& a, const RateLatencyService& s) {
  if (!a.is_min_affine()) throw CurveError("deconvolve supports min_affine curves only");
  Rat excess = detail::sup_excess(a, s.rate);
  std::vector<AffinePiece> out;
  bool faster = false;
  for (const auto& p : a.pieces()) {
    if (p.rate <= s.rate) {
      out.push_back({p.rate, p.burst + p.rate * s.latency});
    } else {
      faster = true;
    }
  }
  if (faster) out.push_back({s.rate, excess + s.rate * s.latency});
  return Curve::min_affine(std::move(out), a.unit());
}

/// Limits a byte curve by a transmission line of rate c carrying whole packets:
/// min(a(t), c t + l_max).
inline Curve shape_line(const Curve& a, const Rat& line_rate, const Rat& l_max) {
  return min_curves(a, Curve::leaky_bucket(line_rate, l_max, a.unit()));
}

}  // namespace tsnreorder
