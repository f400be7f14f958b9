#pragma once

// End-to-end analysis of one flow along a path of elements: arrival-curve
// propagation, per-element delay and jitter, and timeout/size of every
// re-sequencing buffer placed on the path.

#include "tsnreorder/bounds.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace tsnreorder {

enum class ElementKind { fifo_service, fabric, order_preserving_fixed, resequencer };

inline const char* to_string(ElementKind k) {
  switch (k) {
    case ElementKind::fifo_service: return "fifo_service";
    case ElementKind::fabric: return "fabric";
    case ElementKind::order_preserving_fixed: return "order_preserving_fixed";
    case ElementKind::resequencer: return "resequencer";
  }
  return "?";
}

struct ElementSpec {
  std::string id;
  ElementKind kind = ElementKind::fabric;

  // fifo_service
  std::optional<RateLatencyService> service;
  std::optional<Rat> min_delay;  // default l_min / R
  std::optional<Rat> line_rate;  // output line: caps the output curve at c t + l_max

  // fabric, order_preserving_fixed
  Rat d_min = 0;
  Rat d_max = 0;
  std::optional<Rat> rto;  // exported RTO of a fabric, if known

  // resequencer: auto when timeout is absent
  std::optional<Rat> timeout;
  std::optional<Rat> buffer;

  bool order_preserving() const { return kind != ElementKind::fabric; }

  static ElementSpec fifo(std::string id, RateLatencyService s, std::optional<Rat> line_rate = std::nullopt) {
    ElementSpec e;
    e.id = std::move(id);
    e.kind = ElementKind::fifo_service;
    e.service = std::move(s);
    e.line_rate = std::move(line_rate);
    return e;
  }
  static ElementSpec fabric(std::string id, Rat d_min, Rat d_max) {
    ElementSpec e;
    e.id = std::move(id);
    e.kind = ElementKind::fabric;
    e.d_min = std::move(d_min);
    e.d_max = std::move(d_max);
    return e;
  }
  static ElementSpec fixed(std::string id, Rat d_min, Rat d_max) {
    ElementSpec e = fabric(std::move(id), std::move(d_min), std::move(d_max));
    e.kind = ElementKind::order_preserving_fixed;
    return e;
  }
  static ElementSpec resequencer(std::string id, std::optional<Rat> timeout = std::nullopt,
                                 std::optional<Rat> buffer = std::nullopt) {
    ElementSpec e;
    e.id = std::move(id);
    e.kind = ElementKind::resequencer;
    e.timeout = std::move(timeout);
    e.buffer = std::move(buffer);
    return e;
  }
};

struct PathSpec {
  FlowSpec flow;
  std::vector<ElementSpec> elements;
  LossMode loss_mode = LossMode::lossless;
};

class PathError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PointCurve {
  std::string label;  // "source", "<id>" (element output) or "<id>:service" (FIFO output before line shaping)
  Curve curve;
};

struct ElementReport {
  std::string id;
  ElementKind kind;
  Rat d_min;
  Rat d_max;
  Rat jitter;
  std::optional<Rat> rto;  // fabrics: single-element RTO bound
};

struct ResequencerReport {
  std::string id;
  bool auto_timeout = true;
  Rat upstream_rto;               // RTO bound of the segment it serves
  std::optional<std::size_t> head_element;  // index into elements of the segment's first reordering element
  bool head_clamped = false;
  Rat timeout;
  Rat rbo_bound;                  // lossless size, exact
  Rat upstream_jitter;            // jitter between source and this buffer
  Rat buffer_bound;               // size for the path's loss mode, exact
  Rat buffer;                     // buffer_bound rounded down to a valid sum of packet sizes
  std::optional<Rat> configured_buffer;
  bool unsafe = false;
};

struct AnalysisReport {
  LossMode loss_mode = LossMode::lossless;
  std::vector<PointCurve> points;
  std::vector<ElementReport> elements;
  std::vector<ResequencerReport> resequencers;
  Rat e2e_delay;
  Rat e2e_min_delay;
  Rat e2e_jitter;
  Rat baseline_delay;
  Rat baseline_jitter;
  Rat delta_delay;
  Rat delta_jitter;
  std::vector<std::string> warnings;

  bool unsafe() const {
    for (const auto& r : resequencers) {
      if (r.unsafe) return true;
    }
    return false;
  }
  const PointCurve* point(const std::string& label) const {
    for (const auto& p : points) {
      if (p.label == label) return &p;
    }
    return nullptr;
  }
  /// Curve entering the element with the given id.
  const Curve* curve_before(const std::string& id) const {
    const Curve* last = points.empty() ? nullptr : &points.front().curve;
    for (const auto& p : points) {
      if (p.label == id || p.label == id + ":service") return last;
      last = &p.curve;
    }
    return nullptr;
  }
  const ResequencerReport* resequencer(const std::string& id) const {
    for (const auto& r : resequencers) {
      if (r.id == id) return &r;
    }
    return nullptr;
  }
  const ElementReport* element(const std::string& id) const {
    for (const auto& e : elements) {
      if (e.id == id) return &e;
    }
    return nullptr;
  }
};

/// Throws PathError when the path is malformed.
inline void validate(const PathSpec& p) {
  validate(p.flow);
  if (!p.flow.source_curve.is_min_affine()) throw PathError("path analysis needs a min_affine source curve");
  if (p.elements.empty()) throw PathError("path has no elements");
  std::vector<std::string> ids;
  for (const auto& e : p.elements) {
    if (e.id.empty()) throw PathError("element without id");
    if (std::find(ids.begin(), ids.end(), e.id) != ids.end()) throw PathError("duplicate element id '" + e.id + "'");
    ids.push_back(e.id);
    switch (e.kind) {
      case ElementKind::fifo_service:
        if (!e.service) throw PathError(e.id + ": fifo_service needs a service curve");
        if (e.min_delay && (e.min_delay->is_infinite() || e.min_delay->sign() < 0)) {
          throw PathError(e.id + ": min delay must be finite and >= 0");
        }
        if (e.line_rate && (e.line_rate->is_infinite() || e.line_rate->sign() <= 0)) {
          throw PathError(e.id + ": line rate must be finite and > 0");
        }
        break;
      case ElementKind::fabric:
      case ElementKind::order_preserving_fixed:
        if (e.d_min.is_infinite() || e.d_max.is_infinite() || e.d_min.sign() < 0 || e.d_max < e.d_min) {
          throw PathError(e.id + ": delays must satisfy 0 <= d_min <= d_max < inf");
        }
        if (e.rto && (e.rto->is_infinite() || e.rto->sign() < 0)) throw PathError(e.id + ": rto must be finite and >= 0");
        if (e.rto && e.kind == ElementKind::order_preserving_fixed && !e.rto->is_zero()) {
          throw PathError(e.id + ": an order-preserving element has rto 0");
        }
        break;
      case ElementKind::resequencer:
        if (e.timeout && e.timeout->sign() < 0) throw PathError(e.id + ": timeout must be >= 0");
        if (e.buffer && e.buffer->sign() < 0) throw PathError(e.id + ": buffer must be >= 0");
        break;
    }
  }
}

namespace detail {

inline AnalysisReport walk_path(const PathSpec& p, bool with_resequencers) {
  const FlowSpec& flow = p.flow;
  const LossMode mode = p.loss_mode;
  AnalysisReport rep;
  rep.loss_mode = mode;
  rep.e2e_delay = 0;
  rep.e2e_min_delay = 0;
  rep.e2e_jitter = 0;

  Curve cur = flow.source_curve;
  rep.points.push_back({"source", cur});

  std::vector<SequenceElement> from_source;  // for buffer sizing
  std::vector<SequenceElement> segment;      // since the last re-sequencing buffer
  Rat jitter_so_far = 0;

  for (const auto& e : p.elements) {
    if (e.kind == ElementKind::resequencer && !with_resequencers) continue;
    ElementReport er{e.id, e.kind, 0, 0, 0, std::nullopt};
    switch (e.kind) {
      case ElementKind::fifo_service: {
        const RateLatencyService& s = *e.service;
        er.d_max = horizontal_deviation(cur, s);
        er.d_min = e.min_delay ? *e.min_delay : flow.l_min / s.rate;
        if (er.d_min > er.d_max) throw PathError(e.id + ": min delay exceeds the delay bound");
        er.jitter = er.d_max - er.d_min;
        Curve out = deconvolve(cur, s);
        if (e.line_rate) {
          rep.points.push_back({e.id + ":service", out});
          out = shape_line(out, *e.line_rate, flow.l_max);
        }
        SequenceElement se{er.jitter, Rat(0), true, cur};
        from_source.push_back(se);
        segment.push_back(se);
        cur = std::move(out);
        break;
      }
      case ElementKind::fabric:
      case ElementKind::order_preserving_fixed: {
        er.d_min = e.d_min;
        er.d_max = e.d_max;
        er.jitter = e.d_max - e.d_min;
        SequenceElement se{er.jitter, Rat(0), true, cur};
        if (e.kind == ElementKind::fabric) {
          Rat lam = rto_bound_element({er.jitter, cur, flow.l_min, flow.l_max});
          if (e.rto) lam = min(lam, *e.rto);
          er.rto = lam;
          se.rto = lam;
          se.order_preserving = false;
        }
        from_source.push_back(se);
        segment.push_back(se);
        cur = shift_jitter(cur, er.jitter);
        break;
      }
      case ElementKind::resequencer: {
        ResequencerReport rr;
        rr.id = e.id;
        rr.auto_timeout = !e.timeout;
        if (segment.empty()) {
          rr.upstream_rto = 0;
        } else {
          SequenceRto sr = rto_bound_sequence(segment, flow.l_min);
          rr.upstream_rto = sr.value;
          if (sr.head) rr.head_element = from_source.size() - segment.size() + *sr.head;
          rr.head_clamped = sr.clamped;
        }
        rr.timeout = e.timeout ? *e.timeout : required_timeout(rr.upstream_rto);
        if (rr.timeout < rr.upstream_rto) {
          rr.unsafe = true;
          rep.warnings.push_back(e.id + ": timeout " + to_string(rr.timeout) + " s is below the upstream RTO bound " +
                                 to_string(rr.upstream_rto) + " s; packets may be discarded");
        }
        rr.rbo_bound = from_source.empty()
                           ? Rat(0)
                           : rbo_bound_sequence(from_source, flow.source_curve, flow.l_min, flow.l_max);
        rr.upstream_jitter = jitter_so_far;
        rr.buffer_bound = required_buffer(mode, rr.rbo_bound, flow.source_curve, jitter_so_far, rr.timeout);
        rr.buffer = largest_valid_rbo(rr.buffer_bound, flow);
        rr.configured_buffer = e.buffer;
        if (e.buffer && *e.buffer < rr.buffer) {
          rr.unsafe = true;
          rep.warnings.push_back(e.id + ": buffer " + to_string(*e.buffer) + " B is below the required " +
                                 to_string(rr.buffer) + " B; packets may overflow");
        }

        auto [dd, dj] = resequencer_delay_effect(mode, rr.timeout);
        er.d_min = 0;
        er.d_max = dd;
        er.jitter = dj;
        if (mode == LossMode::lossy) {
          if (rr.timeout.is_infinite()) throw PathError(e.id + ": infinite timeout on a lossy path");
          cur = shift_jitter(cur, rr.timeout);
        }
        rep.resequencers.push_back(std::move(rr));
        // the buffer's output is in order: later timeouts only see what follows it
        from_source.push_back({er.jitter, Rat(0), true, std::nullopt});
        segment.clear();
        break;
      }
    }
    jitter_so_far += er.jitter;
    rep.e2e_delay += er.d_max;
    rep.e2e_min_delay += er.d_min;
    rep.e2e_jitter += er.jitter;
    rep.elements.push_back(std::move(er));
    rep.points.push_back({e.id, cur});
  }
  return rep;
}

}  // namespace detail

/// (delay bound, jitter bound) of the path with every re-sequencing buffer removed.
inline std::pair<Rat, Rat> baseline(const PathSpec& p) {
  validate(p);
  AnalysisReport r = detail::walk_path(p, false);
  return {r.e2e_delay, r.e2e_jitter};
}

inline AnalysisReport analyze_path(const PathSpec& p) {
  validate(p);
  AnalysisReport rep = detail::walk_path(p, true);
  auto [bd, bj] = baseline(p);
  rep.baseline_delay = bd;
  rep.baseline_jitter = bj;
  rep.delta_delay = rep.e2e_delay - bd;
  rep.delta_jitter = rep.e2e_jitter - bj;
  return rep;
}

/// A placement strategy: re-sequencing buffers inserted after the named elements.
struct Placement {
  struct Site {
    std::string after;  // element id
    std::string id;     // id of the inserted buffer
  };
  std::string name;
  std::vector<Site> sites;
};

inline PathSpec with_placement(const PathSpec& base, const Placement& pl) {
  PathSpec p = base;
  p.elements.clear();
  std::size_t used = 0;
  for (const auto& e : base.elements) {
    if (e.kind == ElementKind::resequencer) continue;
    p.elements.push_back(e);
    for (const auto& site : pl.sites) {
      if (site.after != e.id) continue;
      p.elements.push_back(ElementSpec::resequencer(site.id));
      ++used;
    }
  }
  if (used != pl.sites.size()) throw PathError("placement '" + pl.name + "' names an unknown element");
  return p;
}

struct PlacementResult {
  Placement placement;
  AnalysisReport lossless;
  AnalysisReport lossy;
};

/// Runs every placement under both loss modes.
inline std::vector<PlacementResult> compare_placements(const PathSpec& base, const std::vector<Placement>& placements) {
  std::vector<PlacementResult> out;
  for (const auto& pl : placements) {
    PathSpec p = with_placement(base, pl);
    p.loss_mode = LossMode::lossless;
    AnalysisReport a = analyze_path(p);
    p.loss_mode = LossMode::lossy;
    AnalysisReport b = analyze_path(p);
    out.push_back({pl, std::move(a), std::move(b)});
  }
  return out;
}

}  // namespace tsnreorder
