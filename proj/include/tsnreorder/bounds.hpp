#pragma once

// Worst-case reordering bounds for one element and for a chain of elements,
// and the effect of a re-sequencing buffer on delay, jitter and arrival curve.

#include "tsnreorder/resequencer.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace tsnreorder {

struct ElementBoundInput {
  Rat jitter;                     // V
  std::optional<Curve> entrance;  // bytes or packets; absent = unknown
  Rat l_min;
  Rat l_max;
};

/// RTO bound of a system with jitter V: [V - alpha^(2 l_min)]^+, or
/// [V - alpha_pkt^(2)]^+ for a packet curve. Without a curve, V itself.
inline Rat rto_bound_element(const ElementBoundInput& in) {
  if (in.jitter.sign() < 0) throw std::invalid_argument("jitter must be >= 0");
  if (!in.entrance) return in.jitter;
  Rat two = in.entrance->unit() == Unit::bytes ? Rat(2) * in.l_min : Rat(2);
  return positive_part(in.jitter - lower_pseudo_inverse(*in.entrance, two));
}

/// RBO bound: alpha(V) - l_min when alpha(V) >= 2 l_min (bytes), or
/// l_max (alpha_pkt(V) - 1) when alpha_pkt(V) >= 2 (packets); 0 otherwise
/// and whenever the element cannot reorder at all.
inline Rat rbo_bound_element(const ElementBoundInput& in) {
  if (!in.entrance) throw std::invalid_argument("RBO bound needs an entrance curve");
  if (rto_bound_element(in).is_zero()) return Rat(0);
  Rat a = eval(*in.entrance, in.jitter);
  if (in.entrance->unit() == Unit::bytes) return a >= Rat(2) * in.l_min ? a - in.l_min : Rat(0);
  return a >= Rat(2) ? in.l_max * (a - Rat(1)) : Rat(0);
}

/// (delay increase, jitter increase) caused by a re-sequencing buffer with timeout T.
inline std::pair<Rat, Rat> resequencer_delay_effect(LossMode mode, const Rat& timeout) {
  if (mode == LossMode::lossless) return {Rat(0), Rat(0)};
  return {timeout, timeout};
}

/// Arrival curve at the output of a re-sequencing buffer placed after a
/// segment with jitter V, given the curve alpha at the segment entrance.
inline Curve curve_after_resequencer(const Curve& alpha, const Rat& jitter, const Rat& timeout, LossMode mode) {
  return shift_jitter(alpha, mode == LossMode::lossless ? jitter : jitter + timeout);
}

struct SequenceElement {
  std::optional<Rat> jitter;      // V_h
  std::optional<Rat> rto;         // lambda_h when known
  bool order_preserving = false;
  std::optional<Curve> entrance;  // alpha_h
};

struct SequenceRto {
  Rat value;
  std::optional<std::size_t> head;  // 0-based index of the first reordering element
  bool clamped = false;             // the head term hit [.]^+
};

namespace detail {

inline bool may_reorder(const SequenceElement& e) {
  if (e.rto) return e.rto->sign() > 0;
  return !e.order_preserving;
}

}  // namespace detail

/// RTO bound at the end of a chain: the head element's own RTO bound plus the
/// jitter of every element after it. Order-preserving prefixes are ignored.
inline SequenceRto rto_bound_sequence(const std::vector<SequenceElement>& seq, const Rat& l_min) {
  if (seq.empty()) throw std::invalid_argument("empty element sequence");
  SequenceRto out;
  out.value = 0;
  std::size_t s = 0;
  while (s < seq.size() && !detail::may_reorder(seq[s])) ++s;
  if (s == seq.size()) return out;
  out.head = s;

  const auto& head = seq[s];
  if (!head.jitter && !head.rto) throw std::invalid_argument("head element needs a jitter or an RTO");
  std::optional<Rat> term = head.rto;
  if (head.jitter) {
    term = term ? min(*term, *head.jitter) : *head.jitter;
    if (head.entrance) {
      Rat two = head.entrance->unit() == Unit::bytes ? Rat(2) * l_min : Rat(2);
      Rat raw = *head.jitter - lower_pseudo_inverse(*head.entrance, two);
      if (raw.sign() <= 0) out.clamped = true;
      term = min(*term, positive_part(raw));
    }
  }
  out.value = *term;
  for (std::size_t h = s + 1; h < seq.size(); ++h) {
    if (!seq[h].jitter) throw std::invalid_argument("missing jitter on element " + std::to_string(h + 1));
    out.value += *seq[h].jitter;
  }
  return out;
}

/// RBO bound at the end of a chain: the single-element bound with the summed
/// jitter of everything up to the last reordering element, on the entrance curve.
inline Rat rbo_bound_sequence(const std::vector<SequenceElement>& seq, const Curve& entry, const Rat& l_min,
                              const Rat& l_max) {
  std::optional<std::size_t> e;
  for (std::size_t h = 0; h < seq.size(); ++h) {
    if (detail::may_reorder(seq[h])) e = h;
  }
  if (!e) return Rat(0);
  Rat v = 0;
  for (std::size_t h = 0; h <= *e; ++h) {
    if (!seq[h].jitter) throw std::invalid_argument("missing jitter on element " + std::to_string(h + 1));
    v += *seq[h].jitter;
  }
  return rbo_bound_element({v, entry, l_min, l_max});
}

}  // namespace tsnreorder
