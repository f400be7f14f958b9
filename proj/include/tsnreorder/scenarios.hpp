#pragma once

// Adversarial traces that drive each bound to (or within epsilon of) its
// value. Each generator follows a tightness construction; feeding its output
// back through the metrics and the simulator is how the bounds are tested.

#include "tsnreorder/bounds.hpp"

#include <optional>
#include <vector>

namespace tsnreorder {

class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Earliest emission times for packets of the given sizes under arrival curve
/// alpha: t_k is the smallest time with t_k - t_m >= alpha^(l_m + ... + l_k)
/// for every m <= k. Starts at 0.
inline std::vector<Rat> greedy_emission_times(const Curve& alpha, const std::vector<Rat>& sizes) {
  std::vector<Rat> prefix(sizes.size() + 1, Rat(0));
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!lower_pseudo_inverse(alpha, sizes[i]).is_zero()) throw ScenarioError("packet larger than the curve's burst");
    prefix[i + 1] = prefix[i] + sizes[i];
  }
  std::vector<Rat> t(sizes.size(), Rat(0));
  for (std::size_t k = 1; k < sizes.size(); ++k) {
    Rat best = t[k - 1];
    for (std::size_t m = 0; m < k; ++m) best = max(best, t[m] + lower_pseudo_inverse(alpha, prefix[k + 1] - prefix[m]));
    t[k] = best;
  }
  return t;
}

/// Two packets, the first one overtaken by lambda: E_2 = t0, E_1 = t0 + lambda.
inline Trace gen_thm2_violation(const Rat& lambda, const Rat& t0 = 0, const Rat& size = 64) {
  if (lambda.is_infinite() || lambda.sign() <= 0) throw ScenarioError("lambda must be finite and > 0");
  Trace tr;
  push_packet(tr, size, std::nullopt, t0 + lambda);
  push_packet(tr, size, std::nullopt, t0);
  return tr;
}

/// k + 1 packets: packet 1 observed at lambda, packets 2..k+1 (sizes l_1..l_k)
/// observed before it, evenly spread over [0, lambda). RTO is lambda and the
/// buffer holds all k packets when packet 1 arrives.
inline Trace gen_thm3_lossless_backlog(const Rat& lambda, const std::vector<Rat>& sizes, const Rat& first_size,
                                       const std::optional<FlowSpec>& flow = std::nullopt) {
  if (lambda.is_infinite() || lambda.sign() <= 0) throw ScenarioError("lambda must be finite and > 0");
  if (sizes.empty()) throw ScenarioError("need at least one overtaking packet");
  auto check = [&](const Rat& l) {
    if (l.is_infinite() || l.sign() <= 0) throw ScenarioError("packet sizes must be positive");
    if (flow && (l < flow->l_min || l > flow->l_max)) throw ScenarioError("packet size outside [l_min, l_max]");
  };
  check(first_size);
  for (const auto& l : sizes) check(l);
  Trace tr;
  tr.flow = flow;
  Rat k = Rat(static_cast<unsigned long>(sizes.size()));
  push_packet(tr, first_size, std::nullopt, lambda);
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    push_packet(tr, sizes[j], std::nullopt, lambda * Rat(static_cast<unsigned long>(j)) / k);
  }
  return tr;
}

struct Thm3LossyOptions {
  bool round_down = false;  // use the largest valid sum below alpha(V + T - eps) if it is not one itself
};

/// Packet 1 (l_max) is lost; the following packets, emitted as fast as alpha
/// allows, all reach the buffer before packet 2 times out. Buffer content
/// peaks at alpha(V + T - eps).
inline Trace gen_thm3_lossy_backlog(const Curve& alpha, const Rat& jitter, const Rat& timeout, const Rat& eps,
                                    const FlowSpec& flow, Thm3LossyOptions opt = {}) {
  if (alpha.unit() != Unit::bytes) throw ScenarioError("needs a byte arrival curve");
  if (eps.is_infinite() || eps.sign() <= 0 || eps >= jitter || eps >= timeout) {
    throw ScenarioError("need 0 < eps < min(V, T)");
  }
  Rat target = eval(alpha, jitter + timeout - eps);
  if (!validate_rbo_value(target, flow)) {
    if (!opt.round_down) throw ScenarioError(to_string(target) + " bytes is not a sum of packet sizes");
    target = largest_valid_rbo(target, flow);
  }
  std::vector<Rat> parts = decompose(target, flow);
  if (parts.empty()) throw ScenarioError("empty backlog");
  std::vector<Rat> t = greedy_emission_times(alpha, parts);

  Rat total = flow.l_max + target;
  Rat t0 = lower_pseudo_inverse(alpha, total) + jitter + timeout;
  std::size_t n = parts.size();

  Trace tr;
  tr.flow = flow;
  push_packet(tr, flow.l_max, Rat(0), Rat::infinity());
  // delays stay within V - eps/6 (so packets emitted together keep the jitter
  // below V) and the last arrival precedes packet 2's timeout by eps/6
  Rat step = n >= 2 ? eps / Rat(static_cast<unsigned long>(3 * (n - 1))) : Rat(0);
  Rat prev = 0;
  for (std::size_t k = 0; k < n; ++k) {
    Rat a = t0 + t[k];
    Rat e = k == 0 ? jitter + a - eps / Rat(2) : max(prev, a) + step;
    push_packet(tr, parts[k], a, e);
    prev = e;
  }
  return tr;
}

/// Two l_min packets as close as alpha allows; the first is delayed by d + V,
/// the second by d. RTO is V - alpha^(2 l_min) exactly.
inline Trace gen_thm5_rto_tight(const Rat& jitter, const Curve& alpha, const Rat& l_min, const Rat& d = 0) {
  Rat two = alpha.unit() == Unit::bytes ? Rat(2) * l_min : Rat(2);
  Rat gap = lower_pseudo_inverse(alpha, two);
  if (!(jitter > gap)) throw ScenarioError("need V > alpha^(2 l_min)");
  if (d.sign() < 0) throw ScenarioError("d must be >= 0");
  Trace tr;
  push_packet(tr, l_min, Rat(0), d + jitter);
  push_packet(tr, l_min, gap, gap + d);
  return tr;
}

struct Thm6Options {
  bool round_down = false;  // constant-size flows: shrink the overtaking burst to a whole number of packets
};

/// Packet 1 (l_min) is overtaken by a burst worth alpha(V - eps) - l_min
/// bytes; RBO reaches that value, RTO is eps, jitter stays within V.
inline Trace gen_thm6_rbo_tight(const Rat& jitter, const Rat& eps, const Curve& alpha, const FlowSpec& flow,
                                Thm6Options opt = {}) {
  if (alpha.unit() != Unit::bytes) throw ScenarioError("needs a byte arrival curve");
  if (eps.is_infinite() || eps.sign() <= 0 || !(eps < jitter)) throw ScenarioError("need 0 < eps < V");
  Rat window = eval(alpha, jitter - eps);
  if (window < Rat(2) * flow.l_min) throw ScenarioError("need alpha(V - eps) >= 2 l_min");
  Rat burst = window - flow.l_min;
  if (!validate_rbo_value(burst, flow)) {
    if (!opt.round_down) throw ScenarioError(to_string(burst) + " bytes is not a sum of packet sizes");
    burst = largest_valid_rbo(burst, flow);
  }
  std::vector<Rat> sizes{flow.l_min};
  for (auto& l : decompose(burst, flow)) sizes.push_back(std::move(l));
  std::vector<Rat> a = greedy_emission_times(alpha, sizes);
  if (a.back() > jitter - eps) throw ScenarioError("emission schedule exceeds V - eps");

  Rat n = Rat(static_cast<unsigned long>(sizes.size()));
  Trace tr;
  tr.flow = flow;
  push_packet(tr, sizes[0], a[0], jitter + eps);
  for (std::size_t k = 1; k < sizes.size(); ++k) {
    push_packet(tr, sizes[k], a[k], jitter + Rat(static_cast<unsigned long>(k - 1)) * eps / n);
  }
  return tr;
}

struct Stage {
  Rat jitter;  // V_h
  Rat rto;     // lambda_h
};

struct ConcatScenario {
  std::vector<Trace> stages;  // stage h: entry at stage input, packets indexed by input order
  Trace end_to_end;           // emit = entry into the first stage, observe = exit of the last
  std::vector<std::vector<Rat>> exit_times;  // exit_times[h][i]: packet i+1 leaving stage h (h = 0 is the entry)
};

/// Two packets entering the chain eps apart. Stages before s carry them
/// unchanged, stage s swaps them by lambda_s, later stages delay packet 1 by
/// V_h more than packet 2. End-to-end RTO is lambda_s + sum_{h>s} V_h - eps.
/// `s` is 1-based.
inline ConcatScenario gen_thm7_concat_tight(const std::vector<Stage>& stages, std::size_t s, const Rat& eps,
                                            const Rat& size = 64, const std::vector<Rat>& transfer = {}) {
  if (stages.empty()) throw ScenarioError("need at least one stage");
  if (s < 1 || s > stages.size()) throw ScenarioError("stage index s out of range");
  for (std::size_t h = 0; h < stages.size(); ++h) {
    const auto& st = stages[h];
    if (st.jitter.is_infinite() || st.jitter.sign() < 0 || st.rto.sign() < 0 || st.rto > st.jitter) {
      throw ScenarioError("stage " + std::to_string(h + 1) + ": need 0 <= lambda_h <= V_h < inf");
    }
    if (h + 1 < s && !st.rto.is_zero()) throw ScenarioError("stages before s must have lambda = 0");
  }
  const Rat& lam = stages[s - 1].rto;
  if (!(eps.sign() > 0 && eps < lam)) throw ScenarioError("need 0 < eps < lambda_s");
  if (!transfer.empty() && transfer.size() != stages.size()) throw ScenarioError("one transfer time per stage");
  auto d = [&](std::size_t h) { return transfer.empty() ? Rat(0) : transfer[h]; };

  ConcatScenario out;
  std::vector<Rat> e{Rat(0), eps};
  out.exit_times.push_back(e);
  for (std::size_t h = 0; h < stages.size(); ++h) {
    std::vector<Rat> next = e;
    if (h + 1 < s) {
      next[0] += d(h);
      next[1] += d(h);
    } else if (h + 1 == s) {
      next[0] += d(h) + lam;
      next[1] += d(h);
    } else {
      next[0] += d(h) + stages[h].jitter;
      next[1] += d(h);
    }
    // stage trace, packets renumbered by the order they enter this stage
    Trace st;
    std::vector<std::size_t> order{0, 1};
    if (e[1] < e[0]) order = {1, 0};
    for (std::size_t i : order) push_packet(st, size, e[i], next[i]);
    out.stages.push_back(std::move(st));
    out.exit_times.push_back(next);
    e = std::move(next);
  }
  push_packet(out.end_to_end, size, out.exit_times.front()[0], e[0]);
  push_packet(out.end_to_end, size, out.exit_times.front()[1], e[1]);
  return out;
}

}  // namespace tsnreorder
