#include "tsnreorder/scenarios.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace tsnreorder;
using namespace tsnreorder::literals;

namespace {

Curve alpha1() { return Curve::min_affine({{6400, 6400}, {"125e6"_r, 64}}); }
Rat inf() { return Rat::infinity(); }

std::vector<Rat> observe_times(const Trace& tr) {
  std::vector<Rat> e;
  for (const auto& p : tr.packets) e.push_back(p.observe);
  return e;
}

void expect_distinct_finite(const Trace& tr) { EXPECT_NO_THROW(validate(tr)); }

}  // namespace

TEST(GreedyEmission, ConcaveCurveMatchesPseudoInverse) {
  std::vector<Rat> sizes(120, Rat(64));
  auto t = greedy_emission_times(alpha1(), sizes);
  Rat sum = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    sum += sizes[k];
    EXPECT_EQ(t[k], lower_pseudo_inverse(alpha1(), sum)) << k;
  }
  EXPECT_THROW(greedy_emission_times(Curve::leaky_bucket(1, 10), {Rat(11)}), ScenarioError);
}

TEST(TimeoutViolation, Examples) {
  Trace tr = gen_thm2_violation(7);
  EXPECT_EQ(observe_times(tr), (std::vector<Rat>{7, 0}));
  EXPECT_EQ(rto(tr).value, Rat(7));
  EXPECT_TRUE(simulate(tr, {Rat(7) - "1e-6"_r, inf()}).any_discard());
  EXPECT_FALSE(simulate(tr, {Rat(7), inf()}).any_discard());
  EXPECT_EQ(observe_times(gen_thm2_violation(2, 10)), (std::vector<Rat>{12, 10}));
  EXPECT_THROW(gen_thm2_violation(0), ScenarioError);
}

TEST(LosslessBacklog, Examples) {
  std::vector<Rat> sizes(99, Rat(64));
  Trace tr = gen_thm3_lossless_backlog("29.488e-6"_r, sizes, 64);
  expect_distinct_finite(tr);
  EXPECT_EQ(rto(tr).value, "29.488e-6"_r);
  EXPECT_EQ(rbo(tr).value, Rat(6336));
  ResequencerOutcome o = simulate(tr, {"29.488e-6"_r, inf()});
  EXPECT_FALSE(o.any_discard());
  EXPECT_EQ(o.max_occupancy, Rat(6336));

  Trace one = gen_thm3_lossless_backlog(5, {Rat(100)}, 64);
  EXPECT_EQ(simulate(one, {Rat(5), inf()}).max_occupancy, Rat(100));
  EXPECT_EQ(rto(one).value, Rat(5));
}

TEST(LosslessBacklog, Errors) {
  EXPECT_THROW(gen_thm3_lossless_backlog(0, {Rat(64)}, 64), ScenarioError);
  EXPECT_THROW(gen_thm3_lossless_backlog(1, {}, 64), ScenarioError);
  FlowSpec f = make_flow(Curve::leaky_bucket(1, 6400), 64, 200);
  EXPECT_THROW(gen_thm3_lossless_backlog(1, {Rat(300)}, 64, f), ScenarioError);
}

TEST(LossyBacklog, AutomotiveCase) {
  FlowSpec f = make_flow(Curve::leaky_bucket(6400, 6400), 64, 64);
  Rat v = "92.688e-6"_r, t = "29.488e-6"_r, eps = "1e-6"_r;
  Trace tr = gen_thm3_lossy_backlog(alpha1(), v, t, eps, f, {true});
  expect_distinct_finite(tr);
  EXPECT_TRUE(check_trace_conforms(tr, alpha1()).conforms);
  EXPECT_LE(delay_jitter(tr).jitter, v);
  EXPECT_TRUE(tr.packets.front().lost());
  ResequencerOutcome o = simulate(tr, {t, inf()});
  EXPECT_FALSE(o.any_discard());
  EXPECT_EQ(o.max_occupancy, Rat(6400));
  EXPECT_THROW(gen_thm3_lossy_backlog(alpha1(), v, t, eps, f), ScenarioError);  // 6400.7... is not 64 k
}

TEST(LossyBacklog, MixedSizesReachTheBoundExactly) {
  FlowSpec f = make_flow(Curve::leaky_bucket(6400, 6400), 64, 1500);
  Curve a = Curve::min_affine({{6400, 6400}, {"125e6"_r, 1500}});
  Rat v = "20e-6"_r, t = "10e-6"_r, eps = "1e-6"_r;
  Trace tr = gen_thm3_lossy_backlog(a, v, t, eps, f);
  EXPECT_TRUE(check_trace_conforms(tr, a).conforms);
  EXPECT_LE(delay_jitter(tr).jitter, v);
  ResequencerOutcome o = simulate(tr, {t, inf()});
  EXPECT_FALSE(o.any_discard());
  EXPECT_EQ(o.max_occupancy, eval(a, v + t - eps));
}

TEST(LossyBacklog, SimultaneousEmissionsStayWithinJitter) {
  // a large burst puts many packets at one emission instant
  Curve a = Curve::leaky_bucket(1000, 6000);
  FlowSpec f = make_flow(a, 64, 128);
  Trace tr = gen_thm3_lossy_backlog(a, "0.5"_r, "0.2"_r, "0.1"_r, f);
  EXPECT_TRUE(check_trace_conforms(tr, a).conforms);
  EXPECT_LT(delay_jitter(tr).jitter, "0.5"_r);
  ResequencerOutcome o = simulate(tr, {"0.2"_r, inf()});
  EXPECT_FALSE(o.any_discard());
  EXPECT_EQ(o.max_occupancy, eval(a, "0.6"_r));
}

TEST(LossyBacklog, Errors) {
  FlowSpec f = make_flow(Curve::leaky_bucket(6400, 6400), 64, 64);
  EXPECT_THROW(gen_thm3_lossy_backlog(alpha1(), 1, 1, 2, f), ScenarioError);
  EXPECT_THROW(gen_thm3_lossy_backlog(alpha1(), 1, 1, 0, f), ScenarioError);
  EXPECT_THROW(gen_thm3_lossy_backlog(Curve::staircase(1, 1), 1, 1, "0.1"_r, f), ScenarioError);
}

TEST(RtoTight, Examples) {
  Trace tr = gen_thm5_rto_tight("1.5e-6"_r, alpha1(), 64);
  EXPECT_EQ(rto(tr).value, "0.988e-6"_r);
  EXPECT_EQ(delay_jitter(tr).jitter, "1.5e-6"_r);
  EXPECT_TRUE(check_trace_conforms(tr, alpha1()).conforms);

  Rat gap = lower_pseudo_inverse(alpha1(), 128);
  EXPECT_EQ(rto(gen_thm5_rto_tight(gap + "1e-9"_r, alpha1(), 64)).value, "1e-9"_r);
  EXPECT_EQ(rto(gen_thm5_rto_tight("1.5e-6"_r, alpha1(), 64, "7e-6"_r)).value, "0.988e-6"_r);
  EXPECT_THROW(gen_thm5_rto_tight(gap, alpha1(), 64), ScenarioError);

  // packet-counting curve
  Trace st = gen_thm5_rto_tight(3, Curve::staircase(1, 2), 64);
  EXPECT_EQ(rto(st).value, Rat(1));
}

TEST(RboTight, LeakyBucketApproachesExampleBound) {
  FlowSpec f = make_flow(Curve::leaky_bucket(1000, 3000), 64, 1500);
  Curve a = Curve::leaky_bucket(1000, 3000);
  Rat v = "0.5"_r;
  Rat prev = 0;
  for (Rat eps : {"0.1"_r, "0.01"_r, "0.001"_r}) {
    Trace tr = gen_thm6_rbo_tight(v, eps, a, f);
    Rat pi = rbo(tr).value;
    EXPECT_EQ(pi, eval(a, v - eps) - Rat(64));
    EXPECT_EQ(rto(tr).value, eps);
    EXPECT_LE(delay_jitter(tr).jitter, v);
    EXPECT_TRUE(check_trace_conforms(tr, a).conforms);
    EXPECT_GT(pi, prev);
    prev = pi;
  }
  EXPECT_LT(Rat(1000) * v + Rat(3000) - Rat(64) - prev, Rat(2));
}

TEST(RboTight, EqualSizesGiveMultiples) {
  FlowSpec f = make_flow(Curve::leaky_bucket(6400, 6400), 64, 64);
  Trace tr = gen_thm6_rbo_tight("79.188e-6"_r, "1e-7"_r, alpha1(), f, {true});
  Rat pi = rbo(tr).value;
  EXPECT_TRUE((pi / Rat(64)).is_integer());
  EXPECT_EQ(rto(tr).value, "1e-7"_r);
  EXPECT_THROW(gen_thm6_rbo_tight("79.188e-6"_r, "1e-7"_r, alpha1(), f), ScenarioError);
  EXPECT_THROW(gen_thm6_rbo_tight(1, 2, alpha1(), f), ScenarioError);
}

TEST(ConcatTight, AutomotiveChain) {
  std::vector<Stage> st{{"1.5e-6"_r, "0.988e-6"_r}, {"13.5e-6"_r, 0}, {"1.5e-6"_r, 0}, {"13.5e-6"_r, 0}};
  Rat eps = "1e-9"_r;
  ConcatScenario sc = gen_thm7_concat_tight(st, 1, eps);
  EXPECT_EQ(rto(sc.end_to_end).value, "29.488e-6"_r - eps);
  ASSERT_EQ(sc.stages.size(), 4u);
  for (std::size_t h = 0; h < st.size(); ++h) {
    EXPECT_LE(delay_jitter(sc.stages[h]).jitter, st[h].jitter);
    EXPECT_LE(rto(sc.stages[h]).value, st[h].rto);
  }
}

TEST(ConcatTight, SingleStageAndPrefix) {
  ConcatScenario one = gen_thm7_concat_tight({{5, 3}}, 1, "0.5"_r);
  EXPECT_EQ(rto(one.end_to_end).value, Rat(3) - "0.5"_r);

  std::vector<Stage> st{{2, 0}, {4, 3}, {6, 0}};
  ConcatScenario sc = gen_thm7_concat_tight(st, 2, "0.25"_r, 64, {1, 2, 3});
  EXPECT_EQ(rto(sc.end_to_end).value, Rat(3) + Rat(6) - "0.25"_r);
  EXPECT_EQ(rto(sc.stages[0]).value, Rat(0));

  EXPECT_THROW(gen_thm7_concat_tight({{1, 2}}, 1, "0.1"_r), ScenarioError);  // lambda > V
  EXPECT_THROW(gen_thm7_concat_tight({{2, 1}, {2, 1}}, 2, "0.1"_r), ScenarioError);
  EXPECT_THROW(gen_thm7_concat_tight({{2, 1}}, 1, 1), ScenarioError);
  EXPECT_THROW(gen_thm7_concat_tight({{2, 1}}, 2, "0.1"_r), ScenarioError);
}
