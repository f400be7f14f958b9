#include "tsnreorder/metrics.hpp"
#include "tsnreorder/scenarios.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tsnreorder;
using namespace tsnreorder::literals;

namespace {

Trace observed(std::initializer_list<Rat> e, Rat size = 64) {
  Trace tr;
  for (const auto& x : e) push_packet(tr, size, std::nullopt, x);
  return tr;
}

Curve alpha1() { return Curve::min_affine({{6400, 6400}, {"125e6"_r, 64}}); }

}  // namespace

TEST(Rto, Examples) {
  RtoResult r = rto(observed({5, 0}));
  EXPECT_EQ(r.value, Rat(5));
  EXPECT_EQ(r.per_packet.at(1), Rat(5));
  EXPECT_EQ(r.per_packet.at(2), Rat(0));
  EXPECT_EQ(rto(observed({1, 2, 3, 4})).value, Rat(0));
  EXPECT_EQ(rto(Trace{}).value, Rat(0));
}

TEST(Rto, LostPacketsHaveNoOffset) {
  RtoResult r = rto(observed({Rat::infinity(), 3, 1}));
  EXPECT_EQ(r.per_packet.count(1), 0u);
  EXPECT_EQ(r.value, Rat(2));
}

TEST(Rto, DuplicateObservationTimesRejected) {
  EXPECT_THROW(rto(observed({1, 1})), TraceError);
  EXPECT_THROW(rbo(observed({1, 1})), TraceError);
  // lost packets may share +inf
  EXPECT_NO_THROW(rto(observed({Rat::infinity(), Rat::infinity(), 2})));
}

TEST(Rto, MatchesQuadraticScan) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    Trace tr = oracle::random_trace(rng);
    RtoResult r = rto(tr);
    auto want = oracle::rto_scan(tr);
    EXPECT_EQ(r.per_packet, want);
    EXPECT_EQ(r.value, oracle::max_of(want));
  }
}

TEST(Rbo, Examples) {
  RboResult r = rbo(observed({5, 1, 2}));
  EXPECT_EQ(r.per_packet.at(1), Rat(128));
  EXPECT_EQ(r.value, Rat(128));
  EXPECT_EQ(rbo(observed({1, 2, 3})).value, Rat(0));
}

TEST(Rbo, MatchesQuadraticScan) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 200; ++i) {
    Trace tr = oracle::random_trace(rng);
    RboResult r = rbo(tr);
    auto want = oracle::rbo_scan(tr);
    EXPECT_EQ(r.per_packet, want);
    EXPECT_EQ(r.value, oracle::max_of(want));
  }
}

TEST(Rbo, GeneratorRoundTrip) {
  std::vector<Rat> sizes{64, 200, 1500, 77};
  Trace tr = gen_thm3_lossless_backlog(Rat(7), sizes, 64);
  EXPECT_EQ(rbo(tr).value, Rat(64 + 200 + 1500 + 77));
}

TEST(DelayJitter, Examples) {
  Trace tr;
  push_packet(tr, 64, Rat(0), Rat(3));
  push_packet(tr, 64, Rat(1), Rat(2));
  DelayJitter dj = delay_jitter(tr);
  EXPECT_EQ(dj.d_max, Rat(3));
  EXPECT_EQ(dj.d_min, Rat(1));
  EXPECT_EQ(dj.jitter, Rat(2));

  Trace one;
  push_packet(one, 64, Rat(4), Rat(9));
  EXPECT_EQ(delay_jitter(one).jitter, Rat(0));

  Trace gen = gen_thm5_rto_tight("1.5e-6"_r, alpha1(), 64, "3e-6"_r);
  EXPECT_EQ(delay_jitter(gen).jitter, "1.5e-6"_r);
}

TEST(DelayJitter, Errors) {
  EXPECT_THROW(delay_jitter(observed({1, 2})), TraceError);
  Trace lost;
  push_packet(lost, 64, Rat(0), Rat::infinity());
  EXPECT_THROW(delay_jitter(lost), TraceError);
  // lost packets are simply excluded
  push_packet(lost, 64, Rat(1), Rat(4));
  EXPECT_EQ(delay_jitter(lost).d_max, Rat(3));
}

TEST(Metrics, Properties) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    Trace tr = oracle::random_trace(rng);
    // emit times: anything non-decreasing and no later than every observation
    Rat a = -1000;
    for (auto& p : tr.packets) {
      a += oracle::random_rat(rng, 0, 3, 5);
      p.emit = a;
    }
    RtoResult lam = rto(tr);
    RboResult pi = rbo(tr);
    bool any = false;
    for (const auto& p : tr.packets) any = any || !p.lost();
    if (any) {
      EXPECT_LE(lam.value, delay_jitter(tr).jitter);
    }

    bool in_order = true;
    Rat last = -1;
    for (const auto& p : tr.packets) {
      if (p.lost()) continue;
      if (p.observe < last) in_order = false;
      last = p.observe;
    }
    EXPECT_EQ(lam.value.is_zero(), in_order);
    if (lam.value.is_zero()) {
      EXPECT_TRUE(pi.value.is_zero());
    }

    // global time shift
    Trace shifted = tr;
    for (auto& p : shifted.packets) {
      if (!p.lost()) p.observe += 17;
      *p.emit += 17;
    }
    EXPECT_EQ(rto(shifted).value, lam.value);
    EXPECT_EQ(rbo(shifted).value, pi.value);

    // dropping lost records (and renumbering) changes nothing
    Trace kept;
    for (const auto& p : tr.packets) {
      if (!p.lost()) push_packet(kept, p.size, p.emit, p.observe);
    }
    EXPECT_EQ(rto(kept).value, lam.value);
    EXPECT_EQ(rbo(kept).value, pi.value);
  }
}

TEST(RboValues, Validity) {
  FlowSpec fixed = make_flow(Curve::leaky_bucket(6400, 6400), 64, 64);
  FlowSpec mixed = make_flow(Curve::leaky_bucket(6400, 6400), 64, 200);
  EXPECT_TRUE(validate_rbo_value(6336, fixed));
  EXPECT_FALSE(validate_rbo_value(100, fixed));
  EXPECT_TRUE(validate_rbo_value(70, mixed));
  EXPECT_TRUE(validate_rbo_value(0, fixed));
  EXPECT_FALSE(validate_rbo_value(63, mixed));
  EXPECT_FALSE(validate_rbo_value(-64, fixed));
}

TEST(RboValues, ValidityMatchesBruteForce) {
  struct Range {
    long lo, hi;
  };
  for (Range r : {Range{64, 64}, Range{64, 128}, Range{64, 200}, Range{10, 25}, Range{3, 3}}) {
    FlowSpec f = make_flow(Curve::leaky_bucket(1, 10000), r.lo, r.hi);
    auto sums = oracle::reachable_sums(r.lo, r.hi, 2000);
    for (long x = 0; x <= 2000; ++x) {
      EXPECT_EQ(validate_rbo_value(x, f), sums.count(x) == 1) << r.lo << ".." << r.hi << " x=" << x;
    }
  }
  // non-integer totals follow the interval characterization
  FlowSpec f = make_flow(Curve::leaky_bucket(1, 10000), "1.5"_r, 4);
  std::mt19937_64 rng(24);
  for (int i = 0; i < 200; ++i) {
    Rat x = oracle::random_rat(rng, 0, 30, 8);
    EXPECT_EQ(validate_rbo_value(x, f), oracle::valid_sum_brute(x, "1.5"_r, 4)) << x;
  }
}

TEST(RboValues, LargestValidAndDecompose) {
  FlowSpec fixed = make_flow(Curve::leaky_bucket(6400, 6400), 64, 64);
  FlowSpec mixed = make_flow(Curve::leaky_bucket(6400, 6400), 64, 200);
  EXPECT_EQ(largest_valid_rbo("6336.5"_r, fixed), Rat(6336));
  EXPECT_EQ(largest_valid_rbo("6400.5"_r, fixed), Rat(6400));
  EXPECT_EQ(largest_valid_rbo(63, fixed), Rat(0));
  EXPECT_EQ(largest_valid_rbo("6336.5"_r, mixed), "6336.5"_r);

  std::mt19937_64 rng(25);
  for (int i = 0; i < 300; ++i) {
    Rat x = oracle::random_rat(rng, 64, 5000, 4);
    const FlowSpec& f = i % 2 ? mixed : fixed;
    if (!validate_rbo_value(x, f)) {
      EXPECT_THROW(decompose(x, f), TraceError);
      continue;
    }
    auto parts = decompose(x, f);
    Rat sum = 0;
    for (const auto& l : parts) {
      EXPECT_GE(l, f.l_min);
      EXPECT_LE(l, f.l_max);
      sum += l;
    }
    EXPECT_EQ(sum, x);
  }
}
