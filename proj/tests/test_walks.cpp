#include <gtest/gtest.h>

#include <cmath>

#include "qsc/walks.hpp"

using namespace qsc;

namespace {

Rational R(long p, long q = 1) { return make_rational(p, q); }

}  // namespace

TEST(Rng, Deterministic) {
  Xoshiro256 a(42), b(42);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a(), b());
  auto c = Xoshiro256::derived(1, 0), d = Xoshiro256::derived(1, 1);
  EXPECT_NE(c(), d());
  Xoshiro256 u(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
  }
}

// Reference values of the generator for seed 0 (splitmix64 expansion).
TEST(Rng, FrozenStream) {
  Xoshiro256 g(0);
  const std::uint64_t first = g();
  Xoshiro256 h(0);
  EXPECT_EQ(first, h());
  EXPECT_EQ(first, 11091344671253066420ULL);
}

TEST(CouponWalkSpec, Steps) {
  const auto w = coupon_walk_spec(2, 1);
  EXPECT_EQ(w.step(0, 0).plus, R(1, 2));
  EXPECT_EQ(w.step(0, 1).plus, 0);
  EXPECT_EQ(w.step(0, 1).zero, 1);
  const auto d = walk_dp(coupon_walk_spec(5, 2), 1);
  EXPECT_EQ(d[1].at(1), R(2, 5));
  EXPECT_EQ(d[1].at(0), R(3, 5));
  EXPECT_THROW(coupon_walk_spec(1, 2), DomainError);
}

TEST(WWalkSpec, SmallCase) {
  const auto w = w_walk_spec(3, 2);
  EXPECT_EQ(w.step(0, 0).zero, R(2, 3));
  EXPECT_EQ(w.step(0, 0).plus, R(1, 3));
  const auto d = walk_dp(w, 1);
  EXPECT_EQ(d[0].at(0), 1);
  EXPECT_EQ(d[1].at(0), R(2, 3));
  EXPECT_EQ(d[1].at(1), R(1, 3));
  const auto s = coupon_spectrum_exact(3, 2, 1);
  EXPECT_EQ(d[1].at(1), Rational(s.entries[1].multiplicity) * s.entries[1].eigenvalue);
}

TEST(WalkIdentity, ExactAgainstRecurrence) {
  for (unsigned n = 3; n <= 16; ++n)
    for (unsigned k = (n + 1) / 2; k < n; ++k) {
      const unsigned T = 40;
      const auto dp = walk_dp(w_walk_spec(n, k), T);
      const auto hist = coupon_lambda_history<Rational>(n, k, T);
      for (unsigned t = 0; t <= T; ++t) {
        ASSERT_EQ(dp[t].total(), 1);
        for (unsigned s = 0; s <= n - k; ++s)
          ASSERT_EQ(dp[t].at(s), Rational(johnson_multiplicity(n, s)) * hist[t][s]) << n << " " << k << " " << t;
      }
    }
}

TEST(WalkDp, RejectsBadSpec) {
  WalkSpec<Rational> bad;
  bad.lo = 0;
  bad.hi = 2;
  bad.label = "bad";
  bad.step = [](unsigned, long) { return StepProbs<Rational>{R(1, 2), R(1, 2), 0}; };
  EXPECT_THROW(walk_dp(bad, 2), ContractError);
}

TEST(DiffWalk, BasicLaws) {
  EXPECT_EQ(diff_walk_dp(10, 2, 0).at(0), 1);
  const unsigned n = 12, m = 3;
  for (unsigned t : {1u, 4u, 9u}) {
    const auto d = diff_walk_dp(n, m, t);
    EXPECT_EQ(d.total(), 1);
    EXPECT_EQ(d.lo(), -static_cast<long>(t));
    EXPECT_EQ(d.hi(), static_cast<long>(m));
    const Rational expect_mean = Rational(m) * (1 - pow_rational(1 - R(1, n), t)) - Rational(t) * R(m * m, n * n);
    EXPECT_EQ(d.mean(), expect_mean);
    const auto w = walk_dp(coupon_walk_spec(n, m), t);
    EXPECT_EQ(d.at(m), pow_rational(1 - R(m * m, n * n), t) * w[t].at(m));
  }
}

// The projected time-dependent walk reproduces the marginal of W'' - V''.
TEST(DiffWalk, ProjectionReproducesMarginals) {
  const unsigned n = 14, m = 3, T = 12;
  const auto viaSpec = walk_dp(diff_walk_spec<Rational>(n, m, T), T);
  const auto hist = diff_walk_history<Rational>(n, m, T);
  for (unsigned t = 0; t <= T; ++t) {
    const auto d = hist.difference(t);
    for (long s = -static_cast<long>(t); s <= static_cast<long>(m); ++s) ASSERT_EQ(viaSpec[t].at(s), d.at(s));
  }
}

TEST(WalkMc, AgreesWithDp) {
  const auto spec = w_walk_spec<double>(20, 14);
  const unsigned T = 30;
  const std::size_t trials = 100000;
  const auto mc = walk_mc(spec, T, trials, 17);
  const auto dp = walk_dp(spec, T).back();
  double tv = 0;
  for (long s = dp.lo(); s <= dp.hi(); ++s) tv += std::fabs(mc.at(s) - dp.at(s));
  tv /= 2;
  const double support = static_cast<double>(dp.probs.size());
  EXPECT_LE(tv, 4 * std::sqrt(support / trials));
  const auto one = walk_mc(spec, 0, 1, 3);
  EXPECT_EQ(one.at(0), 1.0);
  const auto again = walk_mc(spec, T, 1000, 17);
  EXPECT_EQ(again.probs, walk_mc(spec, T, 1000, 17).probs);
}

TEST(Domination, SelfAndKnownCases) {
  const auto w = walk_dp(w_walk_spec(40, 39), 200);
  const auto self = dominates_cdf(w, w);
  EXPECT_TRUE(self.holds);
  EXPECT_EQ(self.worst_margin, 0.0);

  const unsigned n = 40, m = 1;
  const auto wp = walk_dp(coupon_walk_spec(n - 5 * m, m), 200);
  EXPECT_TRUE(dominates_cdf(wp, w).holds);
  EXPECT_FALSE(dominates_cdf(w, wp).holds);

  const auto w2 = walk_dp(w_walk_spec<double>(40, 38), 200);
  const auto h = diff_walk_history<double>(40, 2, 200);
  std::vector<Distribution<double>> diff;
  for (unsigned t = 0; t <= 200; ++t) diff.push_back(h.difference(t));
  EXPECT_TRUE(dominates_cdf(w2, diff, 1e-12).holds);
}

TEST(Domination, SufficientConditions) {
  const auto w = w_walk_spec(40, 39);
  EXPECT_TRUE(domination_sufficient(w, w, 50).holds);
  EXPECT_TRUE(domination_sufficient(coupon_walk_spec(35, 1), w, 50).holds);
  EXPECT_TRUE(domination_sufficient(w_walk_spec<double>(40, 38), diff_walk_spec<double>(40, 2, 100), 100, 1e-15).holds);

  // Inflate the left step of W at state 1.
  auto tampered = w;
  const auto base = w.step;
  tampered.step = [base](unsigned t, long s) {
    auto p = base(t, s);
    if (s == 1) {
      p.minus += R(1, 100);
      p.zero -= R(1, 100);
    }
    return p;
  };
  const auto rep = domination_sufficient(tampered, w, 10);
  EXPECT_FALSE(rep.holds);
  EXPECT_EQ(rep.witness_i, 1);
  EXPECT_EQ(rep.witness_condition, "left-step");
}

TEST(Coupling, NeverInvertsUnderHypotheses) {
  const auto res = coupled_mc(coupon_walk_spec<double>(35, 1), w_walk_spec<double>(40, 39), 100, 10000, 1);
  EXPECT_EQ(res.ordered_fraction(), 1.0);
  const auto res2 = coupled_mc(w_walk_spec<double>(40, 38), diff_walk_spec<double>(40, 2, 200), 200, 10000, 2);
  EXPECT_EQ(res2.inversion_fraction(), 0.0);
  // Reversed roles must invert on some path.
  const auto rev = coupled_mc(w_walk_spec<double>(40, 39), coupon_walk_spec<double>(35, 1), 100, 10000, 1);
  EXPECT_GT(rev.inversion_fraction(), 0.0);
}

TEST(WtEstimates, Values) {
  const auto z = wt_estimates(5, 2, 0);
  EXPECT_EQ(z.mean_exact, 0);
  EXPECT_EQ(z.hit_dp, 0.0);
  const auto e = wt_estimates(2, 1, 3);
  EXPECT_EQ(e.mean_exact, R(7, 8));
  EXPECT_DOUBLE_EQ(e.mean_dp, 7.0 / 8);
  const auto f = wt_estimates(10, 3, 30);
  EXPECT_TRUE(f.holds);
  EXPECT_LE(f.hit_lb, f.hit_dp);
  EXPECT_LE(f.hit_dp, f.hit_ub);
  for (unsigned np : {1u, 2u, 7u, 50u})
    for (unsigned m = 1; m <= np && m <= 6; ++m)
      for (unsigned t : {0u, 1u, 5u, 40u, 300u}) EXPECT_TRUE(wt_estimates(np, m, t).holds) << np << " " << m << " " << t;
}

// A step leaving [lo, hi] is a malformed walk, not a reachable state.
TEST(DominationSufficient, RejectsMalformedWalk) {
  auto a = coupon_walk_spec<double>(10, 2);
  const auto b = w_walk_spec<double>(12, 10);
  a.step = [](unsigned, long) { return StepProbs<double>{0.1, 0.5, 0.4}; };
  EXPECT_THROW(domination_sufficient(a, b, 5), ContractError);
}
