#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qsc/exact.hpp"
#include "qsc/log_real.hpp"

using namespace qsc;

TEST(Exact, MakeRationalCanonicalizes) {
  const Rational q = make_rational(6, -4);
  EXPECT_EQ(q.get_num(), -3);
  EXPECT_EQ(q.get_den(), 2);
  EXPECT_THROW(make_rational(1, 0), DomainError);
}

TEST(Exact, ParseRational) {
  EXPECT_EQ(parse_rational("12"), Rational(12));
  EXPECT_EQ(parse_rational("-3/8"), make_rational(-3, 8));
  EXPECT_EQ(parse_rational("0.125"), make_rational(1, 8));
  EXPECT_EQ(parse_rational("2.5e-3"), make_rational(1, 400));
  EXPECT_EQ(parse_rational("1e2"), Rational(100));
  EXPECT_THROW(parse_rational(""), UsageError);
  EXPECT_THROW(parse_rational("abc"), UsageError);
  EXPECT_THROW(parse_rational("1/0"), UsageError);
  EXPECT_THROW(parse_rational("1e"), UsageError);
}

TEST(Exact, Log2Big) {
  EXPECT_DOUBLE_EQ(log2_big(BigInt(1024)), 10.0);
  const BigInt huge = pow_big(BigInt(3), 5000);
  EXPECT_NEAR(log2_big(huge), 5000 * std::log2(3.0), 1e-9);
}

TEST(LogReal, ZeroAndSigns) {
  EXPECT_TRUE(LogReal(0.0).is_zero());
  EXPECT_EQ(LogReal(-2.0).sign(), -1);
  EXPECT_TRUE((LogReal(3.0) - LogReal(3.0)).is_zero());
  EXPECT_DOUBLE_EQ((LogReal(3.0) * LogReal(-2.0)).to_double(), -6.0);
  EXPECT_NEAR((LogReal(3.0) + LogReal(-5.0)).to_double(), -2.0, 1e-15);
  EXPECT_THROW(LogReal(1.0) / LogReal(), DomainError);
  EXPECT_LT(LogReal(-3.0), LogReal(-2.0));
  EXPECT_LT(LogReal(-3.0), LogReal());
  EXPECT_LT(LogReal(2.0), LogReal(3.0));
}

// Random positive rationals with magnitudes in [2^-200, 2^200]; sums and
// products in the log domain must agree with exact arithmetic to 1e-12.
TEST(LogReal, AgreesWithExactArithmetic) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> expo(-200, 200);
  std::uniform_int_distribution<unsigned long> mant(1, (1UL << 40));
  auto draw = [&]() {
    const int e = expo(rng);
    Rational q(BigInt(mant(rng)), BigInt(mant(rng)));
    q.canonicalize();
    q *= e >= 0 ? Rational(pow_big(2, e)) : Rational(1, pow_big(2, -e));
    if (rng() & 1) q = -q;
    return q;
  };
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Rational a = draw(), b = draw();
    const Rational exact_prod = a * b;
    const Rational exact_sum = a + b;
    const LogReal prod = LogReal(a) * LogReal(b);
    const LogReal sum = LogReal(a) + LogReal(b);
    ASSERT_EQ(prod.sign(), sgn(exact_prod));
    worst = std::max(worst, std::fabs(std::exp2(prod.log2_magnitude() - log2_rational(abs(exact_prod))) - 1));
    // Relative error of a sum is only meaningful away from cancellation.
    if (sgn(a) == sgn(b)) {
      ASSERT_EQ(sum.sign(), sgn(exact_sum));
      worst = std::max(worst, std::fabs(std::exp2(sum.log2_magnitude() - log2_rational(abs(exact_sum))) - 1));
    }
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(LogReal, MonotoneWithExactComparison) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> v(-100000, 100000);
  for (int i = 0; i < 2000; ++i) {
    const Rational a = make_rational(v(rng), 977), b = make_rational(v(rng), 1013);
    EXPECT_EQ(a < b, LogReal(a) < LogReal(b)) << a.get_str() << " " << b.get_str();
  }
}
