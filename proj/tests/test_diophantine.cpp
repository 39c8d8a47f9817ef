#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "graphctl/diophantine.hpp"

using namespace graphctl;

TEST(Numbers, ParsesExpressions) {
  EXPECT_NEAR(parse_number("sqrt(2)").to_double(), std::sqrt(2.0), 1e-16);
  EXPECT_NEAR(parse_number("7/5").to_double(), 1.4, 1e-16);
  EXPECT_NEAR(parse_number("1 + sqrt(5)/2").to_double(), 1 + std::sqrt(5.0) / 2, 1e-15);
  EXPECT_NEAR(parse_number("e").to_double(), std::exp(1.0), 1e-15);
  EXPECT_NEAR(parse_number("pi").to_double(), M_PI, 1e-15);
  EXPECT_THROW(parse_number("sqrt(2"), std::invalid_argument);
  EXPECT_THROW(parse_number("foo"), std::invalid_argument);
}

TEST(ContinuedFraction, E) {
  const auto cf = continued_fraction(parse_number("e"), 12);
  EXPECT_EQ(cf.quotients(), (std::vector<std::int64_t>{2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8}));
  const auto longer = continued_fraction(parse_number("e"), 30);
  // e = [2; 1, 2, 1, 1, 4, 1, 1, 6, ...]: every third quotient is 2k.
  for (std::size_t i = 1; i < longer.partial_quotients.size(); ++i) {
    const std::int64_t expected = i % 3 == 2 ? 2 * static_cast<std::int64_t>(i / 3 + 1) : 1;
    EXPECT_EQ(longer.partial_quotients[i - 1], expected) << "a_" << i;
  }
}

TEST(ContinuedFraction, RationalTerminates) {
  const auto cf = continued_fraction(parse_number("415/93"), 20);
  EXPECT_TRUE(cf.rational);
  EXPECT_EQ(cf.quotients(), (std::vector<std::int64_t>{4, 2, 6, 7}));
}

TEST(Convergents, SqrtTwoArePellPairs) {
  const auto cs = convergents(parse_number("sqrt(2)"), 20);
  ASSERT_EQ(cs.size(), 20u);
  for (const auto& c : cs) {
    EXPECT_EQ(std::llabs(c.p * c.p - 2 * c.q * c.q), 1) << c.p << "/" << c.q;
    EXPECT_GE(c.quality, 0.29);
  }
}

TEST(Convergents, AlternateAroundAlpha) {
  const auto cs = convergents(parse_number("e"), 15);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    EXPECT_EQ(cs[i].above, i % 2 == 1);
    if (i > 0) EXPECT_LT(cs[i].error, cs[i - 1].error);
    EXPECT_LT(cs[i].quality, 1.0);
  }
}

TEST(Approximability, QuadraticIrrationalsHaveBoundedQuotients) {
  const auto golden = badly_approximable_statistic(parse_number("(1 + sqrt(5))/2"), 40);
  EXPECT_EQ(golden.max_quotient, 1);
  const auto e = badly_approximable_statistic(parse_number("e"), 30);
  EXPECT_GE(e.max_quotient, 20);
  const auto liouville = badly_approximable_statistic(parse_number("liouville(4)"), 10);
  EXPECT_GT(liouville.max_quotient, 1000);
}

TEST(IrrationalityExponent, LiouvilleIsLarge) {
  EXPECT_LT(irrationality_exponent_estimate(parse_number("sqrt(2)"), 30), 2.2);
  // The fourth partial sum is matched to 1e-24 by q = 10^6, an exponent of 4.
  EXPECT_NEAR(irrationality_exponent_estimate(parse_number("liouville(4)"), 12, 10.0), 4.0, 0.01);
}

// Independent check of Dirichlet's theorem invariants.
TEST(Dirichlet, ExhaustiveInvariants) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(-3.0, 3.0);
  for (int d = 1; d <= 3; ++d) {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> alpha(d);
      for (auto& a : alpha) a = unit(rng);
      for (std::int64_t N = 1; N <= 30; ++N) {
        const auto sa = dirichlet_simultaneous(alpha, N);
        const double root = std::sqrt(static_cast<double>(N));
        EXPECT_GE(sa.q, static_cast<std::int64_t>(std::floor(root)));
        EXPECT_LE(static_cast<double>(sa.q), std::pow(static_cast<double>(N), d) + 0.5);
        for (int j = 0; j < d; ++j) {
          const double err = alpha[j] - static_cast<double>(sa.p[j]) / static_cast<double>(sa.q);
          EXPECT_LE(std::abs(err), 1.0 / (sa.q * root) + 1e-12) << "d=" << d << " N=" << N;
          EXPECT_NEAR(err, sa.errors[j], 1e-12);
        }
      }
    }
  }
}

TEST(Dirichlet, KnownCase) {
  const auto sa = dirichlet_simultaneous({std::sqrt(2.0)}, 10);
  EXPECT_EQ(sa.q, 5);
  EXPECT_EQ(sa.p[0], 7);
}

TEST(Dirichlet, OverflowIsRejected) {
  EXPECT_THROW(dirichlet_simultaneous({0.1, 0.2, 0.3}, 10000000), std::invalid_argument);
}
