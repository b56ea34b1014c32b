// Copyright 2026 The skanon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Expected values marked "30-digit reference" were computed independently
// with high-precision arithmetic (exact binomial coefficients, 30
// significant digits) and frozen here as decimal literals.

#include "skanon/privacy.hpp"

#include <cmath>
#include <cstdint>
#include <optional>

#include "gtest/gtest.h"
#include "skanon/errors.hpp"

namespace skanon {
namespace {

void ExpectRelNear(double expected, double actual, double rel) {
  ASSERT_NE(expected, 0.0);
  EXPECT_NEAR(actual / expected, 1.0, rel)
      << "expected " << expected << " got " << actual;
}

TEST(PrivacyParamsTest, ValidatesRanges) {
  PrivacyParams ok{0.2, 1.0, 1e-6, 20};
  EXPECT_NO_THROW(ok.validate());
  EXPECT_THROW((PrivacyParams{0.0, 1.0, 0.0, 1}).validate(), DomainError);
  EXPECT_THROW((PrivacyParams{1.0, 1.0, 0.0, 1}).validate(), DomainError);
  EXPECT_THROW((PrivacyParams{0.2, 0.0, 0.0, 1}).validate(), DomainError);
  EXPECT_THROW((PrivacyParams{0.2, 1.0, 1.0, 1}).validate(), DomainError);
  EXPECT_THROW((PrivacyParams{0.2, 1.0, -0.1, 1}).validate(), DomainError);
  EXPECT_THROW((PrivacyParams{0.2, 1.0, 0.0, 0}).validate(), DomainError);
}

TEST(PrivacyParamsTest, SamplingMustDominateDelta) {
  EXPECT_TRUE((PrivacyParams{0.2, 1.0, 1e-6, 20}).sampling_dominates_delta());
  EXPECT_FALSE((PrivacyParams{0.2, 1.0, 0.2, 20}).sampling_dominates_delta());
  EXPECT_FALSE((PrivacyParams{0.2, 1.0, 0.5, 20}).sampling_dominates_delta());
}

TEST(GammaThresholdTest, HandValues) {
  EXPECT_DOUBLE_EQ(0.75, gamma_threshold(std::log(2.0), 0.5));
  // 30-digit reference values.
  ExpectRelNear(0.705696447063, gamma_threshold(1.0, 0.2), 1e-11);
  ExpectRelNear(0.454122406259, gamma_threshold(0.5, 0.1), 1e-11);
}

TEST(GammaThresholdTest, ApproachesOneFromBelow) {
  for (double beta : {0.05, 0.3, 0.9}) {
    double g = gamma_threshold(20.0, beta);
    EXPECT_GT(g, 1.0 - 1e-8);
    EXPECT_LT(g, 1.0);
  }
  EXPECT_LT(gamma_threshold(800.0, 0.5), 1.0);
}

TEST(GammaThresholdTest, ExceedsBetaAcrossGrid) {
  for (int i = 1; i <= 10; ++i) {
    double beta = i / 11.0;
    for (int j = 1; j <= 10; ++j) {
      double epsilon = j * 0.35;
      double g = gamma_threshold(epsilon, beta);
      ASSERT_GT(g - beta, 0.0) << "beta=" << beta << " epsilon=" << epsilon;
      ASSERT_LT(g, 1.0);
    }
  }
}

TEST(GammaThresholdTest, RejectsOutOfDomain) {
  EXPECT_THROW(gamma_threshold(0.0, 0.5), DomainError);
  EXPECT_THROW(gamma_threshold(-1.0, 0.5), DomainError);
  EXPECT_THROW(gamma_threshold(1.0, 0.0), DomainError);
  EXPECT_THROW(gamma_threshold(1.0, 1.0), DomainError);
}

TEST(MinEpsilonTest, HandValues) {
  EXPECT_DOUBLE_EQ(std::log(2.0), min_epsilon(0.5));
  ExpectRelNear(0.223143551314, min_epsilon(0.2), 1e-11);
  ExpectRelNear(0.105360515658, min_epsilon(0.1), 1e-11);
  EXPECT_NEAR(1e-9, min_epsilon(1e-9), 1e-15);
  EXPECT_THROW(min_epsilon(0.0), DomainError);
  EXPECT_THROW(min_epsilon(1.0), DomainError);
}

struct DeltaCase {
  std::int64_t k;
  double beta;
  double epsilon;
  double expected;
  std::int64_t argmax_n;
};

TEST(DeltaStronglySafeTest, PublishedGridOfEighteenCells) {
  // k=20 across three sampling rates and six budgets; 30-digit reference.
  const DeltaCase cases[] = {
      {20, 0.05, 0.25, 6.82865067381e-10, 76},
      {20, 0.05, 0.5, 2.49888333648e-14, 47},
      {20, 0.05, 0.75, 3.19495052391e-17, 36},
      {20, 0.05, 1.0, 1.75951021288e-19, 30},
      {20, 0.05, 1.5, 3.97025302041e-22, 25},
      {20, 0.05, 2.0, 1.99818611145e-24, 22},
      {20, 0.1, 0.25, 4.19477390176e-6, 66},
      {20, 0.1, 0.5, 1.60625293618e-9, 44},
      {20, 0.1, 0.75, 3.43670757999e-12, 34},
      {20, 0.1, 1.0, 4.07250568109e-14, 29},
      {20, 0.1, 1.5, 3.221971246e-16, 25},
      {20, 0.1, 2.0, 1.891e-18, 22},
      {20, 0.2, 0.25, 0.00215827718095, 53},
      {20, 0.2, 0.5, 8.01835648348e-6, 38},
      {20, 0.2, 0.75, 1.89197190007e-7, 32},
      {20, 0.2, 1.0, 6.03285343743e-9, 28},
      {20, 0.2, 1.5, 4.78872915149e-11, 24},
      {20, 0.2, 2.0, 1.587544064e-12, 22},
  };
  for (const DeltaCase& c : cases) {
    DeltaResult r = delta_strongly_safe(c.k, c.beta, c.epsilon);
    ExpectRelNear(c.expected, r.delta, 1e-9);
    EXPECT_EQ(c.argmax_n, r.argmax_n)
        << "beta=" << c.beta << " epsilon=" << c.epsilon;
    EXPECT_FALSE(r.cap_hit);
  }
}

TEST(DeltaStronglySafeTest, SmallParameterSpotChecks) {
  // 30-digit reference; the first four are exact decimals.
  const DeltaCase cases[] = {
      {2, 0.5, 1.0, 0.25, 2},
      {5, 0.2, 1.0, 0.004672, 7},
      {2, 0.025, 2.0, 0.000625, 2},
      {20, 0.1, 2.0, 1.891e-18, 22},
      {3, 0.1, 0.5, 0.01585, 6},
      {2, 0.1, 0.3, 0.114265, 6},
      {10, 0.3, 1.0, 0.000651960009, 13},
  };
  for (const DeltaCase& c : cases) {
    DeltaResult r = delta_strongly_safe(c.k, c.beta, c.epsilon);
    ExpectRelNear(c.expected, r.delta, 1e-9);
    EXPECT_EQ(c.argmax_n, r.argmax_n);
  }
  EXPECT_NEAR(0.816060279414, delta_strongly_safe(2, 0.5, 1.0).gamma, 1e-12);
  EXPECT_NEAR(0.74248439118, delta_strongly_safe(10, 0.3, 1.0).gamma, 1e-12);
  EXPECT_EQ(44, delta_strongly_safe(20, 0.1, 0.5).n_start);
}

TEST(DeltaStronglySafeTest, RejectsEpsilonBelowFeasibilityBound) {
  try {
    delta_strongly_safe(20, 0.5, 0.5);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("-ln(1-beta)"), std::string::npos);
  }
  EXPECT_THROW(delta_strongly_safe(0, 0.2, 1.0), DomainError);
  EXPECT_THROW(delta_strongly_safe(20, 0.0, 1.0), DomainError);
  EXPECT_NO_THROW(delta_strongly_safe(20, 0.2, min_epsilon(0.2)));
}

TEST(DeltaStronglySafeTest, SingletonClassesLeakTheSamplingRate) {
  // With k=1 a class of size one is published exactly when its only member
  // is sampled, an event of probability beta that cannot happen without the
  // member. The bound therefore never drops below beta, reaching it exactly
  // once the budget is large.
  const double beta = 0.025;
  EXPECT_NEAR(0.025, delta_strongly_safe(1, beta, 2.0).delta, 1e-15);
  EXPECT_NEAR(0.025, delta_strongly_safe(1, beta, 3.0).delta, 1e-15);
  // 30-digit reference at epsilon = -ln(1-beta) + 0.1.
  double eps = min_epsilon(beta) + 0.1;
  ExpectRelNear(0.1624084065002, delta_strongly_safe(1, beta, eps).delta,
                1e-9);
  for (double e = min_epsilon(beta) + 0.01; e < 3.0; e += 0.1) {
    ASSERT_GE(delta_strongly_safe(1, beta, e).delta, beta);
  }
}

TEST(DeltaStronglySafeTest, PairClassesBeatTheSamplingRate) {
  EXPECT_LT(delta_strongly_safe(2, 0.025, 2.0).delta, 0.001);
}

TEST(DeltaStronglySafeTest, MonotoneTrendsAcrossTheGrid) {
  // Nonincreasing in epsilon and k, nondecreasing in beta.
  for (double beta : {0.05, 0.1, 0.2, 0.3}) {
    double prev = 2.0;
    for (double eps = 0.4; eps <= 3.0; eps += 0.13) {
      double cur = delta_strongly_safe(20, beta, eps).delta;
      ASSERT_LE(cur, prev + 1e-18) << "beta=" << beta << " eps=" << eps;
      prev = cur;
    }
  }
  for (double eps : {0.5, 1.0, 2.0}) {
    double prev = 2.0;
    for (std::int64_t k : {2, 5, 10, 20, 40}) {
      double cur = delta_strongly_safe(k, 0.2, eps).delta;
      ASSERT_LT(cur, prev) << "k=" << k << " eps=" << eps;
      prev = cur;
    }
  }
  double prev = 0.0;
  for (double beta : {0.05, 0.1, 0.2, 0.3, 0.4}) {
    double cur = delta_strongly_safe(20, beta, 1.0).delta;
    ASSERT_GT(cur, prev) << "beta=" << beta;
    prev = cur;
  }
}

TEST(DeltaEsafeTest, ZeroBudgetReducesExactly) {
  DeltaResult a = delta_esafe(20, 0.1, 1.0, 0.0);
  DeltaResult b = delta_strongly_safe(20, 0.1, 1.0);
  EXPECT_EQ(a.delta, b.delta);
  EXPECT_EQ(a.argmax_n, b.argmax_n);
}

TEST(DeltaEsafeTest, ShiftsTheBudget) {
  EXPECT_EQ(delta_esafe(20, 0.1, 1.0, 0.5).delta,
            delta_strongly_safe(20, 0.1, 0.5).delta);
  // 2.25 - 0.25 is exact in binary, so this matches the plain bound at 2.0.
  ExpectRelNear(1.587544064e-12, delta_esafe(20, 0.2, 2.25, 0.25).delta, 1e-9);
}

TEST(DeltaEsafeTest, RejectsBudgetViolations) {
  EXPECT_THROW(delta_esafe(20, 0.1, 0.2, 0.15), DomainError);
  EXPECT_THROW(delta_esafe(20, 0.1, 1.0, -0.1), DomainError);
  EXPECT_NO_THROW(delta_esafe(20, 0.1, min_epsilon(0.1) + 0.5, 0.5));
}

TEST(EsafeParamsTest, ValidatesBudgetSplit) {
  EsafeParams ok{PrivacyParams{0.1, 1.0, 1e-6, 20}, 0.5};
  EXPECT_NO_THROW(ok.validate());
  EsafeParams tight{PrivacyParams{0.1, 0.2, 1e-6, 20}, 0.15};
  EXPECT_THROW(tight.validate(), DomainError);
  EsafeParams negative{PrivacyParams{0.1, 1.0, 1e-6, 20}, -0.5};
  EXPECT_THROW(negative.validate(), DomainError);
}

TEST(AmplifyTest, TenfoldSamplingCutsLnElevenToLnTwo) {
  AmplifiedParams out = amplify(std::log(11.0), 1e-5, 1.0, 0.1);
  ExpectRelNear(std::log(2.0), out.epsilon2, 1e-12);
  ExpectRelNear(1e-6, out.delta2, 1e-12);
  EXPECT_DOUBLE_EQ(0.1, out.ratio);
}

TEST(AmplifyTest, UnitEpsilonReferences) {
  // 30-digit reference values.
  ExpectRelNear(0.15856507874, amplify(1.0, 0.0, 1.0, 0.1).epsilon2, 1e-10);
  ExpectRelNear(0.0170368632362, amplify(1.0, 0.0, 1.0, 0.01).epsilon2, 1e-10);
  ExpectRelNear(0.0953101798043, amplify(std::log(11.0), 1e-5, 1.0, 0.01).epsilon2,
                1e-10);
}

TEST(AmplifyTest, EqualRatesChangeNothing) {
  AmplifiedParams out = amplify(1.7, 0.3, 0.4, 0.4);
  EXPECT_EQ(1.7, out.epsilon2);
  EXPECT_EQ(0.3, out.delta2);
  EXPECT_EQ(1.0, out.ratio);
}

TEST(AmplifyTest, ComposesMultiplicatively) {
  double e1 = 1.3;
  double d1 = 2e-4;
  AmplifiedParams first = amplify(e1, d1, 0.8, 0.4);
  AmplifiedParams chained = amplify(first.epsilon2, first.delta2, 0.4, 0.1);
  AmplifiedParams direct = amplify(e1, d1, 0.8, 0.1);
  EXPECT_NEAR(direct.epsilon2, chained.epsilon2, 1e-12);
  EXPECT_NEAR(direct.delta2, chained.delta2, 1e-12);
}

TEST(AmplifyTest, NeverIncreasesEitherParameter) {
  for (double ratio : {0.01, 0.25, 0.5, 0.99, 1.0}) {
    for (double e1 : {0.1, 1.0, 4.0}) {
      AmplifiedParams out = amplify(e1, 0.37, 1.0, ratio);
      ASSERT_LE(out.epsilon2, e1);
      ASSERT_LE(out.delta2, 0.37);
    }
  }
}

TEST(AmplifyTest, RejectsIncreasedRate) {
  EXPECT_THROW(amplify(1.0, 0.0, 0.2, 0.5), DomainError);
  EXPECT_THROW(amplify(1.0, 0.0, 1.0, 0.0), DomainError);
  EXPECT_THROW(amplify(1.0, 0.0, 1.2, 1.1), DomainError);
  EXPECT_THROW(amplify(-1.0, 0.0, 1.0, 0.5), DomainError);
  EXPECT_THROW(amplify(1.0, 1.5, 1.0, 0.5), DomainError);
}

TEST(SolveMinEpsilonTest, VacuousBoundReturnsTheFeasibilityFloor) {
  std::optional<double> eps = solve_min_epsilon(20, 0.1, 1.0);
  ASSERT_TRUE(eps.has_value());
  EXPECT_DOUBLE_EQ(min_epsilon(0.1), *eps);
}

TEST(SolveMinEpsilonTest, BracketsTheCrossingPoint) {
  std::optional<double> eps = solve_min_epsilon(20, 0.1, 1e-6);
  ASSERT_TRUE(eps.has_value());
  // The grid bracket around the crossing, from the 30-digit reference:
  // d = 1.054e-6 at 0.2913605... and 7.823e-7 one step later.
  EXPECT_GT(*eps, 0.2913605166578263);
  EXPECT_LE(*eps, 0.2923605166578263);
  EXPECT_LE(delta_strongly_safe(20, 0.1, *eps).delta, 1e-6);
  EXPECT_GT(delta_strongly_safe(20, 0.1, *eps - kSolveEpsilonStep).delta,
            1e-6);
}

TEST(SolveMinEpsilonTest, LargerClassesNeedSmallerBudgets) {
  std::optional<double> at20 = solve_min_epsilon(20, 0.2, 1e-6);
  std::optional<double> at50 = solve_min_epsilon(50, 0.2, 1e-6);
  ASSERT_TRUE(at20.has_value());
  ASSERT_TRUE(at50.has_value());
  EXPECT_LT(*at50, *at20);
}

TEST(SolveMinEpsilonTest, ReportsUnsatisfiableTargets) {
  // d(5, 0.2, epsilon) can never drop below beta^5 = 3.2e-4.
  EXPECT_FALSE(solve_min_epsilon(5, 0.2, 1e-6).has_value());
  EXPECT_THROW(solve_min_epsilon(5, 0.2, 0.0), DomainError);
  EXPECT_THROW(solve_min_epsilon(0, 0.2, 1e-6), DomainError);
}

TEST(SolveMinKTest, VacuousBoundReturnsOne) {
  std::optional<std::int64_t> k = solve_min_k(0.1, 1.0, 1.0);
  ASSERT_TRUE(k.has_value());
  EXPECT_EQ(1, *k);
}

TEST(SolveMinKTest, FindsTheFirstSatisfyingClassSize) {
  std::optional<std::int64_t> k = solve_min_k(0.1, 1.0, 1e-12);
  ASSERT_TRUE(k.has_value());
  EXPECT_EQ(18, *k);
  EXPECT_LE(delta_strongly_safe(*k, 0.1, 1.0).delta, 1e-12);
  EXPECT_GT(delta_strongly_safe(*k - 1, 0.1, 1.0).delta, 1e-12);
}

TEST(SolveMinKTest, TableCellActsAsUpperWitness) {
  std::optional<std::int64_t> k = solve_min_k(0.2, 1.0, 6.1e-9);
  ASSERT_TRUE(k.has_value());
  EXPECT_LE(*k, 20);
  EXPECT_LE(delta_strongly_safe(*k, 0.2, 1.0).delta, 6.1e-9);
}

TEST(SolveMinKTest, RespectsTheCeiling) {
  EXPECT_FALSE(solve_min_k(0.5, 1.0, 1e-9, 3).has_value());
  EXPECT_THROW(solve_min_k(0.5, 0.5, 1e-9), DomainError);
  EXPECT_THROW(solve_min_k(0.5, 1.0, 0.0), DomainError);
}

}  // namespace
}  // namespace skanon
