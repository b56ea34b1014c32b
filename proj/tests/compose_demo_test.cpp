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

#include "skanon/compose_demo.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "skanon/errors.hpp"

namespace skanon {
namespace {

TEST(ComposeDemoParamsTest, ValidatesFields) {
  ComposeDemoParams p;
  EXPECT_NO_THROW(p.validate());
  p.m_per_gender = 0;
  EXPECT_THROW(p.validate(), DomainError);
  p = ComposeDemoParams{};
  p.threshold = 0;
  EXPECT_THROW(p.validate(), DomainError);
  p = ComposeDemoParams{};
  p.beta = 1.0;
  EXPECT_THROW(p.validate(), DomainError);
  p = ComposeDemoParams{};
  p.eps2 = 0.0;
  EXPECT_THROW(p.validate(), DomainError);
  // Safety margin: expected sample size must dominate the threshold.
  p = ComposeDemoParams{};
  p.m_per_gender = 100;
  p.threshold = 100;
  p.beta = 0.5;
  EXPECT_THROW(p.validate(), DomainError);
}

TEST(ComposeDemoParamsTest, NoiseScaleIsOneOverEpsBetaPopulation) {
  ComposeDemoParams p;
  EXPECT_DOUBLE_EQ(0.001, noise_scale(p));
  p.m_per_gender = 5000;
  EXPECT_DOUBLE_EQ(0.0002, noise_scale(p));
  p = ComposeDemoParams{};
  p.m_per_gender = 20;
  p.beta = 0.01;
  EXPECT_DOUBLE_EQ(2.5, noise_scale(p));
}

TEST(LaplaceUpperTailTest, MatchesClosedForm) {
  EXPECT_DOUBLE_EQ(0.5, internal::laplace_upper_tail(0.0, 0.001));
  EXPECT_NEAR(0.5 / std::exp(1.0), internal::laplace_upper_tail(0.001, 0.001),
              1e-15);
  for (double x : {-0.4, -0.01, 0.0, 0.003, 0.2}) {
    double up = internal::laplace_upper_tail(x, 0.05);
    double down = internal::laplace_upper_tail(-x, 0.05);
    EXPECT_NEAR(1.0, up + down, 1e-15) << "x=" << x;
  }
}

// 30-digit reference values for the default configuration (m=1000 per
// gender, threshold 100, beta 0.5, eps2 1), truncated to 12 digits.
TEST(ComposeDemoExactTest, DefaultConfigurationWithoutTarget) {
  ComposeDemoParams p;
  EXPECT_NEAR(0.022529540478, compose_demo_event_probability(p, false), 1e-9);
}

TEST(ComposeDemoExactTest, DefaultConfigurationWithTarget) {
  ComposeDemoParams p;
  EXPECT_NEAR(0.258883492455, compose_demo_event_probability(p, true), 1e-9);
}

TEST(ComposeDemoExactTest, LargerPopulationShrinksTheEvent) {
  ComposeDemoParams p;
  p.m_per_gender = 5000;
  EXPECT_NEAR(0.010126152901, compose_demo_event_probability(p, false), 1e-9);
}

TEST(ComposeDemoExactTest, BelowThresholdConfigurationIsSymmetric) {
  // With the sample size essentially always under the threshold, A1 never
  // fires and the event reduces to a symmetric coin: probability 1/2.
  ComposeDemoParams p;
  p.m_per_gender = 20;
  p.beta = 0.01;
  EXPECT_NEAR(0.5, compose_demo_event_probability(p, false), 1e-12);
}

TEST(ComposeDemoEstimateTest, AgreesWithExactOnSmallConfiguration) {
  ComposeDemoParams p;
  p.m_per_gender = 50;
  p.threshold = 10;
  p.beta = 0.3;
  p.eps2 = 2.0;
  double exact = compose_demo_event_probability(p, false);
  double est = compose_demo_estimate(p, false, 50000, 7);
  double sigma = std::sqrt(exact * (1.0 - exact) / 50000.0);
  EXPECT_NEAR(exact, est, 5.0 * sigma);
  double exact_t = compose_demo_event_probability(p, true);
  double est_t = compose_demo_estimate(p, true, 50000, 7);
  double sigma_t = std::sqrt(exact_t * (1.0 - exact_t) / 50000.0);
  EXPECT_NEAR(exact_t, est_t, 5.0 * sigma_t);
}

TEST(ComposeDemoEstimateTest, AgreesWithExactOnDefaultConfiguration) {
  ComposeDemoParams p;
  double est = compose_demo_estimate(p, false, 20000, 11);
  EXPECT_NEAR(0.022529540478, est, 5.0 * 1.05e-3);
  double est_t = compose_demo_estimate(p, true, 20000, 11);
  EXPECT_NEAR(0.258883492455, est_t, 5.0 * 3.10e-3);
}

TEST(ComposeDemoEstimateTest, DeterministicGivenSeed) {
  ComposeDemoParams p;
  p.m_per_gender = 30;
  p.threshold = 5;
  EXPECT_EQ(compose_demo_estimate(p, true, 2000, 3),
            compose_demo_estimate(p, true, 2000, 3));
  EXPECT_THROW(compose_demo_estimate(p, true, 0, 3), DomainError);
}

}  // namespace
}  // namespace skanon
