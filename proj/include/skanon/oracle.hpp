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
// Independent verification of the analytic privacy bounds by exhaustive
// computation on exact output distributions. For a single equivalence class
// of size n the published count after sampling and suppression is a censored
// binomial: 0 with probability F(k-1; n, beta), j with probability
// f(j; n, beta) for j in [k, n]. Removing one class member turns n into n-1,
// so measuring the discrepancy between the two censored laws over a range of
// n bounds the privacy loss of the whole mechanism from below per class, and
// a product-law argument lifts the single-class result to whole datasets.
// Everything here is derived from first principles with no reference to the
// analytic calculator, which is what makes the cross-checks meaningful.

#ifndef SKANON_ORACLE_HPP_
#define SKANON_ORACLE_HPP_

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "skanon/binomial.hpp"
#include "skanon/distribution.hpp"
#include "skanon/errors.hpp"
#include "skanon/privacy.hpp"
#include "skanon/rng.hpp"

namespace skanon {

// Published-count law for one class of size n under threshold k and
// sampling rate beta.
struct CensoredBinomial {
  std::int64_t n = 0;
  std::int64_t k = 1;
  double beta = 0.0;
  FiniteDistribution<std::int64_t> law =
      FiniteDistribution<std::int64_t>::from_items({{0, 1.0}});
};

inline CensoredBinomial censored_binomial(std::int64_t n, std::int64_t k,
                                          double beta) {
  if (n < 0) {
    throw DomainError("class size must be nonnegative, got " +
                      std::to_string(n));
  }
  if (k < 1) {
    throw DomainError("k must be at least 1, got " + std::to_string(k));
  }
  BinomialSpec spec(n, beta);
  std::vector<FiniteDistribution<std::int64_t>::Item> items;
  if (n < k) {
    items.emplace_back(0, 1.0);
  } else {
    items.emplace_back(0, cdf(k - 1, spec));
    for (std::int64_t j = k; j <= n; ++j) {
      items.emplace_back(j, pmf(j, spec));
    }
  }
  return CensoredBinomial{
      n, k, beta, FiniteDistribution<std::int64_t>::from_items(std::move(items))};
}

// Largest pointwise-ratio discrepancy between neighboring class sizes up to
// n_max, taking the worse direction of each pair. This is the oracle
// counterpart of the analytic bound: it never exceeds it, and matches it
// whenever the analytic argmax class size lies within n_max.
inline double worst_case_delta(std::int64_t k, double beta, double epsilon,
                               std::int64_t n_max) {
  if (k < 1) {
    throw DomainError("k must be at least 1, got " + std::to_string(k));
  }
  double eps_floor = min_epsilon(beta);
  if (!(epsilon >= eps_floor)) {
    throw DomainError("epsilon " + std::to_string(epsilon) +
                      " below the feasibility bound -ln(1-beta) = " +
                      std::to_string(eps_floor));
  }
  double worst = 0.0;
  CensoredBinomial prev = censored_binomial(0, k, beta);
  for (std::int64_t n = 1; n <= n_max; ++n) {
    CensoredBinomial cur = censored_binomial(n, k, beta);
    worst = std::max({worst, ratio_violation_mass(cur.law, prev.law, epsilon),
                      ratio_violation_mass(prev.law, cur.law, epsilon)});
    prev = std::move(cur);
  }
  return worst;
}

// Empirical check of the sampling amplification map: measure the oracle
// discrepancy at rate beta1, push (epsilon1, delta1) through the map with
// beta2/beta1 = ratio, and measure again at the reduced rate beta1*ratio.
// The theorem promises delta_observed <= delta_bound.
struct AmplificationCheck {
  double epsilon2 = 0.0;
  double delta1 = 0.0;
  double delta_bound = 0.0;
  double delta_observed = 0.0;
  bool pass = false;
};

inline AmplificationCheck verify_amplification(std::int64_t k, double beta1,
                                               double ratio, double epsilon1,
                                               std::int64_t n_max) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw DomainError("rate ratio must lie in (0,1], got " +
                      std::to_string(ratio));
  }
  AmplificationCheck check;
  check.delta1 = worst_case_delta(k, beta1, epsilon1, n_max);
  AmplifiedParams amplified = amplify(epsilon1, check.delta1, 1.0, ratio);
  check.epsilon2 = amplified.epsilon2;
  check.delta_bound = amplified.delta2;
  check.delta_observed =
      worst_case_delta(k, beta1 * ratio, check.epsilon2, n_max);
  check.pass = check.delta_observed <= check.delta_bound + 1e-15;
  return check;
}

// Result of a randomized property sweep. max_violation is the largest
// amount by which any tested inequality's left side exceeded its right
// side before slack; the check passes when it stays within slack.
struct PropertyCheck {
  std::int64_t trials = 0;
  double max_violation = 0.0;
  double slack = 0.0;
  bool pass = false;
};

namespace internal {

// Dedicated sub-streams for the property sweeps, disjoint from the pipeline
// streams declared in rng.hpp.
inline constexpr std::uint64_t kStreamPropSupport = 5;
inline constexpr std::uint64_t kStreamPropMass = 6;
inline constexpr std::uint64_t kStreamPropEpsilon = 7;
inline constexpr std::uint64_t kStreamPropMap = 8;
inline constexpr std::uint64_t kStreamPropWeight = 9;

// Deterministic random distribution over outcomes {0,...,7} with sparse
// support, for property sweeps. `salt` separates draws within one trial.
inline FiniteDistribution<int> random_distribution(std::uint64_t seed,
                                                   std::uint64_t trial,
                                                   std::uint64_t salt) {
  std::vector<std::pair<int, double>> items;
  for (std::uint64_t attempt = 0; items.empty(); ++attempt) {
    std::uint64_t base = trial * 64 + salt * 8 + attempt * 4096;
    for (int outcome = 0; outcome < 8; ++outcome) {
      std::uint64_t index = base + static_cast<std::uint64_t>(outcome);
      double keep = draw_u01(seed, kStreamPropSupport, index);
      if (keep < 0.6) {
        items.emplace_back(outcome,
                           draw_u01(seed, kStreamPropMass, index) + 1e-3);
      }
    }
  }
  return FiniteDistribution<int>::normalized(std::move(items));
}

inline double property_epsilon(std::uint64_t seed, std::uint64_t trial) {
  constexpr double kGrid[] = {0.0, 0.2, 0.6931471805599453, 1.5, 3.0};
  return kGrid[draw_bits(seed, kStreamPropEpsilon, trial) % 5];
}

}  // namespace internal

// Data-processing sweep: on `trials` random pairs and outcome maps, checks
// that mapping outcomes never increases the hockey-stick discrepancy and
// that the pointwise ratio-violation mass dominates it.
inline PropertyCheck check_postprocessing(std::int64_t trials,
                                          std::uint64_t seed) {
  if (trials < 1) {
    throw DomainError("trial count must be at least 1, got " +
                      std::to_string(trials));
  }
  PropertyCheck result;
  result.trials = trials;
  result.slack = 1e-12;
  for (std::int64_t t = 0; t < trials; ++t) {
    std::uint64_t trial = static_cast<std::uint64_t>(t);
    FiniteDistribution<int> p = internal::random_distribution(seed, trial, 0);
    FiniteDistribution<int> q = internal::random_distribution(seed, trial, 1);
    double eps = internal::property_epsilon(seed, trial);
    int fold =
        2 + static_cast<int>(draw_bits(seed, internal::kStreamPropMap, trial) %
                             3);
    auto map = [fold](int outcome) { return outcome % fold; };
    double before = hockey_stick_delta(p, q, eps);
    double after = hockey_stick_delta(pushforward(p, map),
                                      pushforward(q, map), eps);
    result.max_violation = std::max(result.max_violation, after - before);
    double rvm = ratio_violation_mass(p, q, eps);
    result.max_violation = std::max(result.max_violation, before - rvm);
  }
  result.pass = result.max_violation <= result.slack;
  return result;
}

// Convexity sweep: mixing two neighbor pairs with one weight never yields a
// hockey-stick discrepancy above the mixture of the pairs' discrepancies.
inline PropertyCheck check_convexity(std::int64_t trials,
                                     std::uint64_t seed) {
  if (trials < 1) {
    throw DomainError("trial count must be at least 1, got " +
                      std::to_string(trials));
  }
  PropertyCheck result;
  result.trials = trials;
  result.slack = 1e-12;
  for (std::int64_t t = 0; t < trials; ++t) {
    std::uint64_t trial = static_cast<std::uint64_t>(t);
    FiniteDistribution<int> p1 = internal::random_distribution(seed, trial, 0);
    FiniteDistribution<int> q1 = internal::random_distribution(seed, trial, 1);
    FiniteDistribution<int> p2 = internal::random_distribution(seed, trial, 2);
    FiniteDistribution<int> q2 = internal::random_distribution(seed, trial, 3);
    double eps = internal::property_epsilon(seed, trial);
    double lambda = draw_u01(seed, internal::kStreamPropWeight, trial);
    double mixed = hockey_stick_delta(mixture(p1, p2, lambda),
                                      mixture(q1, q2, lambda), eps);
    double split = lambda * hockey_stick_delta(p1, q1, eps) +
                   (1.0 - lambda) * hockey_stick_delta(p2, q2, eps);
    result.max_violation = std::max(result.max_violation, mixed - split);
  }
  result.pass = result.max_violation <= result.slack;
  return result;
}

}  // namespace skanon

#endif  // SKANON_ORACLE_HPP_
