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
// Composition demo: two releases computed from one Bernoulli sample of a
// two-gender dataset, showing how their combination can reveal whether one
// designated record was present even though each release is harmless alone.
//
// The population is m males and m females, plus an optional designated male
// record (the "target"). One Bernoulli(beta) sample T is drawn, then:
//
//   A1(T) = false when |T| < threshold, otherwise
//           (males(T) > females(T)) XOR (target in T)
//   A2(T) = males(T)/|T| + Laplace(scale),  with males(T)/|T| := 0.5 when
//           T is empty and scale = 1 / (eps2 * beta * 2m)
//
// The distinguishing event is {A1 == false and A2 >= 0.5}. Its probability
// is computed two ways: exactly, by summing over the joint binomial law of
// the male and female counts, and by Monte Carlo with the library's
// counter-based RNG. The noise scale is a constant of the algorithm (fixed
// by the base population size), not of the realized input, so the same
// scale applies with and without the target record.

#ifndef SKANON_COMPOSE_DEMO_HPP_
#define SKANON_COMPOSE_DEMO_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "skanon/binomial.hpp"
#include "skanon/errors.hpp"
#include "skanon/rng.hpp"

namespace skanon {

struct ComposeDemoParams {
  std::int64_t m_per_gender = 1000;
  std::int64_t threshold = 100;
  double beta = 0.5;
  double eps2 = 1.0;

  void validate() const {
    if (m_per_gender < 1) {
      throw DomainError("m_per_gender must be at least 1, got " +
                        std::to_string(m_per_gender));
    }
    if (threshold < 1) {
      throw DomainError("threshold must be at least 1, got " +
                        std::to_string(threshold));
    }
    if (!(beta > 0.0 && beta < 1.0)) {
      throw DomainError("sampling rate must lie in (0,1), got " +
                        std::to_string(beta));
    }
    if (!(eps2 > 0.0) || !std::isfinite(eps2)) {
      throw DomainError("eps2 must be positive and finite, got " +
                        std::to_string(eps2));
    }
    // Safety margin: the expected sample size must dominate the threshold,
    // otherwise A1's gate never opens and the demo degenerates to a coin
    // flip. Requires m_per_gender >= 10 * threshold * beta.
    if (static_cast<double>(m_per_gender) <
        10.0 * static_cast<double>(threshold) * beta) {
      throw DomainError(
          "m_per_gender must be at least 10 * threshold * beta, got " +
          std::to_string(m_per_gender));
    }
  }
};

// Laplace scale used by A2. Calibrated to the base population size 2m for
// both neighboring datasets.
inline double noise_scale(const ComposeDemoParams& params) {
  params.validate();
  return 1.0 / (params.eps2 * params.beta * 2.0 *
                static_cast<double>(params.m_per_gender));
}

namespace internal {

// P(Laplace(0, scale) >= x), evaluated on the side that avoids cancellation.
inline double laplace_upper_tail(double x, double scale) {
  if (x >= 0.0) return 0.5 * std::exp(-x / scale);
  return 1.0 - 0.5 * std::exp(x / scale);
}

// Event probability conditioned on the realized male count (including the
// target when sampled) and female count. `flipped` is the XOR bit, i.e.
// whether the target record was sampled.
inline double event_given_counts(std::int64_t males, std::int64_t females,
                                 bool flipped,
                                 const ComposeDemoParams& params,
                                 double scale) {
  std::int64_t total = males + females;
  bool majority_male = males > females;
  bool a1 = total >= params.threshold && (majority_male != flipped);
  if (a1) return 0.0;
  double frac = total > 0
                    ? static_cast<double>(males) / static_cast<double>(total)
                    : 0.5;
  return laplace_upper_tail(0.5 - frac, scale);
}

}  // namespace internal

// Exact probability of the distinguishing event, by enumeration over the
// joint law of the sampled male and female counts.
inline double compose_demo_event_probability(const ComposeDemoParams& params,
                                             bool target_present) {
  params.validate();
  const std::int64_t m = params.m_per_gender;
  const double scale = noise_scale(params);
  BinomialSpec per_gender(m, params.beta);
  std::vector<double> mass(static_cast<std::size_t>(m) + 1);
  for (std::int64_t j = 0; j <= m; ++j) {
    mass[static_cast<std::size_t>(j)] = pmf(j, per_gender);
  }
  // Probability with the target's sampled bit fixed to `flipped`; the male
  // count gains one when the target (a male) is sampled.
  auto conditional = [&](bool flipped) {
    double p = 0.0;
    for (std::int64_t males = 0; males <= m; ++males) {
      double row = 0.0;
      std::int64_t observed_males = males + (flipped ? 1 : 0);
      for (std::int64_t females = 0; females <= m; ++females) {
        row += mass[static_cast<std::size_t>(females)] *
               internal::event_given_counts(observed_males, females, flipped,
                                            params, scale);
      }
      p += mass[static_cast<std::size_t>(males)] * row;
    }
    return p;
  };
  if (!target_present) return conditional(false);
  return params.beta * conditional(true) +
         (1.0 - params.beta) * conditional(false);
}

// Monte Carlo estimate of the same probability. Each trial derives a fresh
// sub-seed, draws one inclusion coin per population member (males first,
// then females, then the target) and one noise value.
inline double compose_demo_estimate(const ComposeDemoParams& params,
                                    bool target_present, std::int64_t trials,
                                    std::uint64_t seed) {
  params.validate();
  if (trials < 1) {
    throw DomainError("trial count must be at least 1, got " +
                      std::to_string(trials));
  }
  const std::int64_t m = params.m_per_gender;
  const double scale = noise_scale(params);
  std::int64_t hits = 0;
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    std::uint64_t trial_seed =
        draw_bits(seed, kStreamTrial, static_cast<std::uint64_t>(trial));
    std::int64_t males = 0;
    std::int64_t females = 0;
    for (std::int64_t i = 0; i < 2 * m; ++i) {
      if (draw_u01(trial_seed, kStreamSample, static_cast<std::uint64_t>(i)) <
          params.beta) {
        if (i < m) {
          ++males;
        } else {
          ++females;
        }
      }
    }
    bool target_sampled =
        target_present &&
        draw_u01(trial_seed, kStreamSample, static_cast<std::uint64_t>(2 * m)) <
            params.beta;
    if (target_sampled) ++males;
    double noise =
        laplace_from_u01(draw_u01(trial_seed, kStreamNoise, 0), scale);
    std::int64_t total = males + females;
    bool a1 = total >= params.threshold &&
              ((males > females) != target_sampled);
    double frac =
        total > 0 ? static_cast<double>(males) / static_cast<double>(total)
                  : 0.5;
    if (!a1 && frac + noise >= 0.5) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace skanon

#endif  // SKANON_COMPOSE_DEMO_HPP_
