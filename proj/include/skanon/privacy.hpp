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
// Privacy calculator for random sampling followed by safe k-anonymization.
//
// A mechanism that samples each record independently with probability beta
// and then publishes only equivalence classes whose sampled size reaches k
// satisfies (epsilon, delta)-differential privacy with
//
//   delta = d(k, beta, epsilon)
//         = max over n >= ceil(k/gamma - 1) of  sum_{j > gamma n} f(j; n, beta)
//
// where gamma = 1 - (1-beta) e^{-epsilon} and f is the binomial mass. The
// bound requires epsilon >= -ln(1-beta). This header computes d, the related
// epsilon-budgeted variant (part of the budget spent selecting the
// generalization scheme), the sampling amplification map for generic
// mechanisms, and small solvers that invert d in epsilon or k.

#ifndef SKANON_PRIVACY_HPP_
#define SKANON_PRIVACY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "skanon/binomial.hpp"
#include "skanon/errors.hpp"

namespace skanon {

// Parameter bundle for one (beta, epsilon, delta, k) privacy claim.
struct PrivacyParams {
  double beta = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::int64_t k = 1;

  void validate() const {
    if (!(beta > 0.0 && beta < 1.0)) {
      throw DomainError("sampling rate beta must lie in (0,1), got " +
                        std::to_string(beta));
    }
    if (!(epsilon > 0.0)) {
      throw DomainError("epsilon must be positive, got " +
                        std::to_string(epsilon));
    }
    if (!(delta >= 0.0 && delta < 1.0)) {
      throw DomainError("delta must lie in [0,1), got " +
                        std::to_string(delta));
    }
    if (k < 1) {
      throw DomainError("k must be at least 1, got " + std::to_string(k));
    }
  }

  // A claim "sampling at rate beta plus this mechanism is (epsilon,delta)-DP"
  // is only meaningful when beta > delta; otherwise discarding the whole
  // sample outright would already meet the delta budget.
  bool sampling_dominates_delta() const { return beta > delta; }
};

inline double min_epsilon(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("sampling rate beta must lie in (0,1), got " +
                      std::to_string(beta));
  }
  return -std::log1p(-beta);
}

// Fraction threshold gamma = (e^eps - 1 + beta) / e^eps, computed as
// beta + (1-beta)(1 - e^-eps) so that gamma > beta holds even for tiny
// epsilon. Clamped below 1 so that n * gamma < n stays true and the
// large-epsilon limit degrades to the exact floor sum_{j=n} f = beta^n.
inline double gamma_threshold(double epsilon, double beta) {
  if (!(epsilon > 0.0)) {
    throw DomainError("epsilon must be positive, got " +
                      std::to_string(epsilon));
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("sampling rate beta must lie in (0,1), got " +
                      std::to_string(beta));
  }
  double g = beta + (1.0 - beta) * (-std::expm1(-epsilon));
  return std::min(g, std::nextafter(1.0, 0.0));
}

// The value d(k, beta, epsilon) together with where and how it was found.
struct DeltaResult {
  double delta = 0.0;        // the bound itself, clamped to [0,1]
  std::int64_t argmax_n = 0; // class size achieving the maximum
  std::int64_t n_start = 0;  // first admissible class size ceil(k/gamma - 1)
  double gamma = 0.0;        // fraction threshold used
  bool cap_hit = false;      // scan hit the hard cap before the bound closed
};

inline DeltaResult delta_strongly_safe(std::int64_t k, double beta,
                                       double epsilon) {
  if (k < 1) {
    throw DomainError("k must be at least 1, got " + std::to_string(k));
  }
  double eps_floor = min_epsilon(beta);
  if (!(epsilon >= eps_floor)) {
    throw DomainError("epsilon " + std::to_string(epsilon) +
                      " below the feasibility bound -ln(1-beta) = " +
                      std::to_string(eps_floor));
  }
  DeltaResult result;
  result.gamma = gamma_threshold(epsilon, beta);
  double g = result.gamma;
  result.n_start = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(static_cast<double>(k) / g - 1.0)));

  // Terms beyond the current n are bounded by the multiplicative Chernoff
  // bound P(X > gamma n) <= exp(-n c) with c = gamma ln(gamma/beta) -
  // (gamma - beta) > 0, which decreases in n, so the scan can stop as soon
  // as the bound drops below the running maximum. Restricting the scan to
  // n >= n_start is lossless: the bound equals the maximum over all n of
  // P(X >= k and X > gamma n), and below n_start that joint tail only grows
  // with n.
  double c = g * std::log(g / beta) - (g - beta);
  std::int64_t cap =
      std::max<std::int64_t>(10 * result.n_start, result.n_start + 2000);
  double best = 0.0;
  std::int64_t best_n = result.n_start;
  std::int64_t n = result.n_start;
  for (; n <= cap; ++n) {
    double tail =
        tail_strict(g * static_cast<double>(n), BinomialSpec(n, beta));
    if (tail > best) {
      best = tail;
      best_n = n;
    }
    if (best > 0.0 && std::exp(-c * static_cast<double>(n)) < best) break;
  }
  result.cap_hit = n > cap;
  result.delta = std::clamp(best, 0.0, 1.0);
  result.argmax_n = best_n;
  return result;
}

// Variant for pipelines that spend epsilon1 of the budget choosing the
// generalization scheme (on the full dataset, before sampling): the
// remaining budget prices the bound, delta = d(k, beta, epsilon - epsilon1).
inline DeltaResult delta_esafe(std::int64_t k, double beta, double epsilon,
                               double epsilon1) {
  if (!(epsilon1 >= 0.0)) {
    throw DomainError("scheme-selection budget epsilon1 must be nonnegative, "
                      "got " + std::to_string(epsilon1));
  }
  double eps_floor = min_epsilon(beta) + epsilon1;
  if (!(epsilon >= eps_floor)) {
    throw DomainError("epsilon " + std::to_string(epsilon) +
                      " below -ln(1-beta) + epsilon1 = " +
                      std::to_string(eps_floor));
  }
  return delta_strongly_safe(k, beta, epsilon - epsilon1);
}

// Bundle for an epsilon-budgeted claim: epsilon1 of params.epsilon goes to
// scheme selection, the rest to the sampled publication itself.
struct EsafeParams {
  PrivacyParams params;
  double epsilon1 = 0.0;

  void validate() const {
    params.validate();
    if (!(epsilon1 >= 0.0)) {
      throw DomainError("epsilon1 must be nonnegative, got " +
                        std::to_string(epsilon1));
    }
    double floor = min_epsilon(params.beta) + epsilon1;
    if (!(params.epsilon >= floor)) {
      throw DomainError("epsilon " + std::to_string(params.epsilon) +
                        " below -ln(1-beta) + epsilon1 = " +
                        std::to_string(floor));
    }
  }
};

struct AmplifiedParams {
  double epsilon2 = 0.0;
  double delta2 = 0.0;
  double ratio = 1.0;  // beta2 / beta1
};

// Sampling amplification: if a mechanism run after Bernoulli(beta1) sampling
// is (epsilon1, delta1)-DP, the same mechanism after Bernoulli(beta2)
// sampling, beta2 <= beta1, is (epsilon2, delta2)-DP with
// epsilon2 = ln(1 + (beta2/beta1)(e^epsilon1 - 1)) and
// delta2 = (beta2/beta1) delta1.
inline AmplifiedParams amplify(double epsilon1, double delta1, double beta1,
                               double beta2) {
  if (!(epsilon1 >= 0.0)) {
    throw DomainError("epsilon1 must be nonnegative, got " +
                      std::to_string(epsilon1));
  }
  if (!(delta1 >= 0.0 && delta1 <= 1.0)) {
    throw DomainError("delta1 must lie in [0,1], got " +
                      std::to_string(delta1));
  }
  if (!(beta2 > 0.0 && beta2 <= beta1 && beta1 <= 1.0)) {
    throw DomainError(
        "amplification requires 0 < beta2 <= beta1 <= 1, got beta1=" +
        std::to_string(beta1) + " beta2=" + std::to_string(beta2));
  }
  if (beta2 == beta1) return AmplifiedParams{epsilon1, delta1, 1.0};
  AmplifiedParams out;
  out.ratio = beta2 / beta1;
  out.epsilon2 = std::log1p(out.ratio * std::expm1(epsilon1));
  out.delta2 = out.ratio * delta1;
  return out;
}

inline constexpr double kSolveEpsilonStep = 1e-3;
inline constexpr double kSolveEpsilonCeiling = 10.0;
inline constexpr double kSolveEpsilonRefineTol = 1e-9;
inline constexpr std::int64_t kSolveKCeiling = 10000;

// Smallest epsilon with d(k, beta, epsilon) <= delta_max, or nullopt if none
// exists below the ceiling. The search walks a fixed grid of step 1e-3
// starting just above -ln(1-beta) by bisection (d is nonincreasing in
// epsilon: through the joint-tail form above, raising epsilon raises gamma
// and shrinks every term), verifies the bracket endpoints, then bisects the
// bracketing interval down to 1e-9.
inline std::optional<double> solve_min_epsilon(std::int64_t k, double beta,
                                               double delta_max) {
  if (k < 1) {
    throw DomainError("k must be at least 1, got " + std::to_string(k));
  }
  if (!(delta_max > 0.0)) {
    throw DomainError("delta_max must be positive, got " +
                      std::to_string(delta_max));
  }
  auto satisfied = [&](double eps) {
    return delta_strongly_safe(k, beta, eps).delta <= delta_max;
  };
  double eps_floor = min_epsilon(beta);
  if (satisfied(eps_floor)) return eps_floor;
  double start = eps_floor + 1e-9;
  if (start > kSolveEpsilonCeiling) return std::nullopt;
  auto grid = [&](std::int64_t i) {
    return start + kSolveEpsilonStep * static_cast<double>(i);
  };
  auto last = static_cast<std::int64_t>(
      std::floor((kSolveEpsilonCeiling - start) / kSolveEpsilonStep));
  if (!satisfied(grid(last))) return std::nullopt;
  if (satisfied(grid(0))) return grid(0);

  // Invariant: grid(lo) fails, grid(hi) satisfies; ends with hi = lo + 1,
  // which is exactly the verified bracket d(lo) > delta_max >= d(hi).
  std::int64_t lo = 0;
  std::int64_t hi = last;
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (satisfied(grid(mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  double eps_lo = grid(lo);
  double eps_hi = grid(hi);
  while (eps_hi - eps_lo > kSolveEpsilonRefineTol) {
    double mid = 0.5 * (eps_lo + eps_hi);
    if (satisfied(mid)) {
      eps_hi = mid;
    } else {
      eps_lo = mid;
    }
  }
  return eps_hi;
}

// Smallest k <= ceiling with d(k, beta, epsilon) <= delta_max, or nullopt.
// Plain upward scan: no monotonicity assumption needed for correctness.
inline std::optional<std::int64_t> solve_min_k(
    double beta, double epsilon, double delta_max,
    std::int64_t ceiling = kSolveKCeiling) {
  if (!(delta_max > 0.0)) {
    throw DomainError("delta_max must be positive, got " +
                      std::to_string(delta_max));
  }
  if (ceiling < 1) {
    throw DomainError("k ceiling must be at least 1, got " +
                      std::to_string(ceiling));
  }
  double eps_floor = min_epsilon(beta);
  if (!(epsilon >= eps_floor)) {
    throw DomainError("epsilon " + std::to_string(epsilon) +
                      " below the feasibility bound -ln(1-beta) = " +
                      std::to_string(eps_floor));
  }
  for (std::int64_t k = 1; k <= ceiling; ++k) {
    if (delta_strongly_safe(k, beta, epsilon).delta <= delta_max) return k;
  }
  return std::nullopt;
}

}  // namespace skanon

#endif  // SKANON_PRIVACY_HPP_
