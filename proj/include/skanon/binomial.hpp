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
// Binomial(n, beta) mass, CDF and strict upper tail. All mass is computed in
// log-space through lgamma so probabilities down to the underflow limit stay
// representable, and range sums accumulate terms largest-first (walking
// outward from the mode) to limit cancellation. Both properties matter here:
// downstream privacy bounds are tail sums on the order of 1e-24.

#ifndef SKANON_BINOMIAL_HPP_
#define SKANON_BINOMIAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "skanon/errors.hpp"

namespace skanon {

struct BinomialSpec {
  std::int64_t n = 0;
  double beta = 0.0;

  BinomialSpec(std::int64_t n_in, double beta_in) : n(n_in), beta(beta_in) {
    if (n < 0) {
      throw DomainError("binomial trial count must be nonnegative, got " +
                        std::to_string(n));
    }
    if (!(beta >= 0.0 && beta <= 1.0)) {
      throw DomainError("binomial success probability must lie in [0,1], got " +
                        std::to_string(beta));
    }
  }
};

// ln C(n,j) * beta^j * (1-beta)^(n-j). Degenerate beta values are special
// cased because j*ln(beta) would produce 0 * -inf = NaN.
inline double log_pmf(std::int64_t j, const BinomialSpec& spec) {
  if (j < 0 || j > spec.n) {
    throw DomainError("binomial outcome " + std::to_string(j) +
                      " outside support [0," + std::to_string(spec.n) + "]");
  }
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (spec.beta == 0.0) return j == 0 ? 0.0 : kNegInf;
  if (spec.beta == 1.0) return j == spec.n ? 0.0 : kNegInf;
  double n = static_cast<double>(spec.n);
  double x = static_cast<double>(j);
  double log_choose =
      std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0);
  return log_choose + x * std::log(spec.beta) +
         (n - x) * std::log1p(-spec.beta);
}

inline double pmf(std::int64_t j, const BinomialSpec& spec) {
  return std::exp(log_pmf(j, spec));
}

namespace internal {

// Sum of pmf over integer j in [lo, hi], accumulated largest term first.
// The pmf is unimodal, so walking two pointers outward from the in-range
// mode visits terms in descending order of magnitude.
inline double sum_pmf_range(std::int64_t lo, std::int64_t hi,
                            const BinomialSpec& spec) {
  lo = std::max<std::int64_t>(lo, 0);
  hi = std::min<std::int64_t>(hi, spec.n);
  if (lo > hi) return 0.0;
  auto mode = static_cast<std::int64_t>(
      std::floor(static_cast<double>(spec.n + 1) * spec.beta));
  mode = std::clamp(mode, lo, hi);
  double total = pmf(mode, spec);
  std::int64_t left = mode - 1;
  std::int64_t right = mode + 1;
  double left_val = left >= lo ? pmf(left, spec) : -1.0;
  double right_val = right <= hi ? pmf(right, spec) : -1.0;
  while (left >= lo || right <= hi) {
    if (left_val >= right_val) {
      total += left_val;
      --left;
      left_val = left >= lo ? pmf(left, spec) : -1.0;
    } else {
      total += right_val;
      ++right;
      right_val = right <= hi ? pmf(right, spec) : -1.0;
    }
  }
  return total;
}

}  // namespace internal

inline double cdf(std::int64_t j, const BinomialSpec& spec) {
  if (j < 0 || j > spec.n) {
    throw DomainError("binomial cdf argument " + std::to_string(j) +
                      " outside support [0," + std::to_string(spec.n) + "]");
  }
  return internal::sum_pmf_range(0, j, spec);
}

// Mass strictly above the threshold: sum of pmf(j) over threshold < j <= n.
// The inequality is evaluated in double precision with no epsilon fudge; an
// exactly integral threshold excludes that integer from the sum.
inline double tail_strict(double threshold, const BinomialSpec& spec) {
  if (std::isnan(threshold)) {
    throw DomainError("tail threshold must not be NaN");
  }
  if (threshold < 0.0) return internal::sum_pmf_range(0, spec.n, spec);
  if (threshold >= static_cast<double>(spec.n)) return 0.0;
  auto lo = static_cast<std::int64_t>(std::floor(threshold)) + 1;
  return internal::sum_pmf_range(lo, spec.n, spec);
}

}  // namespace skanon

#endif  // SKANON_BINOMIAL_HPP_
