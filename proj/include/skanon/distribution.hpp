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
// Exact finite probability distributions and the two (epsilon, delta)
// discrepancy notions used to verify privacy claims: the hockey-stick
// divergence (event form: the smallest delta such that P(O) <= e^eps Q(O) +
// delta for every event O) and the ratio-violation mass (pointwise form: the
// P-probability of outcomes whose likelihood ratio leaves [e^-eps, e^eps]).
// The pointwise form dominates the event form.

#ifndef SKANON_DISTRIBUTION_HPP_
#define SKANON_DISTRIBUTION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "skanon/errors.hpp"

namespace skanon {

// Wide enough for laws with thousands of transcendentally computed masses
// (each lgamma-based pmf is only accurate to about n*log(n)*machine epsilon)
// while still rejecting genuinely unnormalized input.
inline constexpr double kMassTolerance = 1e-9;

// A probability law with finite support, stored as (outcome, mass) pairs
// sorted by outcome. Construction validates nonnegativity and that the total
// mass is 1 within kMassTolerance; zero-mass entries are dropped so the
// stored pairs are exactly the support.
template <typename Outcome>
class FiniteDistribution {
 public:
  using Item = std::pair<Outcome, double>;

  static FiniteDistribution from_items(std::vector<Item> items) {
    FiniteDistribution dist(canonicalize(std::move(items)));
    double total = dist.total_mass();
    if (std::fabs(total - 1.0) > kMassTolerance) {
      throw DomainError("distribution mass sums to " + std::to_string(total) +
                        ", not 1");
    }
    return dist;
  }

  // Scales arbitrary nonnegative weights into a probability law.
  static FiniteDistribution normalized(std::vector<Item> weights) {
    std::vector<Item> items = canonicalize(std::move(weights));
    double total = 0.0;
    for (const Item& item : items) total += item.second;
    if (!(total > 0.0)) {
      throw DomainError("cannot normalize weights with zero total");
    }
    for (Item& item : items) item.second /= total;
    return FiniteDistribution(std::move(items));
  }

  double mass(const Outcome& x) const {
    auto it = std::lower_bound(
        items_.begin(), items_.end(), x,
        [](const Item& item, const Outcome& key) { return item.first < key; });
    if (it == items_.end() || x < it->first) return 0.0;
    return it->second;
  }

  double total_mass() const {
    double total = 0.0;
    for (const Item& item : items_) total += item.second;
    return total;
  }

  std::size_t support_size() const { return items_.size(); }
  const std::vector<Item>& items() const { return items_; }

 private:
  explicit FiniteDistribution(std::vector<Item> items)
      : items_(std::move(items)) {}

  static std::vector<Item> canonicalize(std::vector<Item> items) {
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.first < b.first; });
    std::vector<Item> merged;
    merged.reserve(items.size());
    for (Item& item : items) {
      if (!(item.second >= 0.0)) {
        throw DomainError("distribution mass must be nonnegative, got " +
                          std::to_string(item.second));
      }
      if (!merged.empty() && !(merged.back().first < item.first)) {
        merged.back().second += item.second;
      } else {
        merged.push_back(std::move(item));
      }
    }
    std::erase_if(merged, [](const Item& item) { return item.second == 0.0; });
    return merged;
  }

  std::vector<Item> items_;
};

namespace internal {

// Walks the union of two sorted supports, invoking visit(p_mass, q_mass)
// once per outcome present in either distribution.
template <typename Outcome, typename Visitor>
void for_each_union_outcome(const FiniteDistribution<Outcome>& p,
                            const FiniteDistribution<Outcome>& q,
                            Visitor visit) {
  const auto& pi = p.items();
  const auto& qi = q.items();
  std::size_t a = 0;
  std::size_t b = 0;
  while (a < pi.size() || b < qi.size()) {
    if (b == qi.size() || (a < pi.size() && pi[a].first < qi[b].first)) {
      visit(pi[a].second, 0.0);
      ++a;
    } else if (a == pi.size() || qi[b].first < pi[a].first) {
      visit(0.0, qi[b].second);
      ++b;
    } else {
      visit(pi[a].second, qi[b].second);
      ++a;
      ++b;
    }
  }
}

inline void check_epsilon_nonnegative(double epsilon) {
  if (!(epsilon >= 0.0)) {
    throw DomainError("epsilon must be nonnegative, got " +
                      std::to_string(epsilon));
  }
}

}  // namespace internal

// Smallest delta with P(O) <= e^eps Q(O) + delta for all events O. One-sided;
// swap the arguments for the other direction of the guarantee.
template <typename Outcome>
double hockey_stick_delta(const FiniteDistribution<Outcome>& p,
                          const FiniteDistribution<Outcome>& q,
                          double epsilon) {
  internal::check_epsilon_nonnegative(epsilon);
  double scale = std::exp(epsilon);
  double delta = 0.0;
  internal::for_each_union_outcome(
      p, q, [&](double pm, double qm) { delta += std::max(0.0, pm - scale * qm); });
  return std::min(delta, 1.0);
}

// P-mass of outcomes whose ratio P(x)/Q(x) falls outside [e^-eps, e^eps].
// An outcome carried by P but not Q violates every finite budget; an outcome
// with no P-mass contributes nothing either way.
template <typename Outcome>
double ratio_violation_mass(const FiniteDistribution<Outcome>& p,
                            const FiniteDistribution<Outcome>& q,
                            double epsilon) {
  internal::check_epsilon_nonnegative(epsilon);
  double scale = std::exp(epsilon);
  double mass = 0.0;
  internal::for_each_union_outcome(p, q, [&](double pm, double qm) {
    if (pm == 0.0) return;
    if (qm == 0.0 || pm > scale * qm || qm > scale * pm) mass += pm;
  });
  return std::min(mass, 1.0);
}

// Law of map(X) for X ~ dist.
template <typename Outcome, typename Map,
          typename Image = std::decay_t<std::invoke_result_t<Map, Outcome>>>
FiniteDistribution<Image> pushforward(const FiniteDistribution<Outcome>& dist,
                                      Map map) {
  std::vector<typename FiniteDistribution<Image>::Item> items;
  items.reserve(dist.items().size());
  for (const auto& [outcome, mass] : dist.items()) {
    items.emplace_back(map(outcome), mass);
  }
  return FiniteDistribution<Image>::from_items(std::move(items));
}

// Law of "with probability p draw from d1, else from d2".
template <typename Outcome>
FiniteDistribution<Outcome> mixture(const FiniteDistribution<Outcome>& d1,
                                    const FiniteDistribution<Outcome>& d2,
                                    double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("mixture weight must lie in [0,1], got " +
                      std::to_string(p));
  }
  std::vector<typename FiniteDistribution<Outcome>::Item> items;
  for (const auto& [outcome, mass] : d1.items()) {
    items.emplace_back(outcome, p * mass);
  }
  for (const auto& [outcome, mass] : d2.items()) {
    items.emplace_back(outcome, (1.0 - p) * mass);
  }
  return FiniteDistribution<Outcome>::from_items(std::move(items));
}

}  // namespace skanon

#endif  // SKANON_DISTRIBUTION_HPP_
