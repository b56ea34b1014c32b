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
// The publishing mechanism: Bernoulli sampling, data-independent recoding,
// and suppression of generalized classes below the k threshold. The
// recoding scheme is either fixed ahead of time (strongly-safe path) or
// chosen by the exponential mechanism on the full dataset before sampling,
// spending a separate epsilon1 budget (epsilon-budgeted path). Neighboring
// datasets differ by adding or removing one row.

#ifndef SKANON_PIPELINE_HPP_
#define SKANON_PIPELINE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "skanon/dataset.hpp"
#include "skanon/errors.hpp"
#include "skanon/hierarchy.hpp"
#include "skanon/privacy.hpp"
#include "skanon/rng.hpp"

namespace skanon {

// Per-attribute level choices into a HierarchySpec; a total, dataset-
// independent recoding function.
struct RecodingScheme {
  std::vector<std::int64_t> levels;

  std::string to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (i > 0) out << ',';
      out << levels[i];
    }
    return out.str();
  }
};

inline RecodingScheme parse_recoding_scheme(const std::string& text,
                                            std::size_t expected_arity) {
  RecodingScheme scheme;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      std::size_t used = 0;
      scheme.levels.push_back(std::stoll(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw InputError("recoding scheme must be comma-separated integers, "
                       "got '" + text + "'");
    }
  }
  if (scheme.levels.size() != expected_arity) {
    throw InputError("recoding scheme has " +
                     std::to_string(scheme.levels.size()) +
                     " levels but the hierarchy has " +
                     std::to_string(expected_arity) + " attributes");
  }
  return scheme;
}

inline void check_scheme(const RecodingScheme& g, const HierarchySpec& h) {
  if (g.levels.size() != h.attributes.size()) {
    throw DomainError("recoding scheme arity " +
                      std::to_string(g.levels.size()) +
                      " does not match hierarchy arity " +
                      std::to_string(h.attributes.size()));
  }
  for (std::size_t i = 0; i < g.levels.size(); ++i) {
    if (g.levels[i] < 0 ||
        static_cast<std::size_t>(g.levels[i]) >=
            h.attributes[i].level_count()) {
      throw DomainError("attribute '" + h.attributes[i].name + "': level " +
                        std::to_string(g.levels[i]) + " out of range [0," +
                        std::to_string(h.attributes[i].level_count() - 1) +
                        "]");
    }
  }
}

inline Tuple recode(const RecodingScheme& g, const HierarchySpec& h,
                    const Tuple& t) {
  check_scheme(g, h);
  if (t.size() != h.attributes.size()) {
    throw InputError("tuple arity " + std::to_string(t.size()) +
                     " does not match hierarchy arity " +
                     std::to_string(h.attributes.size()));
  }
  Tuple out;
  out.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    out.push_back(generalize_value(
        h.attributes[i], static_cast<std::size_t>(g.levels[i]), t[i]));
  }
  return out;
}

inline void check_dataset_matches_hierarchy(const Dataset& d,
                                            const HierarchySpec& h) {
  if (d.schema.attributes.size() != h.attributes.size()) {
    throw InputError("dataset has " +
                     std::to_string(d.schema.attributes.size()) +
                     " attributes but the hierarchy has " +
                     std::to_string(h.attributes.size()));
  }
  for (std::size_t i = 0; i < h.attributes.size(); ++i) {
    if (d.schema.attributes[i].name != h.attributes[i].name) {
      throw InputError("attribute " + std::to_string(i + 1) +
                       " is '" + d.schema.attributes[i].name +
                       "' in the dataset but '" + h.attributes[i].name +
                       "' in the hierarchy");
    }
  }
}

// Bernoulli(beta) row sampling. Each row's coin depends only on
// (seed, row index), so the result is order-independent and reproducible.
inline Dataset sample(const Dataset& d, double beta, std::uint64_t seed) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("sampling rate beta must lie in (0,1), got " +
                      std::to_string(beta));
  }
  Dataset out;
  out.schema = d.schema;
  for (std::size_t i = 0; i < d.rows.size(); ++i) {
    if (draw_u01(seed, kStreamSample, i) < beta) {
      out.rows.push_back(d.rows[i]);
    }
  }
  return out;
}

// Published table: generalized rows, every surviving class of size >= k.
struct AnonymizedDataset {
  std::vector<std::string> columns;
  std::vector<Tuple> rows;
};

struct SuppressStats {
  std::int64_t published_rows = 0;
  std::int64_t published_classes = 0;
  std::int64_t suppressed_classes = 0;
};

inline AnonymizedDataset apply_suppress_with_stats(const RecodingScheme& g,
                                                   const HierarchySpec& h,
                                                   const Dataset& d,
                                                   std::int64_t k,
                                                   SuppressStats* stats) {
  if (k < 1) {
    throw DomainError("k must be at least 1, got " + std::to_string(k));
  }
  check_scheme(g, h);
  check_dataset_matches_hierarchy(d, h);
  std::map<Tuple, std::int64_t> class_counts;
  for (const Tuple& row : d.rows) {
    ++class_counts[recode(g, h, row)];
  }
  AnonymizedDataset out;
  for (const auto& attr : h.attributes) out.columns.push_back(attr.name);
  SuppressStats local;
  for (const auto& [generalized, count] : class_counts) {
    if (count >= k) {
      ++local.published_classes;
      local.published_rows += count;
      for (std::int64_t c = 0; c < count; ++c) out.rows.push_back(generalized);
    } else {
      ++local.suppressed_classes;
    }
  }
  // Map iteration is already sorted, so rows come out in lexicographic
  // order; keep that as the output contract.
  if (stats != nullptr) *stats = local;
  return out;
}

inline AnonymizedDataset apply_suppress(const RecodingScheme& g,
                                        const HierarchySpec& h,
                                        const Dataset& d, std::int64_t k) {
  return apply_suppress_with_stats(g, h, d, k, nullptr);
}

inline bool is_k_anonymous(const AnonymizedDataset& s, std::int64_t k) {
  std::map<Tuple, std::int64_t> counts;
  for (const Tuple& row : s.rows) ++counts[row];
  for (const auto& [tuple, count] : counts) {
    if (count < k) return false;
  }
  return true;
}

inline std::string anonymized_to_csv(const AnonymizedDataset& s) {
  CsvTable table;
  table.header = s.columns;
  table.rows = s.rows;
  // Defensive: the rows are produced sorted, keep the serialized order
  // deterministic regardless of how the struct was assembled.
  std::sort(table.rows.begin(), table.rows.end());
  return to_csv(table);
}

inline void write_dataset(const AnonymizedDataset& s, const std::string& path) {
  write_text_file(path, anonymized_to_csv(s));
}

// Default scheme quality: minus the number of generalized classes whose
// multiplicity falls in [1, k-1]. Adding or removing one row changes one
// class count by one, which flips at most one class across that band, so
// the sensitivity under the neighbor convention is 1.
inline double suppression_quality(const RecodingScheme& g,
                                  const HierarchySpec& h, const Dataset& d,
                                  std::int64_t k) {
  if (k < 1) {
    throw DomainError("k must be at least 1, got " + std::to_string(k));
  }
  check_scheme(g, h);
  check_dataset_matches_hierarchy(d, h);
  std::map<Tuple, std::int64_t> class_counts;
  for (const Tuple& row : d.rows) {
    ++class_counts[recode(g, h, row)];
  }
  std::int64_t doomed = 0;
  for (const auto& [generalized, count] : class_counts) {
    if (count >= 1 && count < k) ++doomed;
  }
  return -static_cast<double>(doomed);
}

// Exponential mechanism: index i wins with probability proportional to
// exp(epsilon1 * q_i / (2 * sensitivity)). Weights are shifted by the
// maximum quality before exponentiation; the distribution is unchanged and
// overflow is impossible.
inline std::size_t exp_mech_select_index(const std::vector<double>& qualities,
                                         double sensitivity, double epsilon1,
                                         std::uint64_t seed) {
  if (qualities.empty()) {
    throw DomainError("exponential mechanism needs at least one candidate");
  }
  if (!(sensitivity > 0.0)) {
    throw DomainError("sensitivity must be positive, got " +
                      std::to_string(sensitivity));
  }
  if (!(epsilon1 > 0.0)) {
    throw DomainError("epsilon1 must be positive, got " +
                      std::to_string(epsilon1));
  }
  double q_max = qualities.front();
  for (double q : qualities) {
    if (!std::isfinite(q)) {
      throw DomainError("qualities must be finite");
    }
    q_max = std::max(q_max, q);
  }
  std::vector<double> cumulative;
  cumulative.reserve(qualities.size());
  double total = 0.0;
  for (double q : qualities) {
    total += std::exp(epsilon1 * (q - q_max) / (2.0 * sensitivity));
    cumulative.push_back(total);
  }
  double u = draw_u01(seed, kStreamSelect, 0) * total;
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    if (u < cumulative[i]) return i;
  }
  return cumulative.size() - 1;
}

inline RecodingScheme exp_mech_select(
    const std::vector<RecodingScheme>& candidates,
    const std::vector<double>& qualities, double sensitivity, double epsilon1,
    std::uint64_t seed) {
  if (candidates.size() != qualities.size()) {
    throw DomainError("candidate and quality lists differ in length");
  }
  return candidates[exp_mech_select_index(qualities, sensitivity, epsilon1,
                                          seed)];
}

// One publication run plus everything needed to audit it.
struct PublishReport {
  std::int64_t k = 1;
  double beta = 0.0;
  double epsilon = 0.0;
  double epsilon1 = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::int64_t input_rows = 0;
  std::int64_t sampled_rows = 0;
  std::int64_t published_rows = 0;
  std::int64_t suppressed_classes = 0;
  RecodingScheme scheme;
  std::int64_t delta_argmax_n = 0;
  double gamma = 0.0;
  bool delta_scan_capped = false;
};

struct PublishResult {
  AnonymizedDataset data;
  PublishReport report;
};

// Fixed-scheme publication: sample at rate beta, recode with g, suppress
// below k. The attached guarantee prices the whole run at the caller's
// epsilon with delta = d(k, beta, epsilon).
inline PublishResult strongly_safe_publish(const Dataset& d,
                                           const RecodingScheme& g,
                                           const HierarchySpec& h,
                                           std::int64_t k, double beta,
                                           std::uint64_t seed,
                                           double epsilon) {
  check_scheme(g, h);
  check_dataset_matches_hierarchy(d, h);
  DeltaResult bound = delta_strongly_safe(k, beta, epsilon);
  PrivacyParams{beta, epsilon, bound.delta, k}.validate();
  PublishResult result;
  Dataset kept = sample(d, beta, seed);
  SuppressStats stats;
  result.data = apply_suppress_with_stats(g, h, kept, k, &stats);
  result.report = PublishReport{
      k,
      beta,
      epsilon,
      0.0,
      bound.delta,
      seed,
      static_cast<std::int64_t>(d.rows.size()),
      static_cast<std::int64_t>(kept.rows.size()),
      stats.published_rows,
      stats.suppressed_classes,
      g,
      bound.argmax_n,
      bound.gamma,
      bound.cap_hit};
  return result;
}

// Budgeted publication: the scheme is chosen by the exponential mechanism on
// the FULL dataset (before sampling) with budget epsilon1 and the default
// suppression quality; the remaining epsilon - epsilon1 prices the bound.
inline PublishResult esafe_publish(const Dataset& d, const HierarchySpec& h,
                                   const std::vector<RecodingScheme>& candidates,
                                   double epsilon1, std::int64_t k, double beta,
                                   std::uint64_t seed, double epsilon) {
  if (candidates.empty()) {
    throw DomainError("scheme selection needs at least one candidate");
  }
  check_dataset_matches_hierarchy(d, h);
  std::vector<double> qualities;
  qualities.reserve(candidates.size());
  for (const RecodingScheme& g : candidates) {
    qualities.push_back(suppression_quality(g, h, d, k));
  }
  RecodingScheme chosen =
      exp_mech_select(candidates, qualities, 1.0, epsilon1, seed);
  DeltaResult bound = delta_esafe(k, beta, epsilon, epsilon1);
  PublishResult result =
      strongly_safe_publish(d, chosen, h, k, beta, seed, epsilon - epsilon1);
  result.report.epsilon = epsilon;
  result.report.epsilon1 = epsilon1;
  result.report.delta = bound.delta;
  result.report.delta_argmax_n = bound.argmax_n;
  result.report.gamma = bound.gamma;
  result.report.delta_scan_capped = bound.cap_hit;
  return result;
}

}  // namespace skanon

#endif  // SKANON_PIPELINE_HPP_
