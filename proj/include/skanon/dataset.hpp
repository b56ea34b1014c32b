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
// Tabular microdata with multiset row semantics. Attribute kinds are
// inferred on load: a column is numeric when it has at least one row and
// every value parses as a finite number; otherwise it is categorical.

#ifndef SKANON_DATASET_HPP_
#define SKANON_DATASET_HPP_

#include <charconv>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "skanon/csv.hpp"
#include "skanon/errors.hpp"

namespace skanon {

enum class AttributeKind { kCategorical, kNumeric };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::kCategorical;
};

struct Schema {
  std::vector<Attribute> attributes;
};

// One record; values stay in their original text form, numeric columns are
// parsed on demand.
using Tuple = std::vector<std::string>;

struct Dataset {
  Schema schema;
  std::vector<Tuple> rows;
};

// Strict full-string parse of a finite number. No leading sign '+', no
// surrounding whitespace, and the textual forms of infinities and NaN are
// rejected.
inline bool parse_number(std::string_view text, double* out) {
  if (text.empty()) return false;
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return false;
  if (out != nullptr) *out = value;
  return true;
}

inline Dataset dataset_from_csv(std::string_view csv_text) {
  CsvTable table = parse_csv(csv_text);
  Dataset dataset;
  std::set<std::string> seen;
  for (const std::string& name : table.header) {
    if (name.empty()) {
      throw InputError("header contains an empty attribute name");
    }
    if (!seen.insert(name).second) {
      throw InputError("duplicate attribute name in header: " + name);
    }
    dataset.schema.attributes.push_back({name, AttributeKind::kCategorical});
  }
  dataset.rows = std::move(table.rows);
  for (std::size_t col = 0; col < dataset.schema.attributes.size(); ++col) {
    bool numeric = !dataset.rows.empty();
    for (const Tuple& row : dataset.rows) {
      if (!parse_number(row[col], nullptr)) {
        numeric = false;
        break;
      }
    }
    if (numeric) {
      dataset.schema.attributes[col].kind = AttributeKind::kNumeric;
    }
  }
  return dataset;
}

inline Dataset load_dataset(const std::string& path) {
  return dataset_from_csv(read_text_file(path));
}

}  // namespace skanon

#endif  // SKANON_DATASET_HPP_
