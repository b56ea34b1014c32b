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
// Generalization hierarchies loaded from JSON. Level 0 is always the
// identity; the document lists levels 1..L per attribute. Categorical levels
// map each raw value to a label and must be nested (values mapped together
// stay together at coarser levels), ending in a single root label. Numeric
// levels are strictly increasing breakpoint ladders over a fixed outer
// range; each coarser ladder keeps a subset of the finer breakpoints and the
// top ladder is the single interval [lo, hi]. Interval labels render as
// "[lo,hi)"; the topmost interval of a ladder also admits its upper
// endpoint so the range boundary itself stays recodable.
//
// Document shape:
//   { "attributes": [
//       { "name": "age", "kind": "numeric",
//         "levels": [[0,30,60,120], [0,60,120], [0,120]] },
//       { "name": "diagnosis", "kind": "categorical",
//         "levels": [{"flu":"respiratory", ...}, {"flu":"*", ...}] } ] }

#ifndef SKANON_HIERARCHY_HPP_
#define SKANON_HIERARCHY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "skanon/csv.hpp"
#include "skanon/dataset.hpp"
#include "skanon/errors.hpp"

namespace skanon {

struct AttributeHierarchy {
  std::string name;
  AttributeKind kind = AttributeKind::kCategorical;
  // Used when kind == kCategorical: levels[l-1] maps raw value -> label.
  std::vector<std::map<std::string, std::string>> value_maps;
  // Used when kind == kNumeric: levels[l-1] is a breakpoint ladder.
  std::vector<std::vector<double>> ladders;

  std::size_t level_count() const {
    return 1 + (kind == AttributeKind::kCategorical ? value_maps.size()
                                                    : ladders.size());
  }
};

struct HierarchySpec {
  std::vector<AttributeHierarchy> attributes;
};

inline std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.15g", value);
  return buffer;
}

inline std::string format_interval(double lo, double hi) {
  return "[" + format_number(lo) + "," + format_number(hi) + ")";
}

namespace internal {

inline InputError hierarchy_error(const std::string& attribute,
                                  const std::string& message) {
  return InputError("hierarchy attribute '" + attribute + "': " + message);
}

inline void validate_categorical(const AttributeHierarchy& attr) {
  const auto& levels = attr.value_maps;
  std::set<std::string> domain;
  for (const auto& [value, label] : levels.front()) domain.insert(value);
  if (domain.empty()) {
    throw hierarchy_error(attr.name, "level 1 maps no values");
  }
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (levels[l].size() != domain.size()) {
      throw hierarchy_error(attr.name, "level " + std::to_string(l + 1) +
                                           " does not map the same value set "
                                           "as level 1");
    }
    for (const auto& [value, label] : levels[l]) {
      if (domain.count(value) == 0) {
        throw hierarchy_error(attr.name, "level " + std::to_string(l + 1) +
                                             " maps unknown value '" + value +
                                             "'");
      }
    }
  }
  // Nestedness: values sharing a label stay together at the next level.
  for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
    std::map<std::string, std::string> image;
    for (const auto& [value, label] : levels[l]) {
      const std::string& next_label = levels[l + 1].at(value);
      auto [it, inserted] = image.emplace(label, next_label);
      if (!inserted && it->second != next_label) {
        throw hierarchy_error(
            attr.name, "levels " + std::to_string(l + 1) + " and " +
                           std::to_string(l + 2) + " are not nested: class '" +
                           label + "' splits");
      }
    }
  }
  std::set<std::string> roots;
  for (const auto& [value, label] : levels.back()) roots.insert(label);
  if (roots.size() != 1) {
    throw hierarchy_error(attr.name,
                          "top level must map every value to one root label");
  }
}

inline void validate_numeric(const AttributeHierarchy& attr) {
  const auto& levels = attr.ladders;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const auto& breaks = levels[l];
    if (breaks.size() < 2) {
      throw hierarchy_error(attr.name, "level " + std::to_string(l + 1) +
                                           " needs at least two breakpoints");
    }
    for (std::size_t i = 0; i < breaks.size(); ++i) {
      if (!std::isfinite(breaks[i])) {
        throw hierarchy_error(attr.name, "non-finite breakpoint");
      }
      if (i > 0 && !(breaks[i - 1] < breaks[i])) {
        throw hierarchy_error(attr.name,
                              "breakpoints must be strictly increasing");
      }
    }
    if (breaks.front() != levels.front().front() ||
        breaks.back() != levels.front().back()) {
      throw hierarchy_error(attr.name,
                            "all levels must span the same outer range");
    }
  }
  for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
    const auto& fine = levels[l];
    for (double b : levels[l + 1]) {
      if (!std::binary_search(fine.begin(), fine.end(), b)) {
        throw hierarchy_error(
            attr.name, "level " + std::to_string(l + 2) +
                           " breakpoint " + format_number(b) +
                           " is not a breakpoint of level " +
                           std::to_string(l + 1) + " (levels must be nested)");
      }
    }
  }
  if (levels.back().size() != 2) {
    throw hierarchy_error(attr.name,
                          "top level must be the single full-range interval");
  }
}

}  // namespace internal

inline HierarchySpec parse_hierarchy(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("hierarchy JSON parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("attributes") ||
      !doc["attributes"].is_array() || doc["attributes"].empty()) {
    throw InputError(
        "hierarchy document must be an object with a nonempty 'attributes' "
        "array");
  }
  HierarchySpec spec;
  std::set<std::string> seen;
  for (const auto& entry : doc["attributes"]) {
    AttributeHierarchy attr;
    if (!entry.is_object() || !entry.contains("name") ||
        !entry["name"].is_string()) {
      throw InputError("hierarchy attribute entries need a string 'name'");
    }
    attr.name = entry["name"].get<std::string>();
    if (attr.name.empty()) {
      throw InputError("hierarchy attribute name must not be empty");
    }
    if (!seen.insert(attr.name).second) {
      throw internal::hierarchy_error(attr.name, "duplicate attribute");
    }
    std::string kind = entry.value("kind", "");
    if (kind == "categorical") {
      attr.kind = AttributeKind::kCategorical;
    } else if (kind == "numeric") {
      attr.kind = AttributeKind::kNumeric;
    } else {
      throw internal::hierarchy_error(
          attr.name, "kind must be \"categorical\" or \"numeric\"");
    }
    if (!entry.contains("levels") || !entry["levels"].is_array() ||
        entry["levels"].empty()) {
      throw internal::hierarchy_error(attr.name,
                                      "needs a nonempty 'levels' array");
    }
    for (const auto& level : entry["levels"]) {
      if (attr.kind == AttributeKind::kCategorical) {
        if (!level.is_object()) {
          throw internal::hierarchy_error(
              attr.name, "categorical levels must be value-to-label objects");
        }
        std::map<std::string, std::string> value_map;
        for (const auto& [value, label] : level.items()) {
          if (!label.is_string()) {
            throw internal::hierarchy_error(attr.name,
                                            "labels must be strings");
          }
          value_map[value] = label.get<std::string>();
        }
        attr.value_maps.push_back(std::move(value_map));
      } else {
        if (!level.is_array()) {
          throw internal::hierarchy_error(
              attr.name, "numeric levels must be breakpoint arrays");
        }
        std::vector<double> ladder;
        for (const auto& b : level) {
          if (!b.is_number()) {
            throw internal::hierarchy_error(attr.name,
                                            "breakpoints must be numbers");
          }
          ladder.push_back(b.get<double>());
        }
        attr.ladders.push_back(std::move(ladder));
      }
    }
    if (attr.kind == AttributeKind::kCategorical) {
      internal::validate_categorical(attr);
    } else {
      internal::validate_numeric(attr);
    }
    spec.attributes.push_back(std::move(attr));
  }
  return spec;
}

inline HierarchySpec load_hierarchy(const std::string& path) {
  return parse_hierarchy(read_text_file(path));
}

// Image of one raw value at the given level (0 = identity).
inline std::string generalize_value(const AttributeHierarchy& attr,
                                    std::size_t level,
                                    const std::string& raw) {
  if (level >= attr.level_count()) {
    throw DomainError("attribute '" + attr.name + "': level " +
                      std::to_string(level) + " out of range [0," +
                      std::to_string(attr.level_count() - 1) + "]");
  }
  if (level == 0) return raw;
  if (attr.kind == AttributeKind::kCategorical) {
    const auto& value_map = attr.value_maps[level - 1];
    auto it = value_map.find(raw);
    if (it == value_map.end()) {
      throw InputError("attribute '" + attr.name + "': value '" + raw +
                       "' not present in the hierarchy");
    }
    return it->second;
  }
  double value = 0.0;
  if (!parse_number(raw, &value)) {
    throw InputError("attribute '" + attr.name + "': value '" + raw +
                     "' is not numeric");
  }
  const std::vector<double>& breaks = attr.ladders[level - 1];
  if (value < breaks.front() || value > breaks.back()) {
    throw InputError("attribute '" + attr.name + "': value '" + raw +
                     "' outside the ladder range [" +
                     format_number(breaks.front()) + "," +
                     format_number(breaks.back()) + "]");
  }
  std::size_t idx;
  if (value == breaks.back()) {
    idx = breaks.size() - 2;
  } else {
    idx = static_cast<std::size_t>(
              std::upper_bound(breaks.begin(), breaks.end(), value) -
              breaks.begin()) -
          1;
  }
  return format_interval(breaks[idx], breaks[idx + 1]);
}

}  // namespace skanon

#endif  // SKANON_HIERARCHY_HPP_
