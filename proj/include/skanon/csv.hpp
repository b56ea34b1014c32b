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
// Minimal CSV support: comma separators, first record is the header, quoted
// fields with doubled-quote escaping, LF or CRLF record ends, newlines
// allowed inside quoted fields.

#ifndef SKANON_CSV_HPP_
#define SKANON_CSV_HPP_

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "skanon/errors.hpp"

namespace skanon {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

namespace internal {

// Splits text into records of fields. Records are 0-indexed here; callers
// report 1-based row numbers.
inline std::vector<std::vector<std::string>> parse_csv_records(
    std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t i = 0;
  auto end_field = [&]() {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&]() {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };
  while (i < text.size()) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      ++i;
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw InputError("row " + std::to_string(records.size() + 1) +
                           ": unexpected quote inside unquoted field");
        }
        in_quotes = true;
        field_was_quoted = true;
        ++i;
        break;
      case ',':
        end_field();
        ++i;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') {
          end_record();
          i += 2;
        } else {
          throw InputError("row " + std::to_string(records.size() + 1) +
                           ": bare carriage return");
        }
        break;
      case '\n':
        end_record();
        ++i;
        break;
      default:
        if (field_was_quoted) {
          throw InputError("row " + std::to_string(records.size() + 1) +
                           ": content after closing quote");
        }
        field.push_back(c);
        ++i;
        break;
    }
  }
  if (in_quotes) {
    throw InputError("row " + std::to_string(records.size() + 1) +
                     ": unterminated quoted field");
  }
  // A trailing newline does not open an empty final record.
  if (!field.empty() || field_was_quoted || !record.empty()) {
    end_record();
  }
  return records;
}

}  // namespace internal

inline CsvTable parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records =
      internal::parse_csv_records(text);
  if (records.empty()) {
    throw InputError("empty input: missing header row");
  }
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw InputError("row " + std::to_string(r + 1) + ": has " +
                       std::to_string(records[r].size()) +
                       " fields, header has " +
                       std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

inline std::string csv_escape(const std::string& field) {
  bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string to_csv(const CsvTable& table) {
  std::ostringstream out;
  auto write_record = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out << ',';
      out << csv_escape(fields[i]);
    }
    out << '\n';
  };
  write_record(table.header);
  for (const auto& row : table.rows) write_record(row);
  return out.str();
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open file for reading: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw InputError("failed reading file: " + path);
  }
  return buffer.str();
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw InputError("cannot open file for writing: " + path);
  }
  out << content;
  out.flush();
  if (!out) {
    throw InputError("failed writing file: " + path);
  }
}

}  // namespace skanon

#endif  // SKANON_CSV_HPP_
