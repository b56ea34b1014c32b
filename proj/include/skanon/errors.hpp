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

#ifndef SKANON_ERRORS_HPP_
#define SKANON_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace skanon {

// Malformed input data: unreadable files, bad CSV, bad hierarchy JSON,
// values that do not fit the declared hierarchy. Maps to CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Parameters outside their mathematical domain, e.g. beta not in (0,1) or
// epsilon below the feasibility bound -ln(1-beta). Maps to CLI exit code 2.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace skanon

#endif  // SKANON_ERRORS_HPP_
