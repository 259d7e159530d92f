// tdoa/errors.h

// Copyright 2026 The tdoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef TDOA_ERRORS_H_
#define TDOA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace tdoa {

// Caller violated a documented precondition (bad sizes, indices, arguments).
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string &what) : std::invalid_argument(what) {}
};

// A configuration or scene description cannot be realized.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

// Broken internal invariant; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string &what) : std::logic_error(what) {}
};

}  // namespace tdoa

#endif  // TDOA_ERRORS_H_
