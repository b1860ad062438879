// Copyright 2026 The eqstat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqstat {

// Input that violates a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed CSV/JSON input. `line` is 1-based (header is line 1), 0 if
// the error is not tied to a line.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError(line == 0 ? what
                                  : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// An iterative solver hit its cap. Carries the best iterate found.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best,
                   double best_value)
      : std::runtime_error(what), best_(std::move(best)), best_value_(best_value) {}

  const std::vector<double>& best() const noexcept { return best_; }
  double best_value() const noexcept { return best_value_; }

 private:
  std::vector<double> best_;
  double best_value_;
};

}  // namespace eqstat
