//
// Copyright 2026 The urnflow Authors
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
//

#ifndef URNFLOW_ERROR_HPP_
#define URNFLOW_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace urnflow {

// Argument outside the mathematical domain of a function (poles, divergent
// integrals, parameter ranges of a law).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed user input: distribution specs, configs, serialized files.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Observed statistics cannot be explained by the fitted model.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace urnflow

#endif  // URNFLOW_ERROR_HPP_
