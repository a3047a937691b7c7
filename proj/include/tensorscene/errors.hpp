// Copyright 2026 The TensorScene Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TENSORSCENE_ERRORS_HPP_
#define TENSORSCENE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace tensorscene {

// Base for every error the library raises. Each subclass maps onto one CLI
// exit code (see ExitCode in tools/).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched matrix/tensor shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid parameters or an infeasible configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input data (too-short audio, coincident positions, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf during training or a diverging loss.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// File system and container format failures.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tensorscene

#endif  // TENSORSCENE_ERRORS_HPP_
