// Copyright 2026 The Panoptic Fusion Kit Authors.
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

#ifndef PANOPTIC_ERRORS_H_
#define PANOPTIC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace panoptic {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent user input. The CLI maps this to exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

// Tensor dimensions that do not fit together.
class ShapeError : public InputError {
 public:
  using InputError::InputError;
};

// A file that cannot be parsed. Carries the offending path.
class FormatError : public InputError {
 public:
  FormatError(std::string path, const std::string& what)
      : InputError(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// An internal invariant that should hold for any valid input was violated.
// The CLI maps this to exit code 2.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace panoptic

#endif  // PANOPTIC_ERRORS_H_
