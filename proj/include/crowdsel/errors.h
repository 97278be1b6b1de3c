// Copyright 2026 The Authors.
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

#ifndef CROWDSEL_ERRORS_H_
#define CROWDSEL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace crowdsel {

// Malformed or out-of-range input. The CLI maps this to exit code 2.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration guard (subset count, vector length) was exceeded.
class SizeLimitExceeded : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// theta1 == theta2: the peak formulas divide by theta2 - theta1.
class DegenerateWindow : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A wall-time budget ran out before an exact search finished.
class Timeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace crowdsel

#endif  // CROWDSEL_ERRORS_H_
