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

// Command-line front end. Dispatch() is the whole tool; main() only forwards
// the real streams, which keeps every path testable in-process.
//
// Exit codes: 0 success, 2 bad arguments or input, 3 failure while running.

#ifndef CROWDSEL_CLI_H_
#define CROWDSEL_CLI_H_

#include <iosfwd>

namespace crowdsel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

// Results go to `out` (or the --out file); diagnostics only to `err`.
int Dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace crowdsel::cli

#endif  // CROWDSEL_CLI_H_
