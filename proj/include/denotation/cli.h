// Copyright 2026 The Denotation Authors.
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


#ifndef DENOTATION_CLI_H_
#define DENOTATION_CLI_H_

#include <iostream>

namespace denotation {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

// Runs one subcommand (generate, link, train, evaluate) and returns its exit
// code. Normal output goes to `out`, diagnostics to `err`.
int RunCli(int argc, const char *const *argv, std::ostream &out = std::cout,
           std::ostream &err = std::cerr);

}  // namespace denotation

#endif  // DENOTATION_CLI_H_
