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


#ifndef DENOTATION_ERRORS_H_
#define DENOTATION_ERRORS_H_

#include <stdexcept>
#include <string>

namespace denotation {

// Malformed or inconsistent input data (files, datasets, checkpoints).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid invocation: bad flags or incompatible option combinations.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Builds "path:line: message" for errors tied to a position in a file.
inline std::string LocatedMessage(const std::string &path, size_t line,
                                  const std::string &message) {
  return path + ":" + std::to_string(line) + ": " + message;
}

}  // namespace denotation

#endif  // DENOTATION_ERRORS_H_
