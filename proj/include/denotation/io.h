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


#ifndef DENOTATION_IO_H_
#define DENOTATION_IO_H_

#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace denotation {

// Opens a file for reading; throws DataError naming the path on failure.
std::ifstream OpenInput(const std::filesystem::path &path);
// Opens (truncates) a file for writing in binary mode so output bytes do not
// depend on the platform's newline convention.
std::ofstream OpenOutput(const std::filesystem::path &path);

// getline that also drops a trailing '\r'.
bool ReadLine(std::istream &in, std::string &line);

std::vector<std::string> SplitTabs(std::string_view line);

std::string ReadFile(const std::filesystem::path &path);

}  // namespace denotation

#endif  // DENOTATION_IO_H_
