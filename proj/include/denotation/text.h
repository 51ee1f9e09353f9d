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


#ifndef DENOTATION_TEXT_H_
#define DENOTATION_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace denotation {

// Case-folds ASCII letters, deletes apostrophes and periods, turns every
// other ASCII punctuation character into a space, and collapses runs of
// whitespace into single spaces with no leading or trailing space.
// Non-ASCII bytes pass through unchanged.
std::string NormalizeText(std::string_view text);

// Splits already normalized text on single spaces.
std::vector<std::string> SplitTokens(std::string_view normalized);

std::string JoinTokens(const std::vector<std::string> &tokens, size_t begin,
                       size_t end);

// Decodes UTF-8 into code points; invalid sequences become U+FFFD.
std::u32string DecodeUtf8(std::string_view text);

// Levenshtein distance with unit costs. When the true distance exceeds
// `max_distance` the result is some value greater than `max_distance`.
size_t EditDistance(std::u32string_view a, std::u32string_view b,
                    size_t max_distance = static_cast<size_t>(-1));

// Edit distance of the normalized forms divided by the longer normalized
// length in code points. Two empty strings have distance 0.
double NormalizedEditDistance(std::string_view a, std::string_view b);

}  // namespace denotation

#endif  // DENOTATION_TEXT_H_
