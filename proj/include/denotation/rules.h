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


#ifndef DENOTATION_RULES_H_
#define DENOTATION_RULES_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "denotation/kb.h"
#include "denotation/linker.h"

namespace denotation {

inline constexpr char kEntityPlaceholder[] = "#ENTITY";
// Stands in for context tokens before the start of the utterance.
inline constexpr char kStartPadding[] = "#START";
inline constexpr size_t kDefaultPriorOrder = 3;

struct PatternCounts {
  int64_t denotation = 0;
  int64_t extra = 0;
  friend bool operator==(const PatternCounts &, const PatternCounts &) = default;
};

// Counts of context n-grams seen around denotations and extra entities, with
// add-alpha smoothing: prior = (den + a) / (den + extra + 2a).
class NgramPriorTable {
 public:
  explicit NgramPriorTable(size_t order = kDefaultPriorOrder, double alpha = 1.0);

  size_t order() const { return order_; }
  double alpha() const { return alpha_; }
  const std::map<std::string, PatternCounts> &counts() const { return counts_; }

  void Add(const std::string &pattern, bool is_denotation);
  // Replaces the counts of one pattern; negative counts are rejected.
  void Set(const std::string &pattern, PatternCounts counts);
  double Prior(const std::string &pattern) const;

  // Tab-separated `pattern  denotation_count  extra_count` lines.
  void Save(const std::filesystem::path &path) const;
  static NgramPriorTable Load(const std::filesystem::path &path, double alpha = 1.0);

  friend bool operator==(const NgramPriorTable &, const NgramPriorTable &) = default;

 private:
  size_t order_;
  double alpha_;
  std::map<std::string, PatternCounts> counts_;
};

// The n-1 tokens before the link's span followed by the placeholder, padded
// with kStartPadding at the utterance start.
std::string ContextPattern(const LinkedUtterance &utterance, const Link &link,
                           size_t order);

struct ScoredLink {
  Link link;
  // False when the rule removed this occurrence from consideration.
  bool kept = false;
  double score = 0.0;
};

struct IdentificationResult {
  std::optional<Link> chosen;
  // One entry per answer link, in answer order.
  std::vector<ScoredLink> scores;
};

// Removes answer entities that also occur in the question and picks the most
// popular survivor (first occurrence wins ties).
IdentificationResult BasicCancellation(const LinkedUtterance &question,
                                       const LinkedUtterance &answer,
                                       const KnowledgeBase &kb);

// True iff a question token "or" lies outside every link, with at least one
// link entirely to its left and one entirely to its right.
bool DetectEnumeration(const LinkedUtterance &question);

// As BasicCancellation, except that an enumeration question keeps exactly
// the answer entities that the question mentions.
IdentificationResult CancellationWithEnumeration(const LinkedUtterance &question,
                                                 const LinkedUtterance &answer,
                                                 const KnowledgeBase &kb);

// Enumeration-aware cancellation scoring each surviving occurrence by
// popularity times the prior of its context pattern.
IdentificationResult CancellationWithPriors(const LinkedUtterance &question,
                                            const LinkedUtterance &answer,
                                            const KnowledgeBase &kb,
                                            const NgramPriorTable &priors);

struct PriorTrainingExample {
  LinkedUtterance question;
  LinkedUtterance answer;
  std::string gold;
};

struct PriorTrainingResult {
  NgramPriorTable table;
  size_t used_pairs = 0;
  // Pairs whose gold entity is not among the answer links.
  size_t skipped_pairs = 0;
  size_t denotation_occurrences = 0;
};

// Throws std::invalid_argument when order < 2.
PriorTrainingResult TrainNgramPriors(const std::vector<PriorTrainingExample> &examples,
                                     size_t order, double alpha = 1.0);

}  // namespace denotation

#endif  // DENOTATION_RULES_H_
