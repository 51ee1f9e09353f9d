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


#include "denotation/rules.h"

#include <algorithm>
#include <charconv>
#include <optional>
#include <stdexcept>
#include <unordered_set>

#include "denotation/errors.h"
#include "denotation/io.h"

namespace denotation {

NgramPriorTable::NgramPriorTable(size_t order, double alpha)
    : order_(order), alpha_(alpha) {
  if (order < 2) throw std::invalid_argument("prior n-gram order must be at least 2");
  if (!(alpha > 0.0)) throw std::invalid_argument("smoothing alpha must be positive");
}

void NgramPriorTable::Add(const std::string &pattern, bool is_denotation) {
  PatternCounts &c = counts_[pattern];
  (is_denotation ? c.denotation : c.extra) += 1;
}

void NgramPriorTable::Set(const std::string &pattern, PatternCounts counts) {
  if (counts.denotation < 0 || counts.extra < 0) {
    throw std::invalid_argument("pattern counts must be non-negative");
  }
  counts_[pattern] = counts;
}

double NgramPriorTable::Prior(const std::string &pattern) const {
  auto it = counts_.find(pattern);
  double den = 0.0, extra = 0.0;
  if (it != counts_.end()) {
    den = static_cast<double>(it->second.denotation);
    extra = static_cast<double>(it->second.extra);
  }
  return (den + alpha_) / (den + extra + 2.0 * alpha_);
}

void NgramPriorTable::Save(const std::filesystem::path &path) const {
  std::ofstream out = OpenOutput(path);
  for (const auto &[pattern, c] : counts_) {
    out << pattern << '\t' << c.denotation << '\t' << c.extra << '\n';
  }
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

namespace {

int64_t ParseCount(const std::string &field, const std::string &path, size_t line_no) {
  int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || value < 0) {
    throw DataError(LocatedMessage(path, line_no, "invalid count '" + field + "'"));
  }
  return value;
}

size_t TokenCount(const std::string &pattern) {
  return static_cast<size_t>(std::count(pattern.begin(), pattern.end(), ' ')) + 1;
}

}  // namespace

NgramPriorTable NgramPriorTable::Load(const std::filesystem::path &path, double alpha) {
  std::ifstream in = OpenInput(path);
  const std::string name = path.string();
  std::optional<NgramPriorTable> table;
  std::string line;
  size_t line_no = 0;
  while (ReadLine(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields = SplitTabs(line);
    if (fields.size() != 3) {
      throw DataError(LocatedMessage(name, line_no, "expected 3 tab-separated fields"));
    }
    const std::string &pattern = fields[0];
    const std::string suffix = std::string(" ") + kEntityPlaceholder;
    if (pattern.size() <= suffix.size() ||
        pattern.compare(pattern.size() - suffix.size(), suffix.size(), suffix) != 0) {
      throw DataError(LocatedMessage(name, line_no,
                                     "pattern must end with the entity placeholder"));
    }
    if (!table) table.emplace(TokenCount(pattern), alpha);
    if (TokenCount(pattern) != table->order()) {
      throw DataError(LocatedMessage(name, line_no, "inconsistent pattern order"));
    }
    table->Set(pattern, {ParseCount(fields[1], name, line_no),
                         ParseCount(fields[2], name, line_no)});
  }
  return table ? std::move(*table) : NgramPriorTable(kDefaultPriorOrder, alpha);
}

std::string ContextPattern(const LinkedUtterance &utterance, const Link &link,
                           size_t order) {
  std::string pattern;
  const size_t context = order - 1;
  for (size_t k = context; k > 0; --k) {
    if (link.span.start >= k) {
      pattern += utterance.utterance.tokens[link.span.start - k];
    } else {
      pattern += kStartPadding;
    }
    pattern.push_back(' ');
  }
  pattern += kEntityPlaceholder;
  return pattern;
}

namespace {

std::unordered_set<std::string> EntitySet(const LinkedUtterance &u) {
  std::unordered_set<std::string> ids;
  for (const Link &l : u.links) ids.insert(l.entity);
  return ids;
}

// Marks survivors of cancellation (or intersection) in answer order.
std::vector<ScoredLink> Survivors(const LinkedUtterance &question,
                                  const LinkedUtterance &answer, bool intersect) {
  const std::unordered_set<std::string> context = EntitySet(question);
  std::vector<ScoredLink> scored;
  for (const Link &l : answer.links) {
    bool in_question = context.count(l.entity) > 0;
    scored.push_back({l, intersect ? in_question : !in_question, 0.0});
  }
  return scored;
}

// First kept occurrence with the strictly highest score.
IdentificationResult PickBest(std::vector<ScoredLink> scored) {
  IdentificationResult result;
  const ScoredLink *best = nullptr;
  for (const ScoredLink &s : scored) {
    if (s.kept && (best == nullptr || s.score > best->score)) best = &s;
  }
  if (best != nullptr) result.chosen = best->link;
  result.scores = std::move(scored);
  return result;
}

IdentificationResult ScoreByPopularity(std::vector<ScoredLink> scored,
                                       const KnowledgeBase &kb) {
  for (ScoredLink &s : scored) {
    s.score = static_cast<double>(kb.Popularity(s.link.entity));
  }
  return PickBest(std::move(scored));
}

}  // namespace

IdentificationResult BasicCancellation(const LinkedUtterance &question,
                                       const LinkedUtterance &answer,
                                       const KnowledgeBase &kb) {
  return ScoreByPopularity(Survivors(question, answer, false), kb);
}

bool DetectEnumeration(const LinkedUtterance &question) {
  const std::vector<std::string> &tokens = question.utterance.tokens;
  for (size_t k = 0; k < tokens.size(); ++k) {
    if (tokens[k] != "or") continue;
    bool left = false, right = false, inside = false;
    for (const Link &l : question.links) {
      if (l.span.end <= k) left = true;
      else if (l.span.start > k) right = true;
      else inside = true;
    }
    if (left && right && !inside) return true;
  }
  return false;
}

IdentificationResult CancellationWithEnumeration(const LinkedUtterance &question,
                                                 const LinkedUtterance &answer,
                                                 const KnowledgeBase &kb) {
  return ScoreByPopularity(Survivors(question, answer, DetectEnumeration(question)),
                           kb);
}

IdentificationResult CancellationWithPriors(const LinkedUtterance &question,
                                            const LinkedUtterance &answer,
                                            const KnowledgeBase &kb,
                                            const NgramPriorTable &priors) {
  std::vector<ScoredLink> scored =
      Survivors(question, answer, DetectEnumeration(question));
  for (ScoredLink &s : scored) {
    double prior = priors.Prior(ContextPattern(answer, s.link, priors.order()));
    s.score = static_cast<double>(kb.Popularity(s.link.entity)) * prior;
  }
  return PickBest(std::move(scored));
}

PriorTrainingResult TrainNgramPriors(const std::vector<PriorTrainingExample> &examples,
                                     size_t order, double alpha) {
  if (order < 2) {
    throw std::invalid_argument("prior n-gram order must be at least 2");
  }
  PriorTrainingResult result{NgramPriorTable(order, alpha)};
  for (const PriorTrainingExample &ex : examples) {
    if (!ex.answer.Contains(ex.gold)) {
      ++result.skipped_pairs;
      continue;
    }
    ++result.used_pairs;
    for (const Link &l : ex.answer.links) {
      bool gold = l.entity == ex.gold;
      result.table.Add(ContextPattern(ex.answer, l, order), gold);
      if (gold) ++result.denotation_occurrences;
    }
  }
  return result;
}

}  // namespace denotation
