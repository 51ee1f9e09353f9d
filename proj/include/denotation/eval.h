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


#ifndef DENOTATION_EVAL_H_
#define DENOTATION_EVAL_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace denotation {

// What the metrics need to know about one dialogue pair.
struct PairOutcome {
  std::string id;
  std::string gold;
  // Entity ids of each ranked answer hypothesis, best first.
  std::vector<std::vector<std::string>> nbest;
  // Identifier output on the best hypothesis; absent when nothing was chosen.
  std::optional<std::string> chosen;
};

// Fraction of pairs whose gold entity is linked in one of the first n
// answer hypotheses. Throws std::invalid_argument for n < 1 or no pairs.
double LinkingAccuracy(const std::vector<PairOutcome> &pairs, size_t n);

struct Ratio {
  size_t numerator = 0;
  size_t denominator = 0;
  // Set when the denominator is zero; value() is then 0.
  bool undefined = false;
  double value() const {
    return denominator == 0 ? 0.0
                            : static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};

// Correct choices among pairs correctly linked at @1.
Ratio IdentificationAccuracy(const std::vector<PairOutcome> &pairs);
// Correct choices among all pairs. Throws std::invalid_argument when empty.
double ExtractionAccuracy(const std::vector<PairOutcome> &pairs);

// Normal-approximation 95% half-width 1.96 * sqrt(p (1 - p) / n).
double BinomialCiHalfwidth(double p, size_t n);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};
// Exact two-sided 95% Clopper-Pearson interval for k successes in n trials.
Interval ClopperPearson(size_t successes, size_t trials, double confidence = 0.95);

struct EvalReport {
  std::string linker;
  std::string identifier;
  size_t total_pairs = 0;
  // Keyed by n.
  std::map<size_t, size_t> correctly_linked;
  size_t correctly_identified = 0;
  bool exact_ci = false;

  double linking_accuracy(size_t n) const;
  Ratio identification() const;
  double identification_accuracy() const { return identification().value(); }
  double extraction_accuracy() const;

  // Holds exactly because both sides are computed from the same counts.
  bool DecompositionHolds() const;

  // `key: value` lines; ParseText restores an equal report.
  std::string ToText() const;
  static EvalReport ParseText(const std::string &text);
  // Layout of the linking table: linker, n, accuracy, ci.
  std::string LinkingTable() const;
  // Layout of the identification table: identifier, accuracy d.i., accuracy d.e.
  std::string IdentificationTable() const;

  friend bool operator==(const EvalReport &, const EvalReport &) = default;
};

EvalReport BuildReport(const std::vector<PairOutcome> &pairs, const std::vector<size_t> &ns,
                       std::string linker, std::string identifier, bool exact_ci = false);

// One JSON object per line: {"id", "gold", "nbest": [[ids]], "chosen": id|null}.
void SavePredictions(const std::filesystem::path &path, const std::vector<PairOutcome> &pairs);
std::vector<PairOutcome> LoadPredictions(const std::filesystem::path &path);

}  // namespace denotation

#endif  // DENOTATION_EVAL_H_
