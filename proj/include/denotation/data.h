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


#ifndef DENOTATION_DATA_H_
#define DENOTATION_DATA_H_

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "denotation/kb.h"
#include "denotation/linker.h"

namespace denotation {

struct DialoguePair {
  std::string id;
  std::string question;
  std::string answer_hint;
  std::string gold_denotation;
  friend bool operator==(const DialoguePair &, const DialoguePair &) = default;
};

// `id<TAB>question<TAB>answer_hint<TAB>gold_entity_id` per line, in order.
// Throws DataError naming the line for a wrong field count or empty field.
std::vector<DialoguePair> LoadDataset(const std::filesystem::path &path);
void SaveDataset(const std::filesystem::path &path, const std::vector<DialoguePair> &pairs);

// A dialogue pair after linking, as persisted between pipeline stages.
struct LinkedRecord {
  std::string id;
  std::string gold;
  LinkedPair linked;
};

// JSON lines; see README for the record layout.
void SaveLinked(const std::filesystem::path &path, const std::vector<LinkedRecord> &records);
std::vector<LinkedRecord> LoadLinked(const std::filesystem::path &path);

std::vector<LinkedRecord> LinkDataset(const KnowledgeBase &kb,
                                      const std::vector<DialoguePair> &pairs,
                                      const LinkerConfig &config, LinkMethod method);

struct SyntheticSpec {
  // Number of person entities; the other entity kinds scale with it.
  size_t kb_size = 60;
  size_t dialogue_count = 351;
  double misspelling_rate = 0.0;
  double extra_entity_rate = 0.0;
  double enumeration_rate = 0.0;
  // Fraction of dialogues whose gold entity shares its name with a more
  // popular decoy that only relation context can rule out.
  double ambiguity_rate = 0.0;
  uint64_t seed = 0;
};

struct SyntheticCorpus {
  std::vector<Entity> lexicon;
  std::vector<TripleRecord> triples;
  std::vector<DialoguePair> train;
  std::vector<DialoguePair> val;
  std::vector<DialoguePair> test;
  // Pair ids whose gold entity has a same-name decoy.
  std::set<std::string> ambiguous;
  // Pair ids whose gold mention carries a single-character edit.
  std::set<std::string> misspelled;
  std::set<std::string> enumeration;
  std::set<std::string> with_extra;
};

// Deterministic for a given spec. Splits follow the 176/43/132 proportions.
// Throws std::invalid_argument for kb_size < 5 or a rate outside [0, 1].
SyntheticCorpus GenerateSynthetic(const SyntheticSpec &spec);

// Writes kb_triples.tsv, kb_lexicon.tsv, train.tsv, val.tsv, test.tsv and
// fixtures.tsv (per-pair noise flags) into `dir`, creating it if needed.
void WriteSynthetic(const SyntheticCorpus &corpus, const std::filesystem::path &dir);

}  // namespace denotation

#endif  // DENOTATION_DATA_H_
