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


#ifndef DENOTATION_LINKER_H_
#define DENOTATION_LINKER_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "denotation/kb.h"

namespace denotation {

struct Utterance {
  std::string raw;
  // Whitespace tokens of NormalizeText(raw).
  std::vector<std::string> tokens;

  static Utterance FromText(std::string_view raw);
};

// Half-open token range [start, end).
struct Span {
  size_t start = 0;
  size_t end = 0;

  size_t length() const { return end - start; }
  bool Overlaps(const Span &other) const {
    return start < other.end && other.start < end;
  }
  friend bool operator==(const Span &, const Span &) = default;
};

struct EntityCandidate {
  Span span;
  std::string surface;
  // Sorted by ascending distance, then descending popularity, then id.
  std::vector<SurfaceMatch> matches;
};

struct Link {
  Span span;
  std::string entity;
  friend bool operator==(const Link &, const Link &) = default;
};

struct LinkedUtterance {
  Utterance utterance;
  // Pairwise non-overlapping, ordered left to right.
  std::vector<Link> links;

  bool Contains(std::string_view entity) const;
};

struct LinkerConfig {
  size_t max_ngram_order = 4;
  double max_normalized_distance = kDefaultEditThreshold;
  // Number of ranked answer assignments to keep (the n in @n).
  size_t beam_width = 5;
};

enum class LinkMethod { kRelationMax, kPopularity };

// One complete choice of entity per candidate, in candidate order.
struct Assignment {
  std::vector<EntityIndex> entities;
  // Relation-maximization objective; always 0 for popularity ranking.
  int64_t objective = 0;
  int64_t popularity = 0;
  double distance = 0.0;
};

// Assignment-space size up to which relation maximization enumerates every
// assignment; larger spaces fall back to a left-to-right beam search.
inline constexpr uint64_t kExhaustiveSearchLimit = 100000;
inline constexpr size_t kSearchBeam = 100;

// Every n-gram of order 1..max_ngram_order with at least one surface match.
// Candidates may overlap.
std::vector<EntityCandidate> GenerateCandidates(const KnowledgeBase &kb,
                                                const Utterance &utterance,
                                                const LinkerConfig &config);

// Drops every candidate overlapped by a strictly longer one, then resolves
// the remaining equal-length conflicts greedily from left to right. The
// result is ordered by span start.
std::vector<EntityCandidate> ResolveOverlaps(std::vector<EntityCandidate> candidates);

// Sum of relation counts over all unordered pairs of the assignment plus
// every (assigned, context) pair. Pairs naming the same entity score 0.
int64_t RelationObjective(const KnowledgeBase &kb,
                          const std::vector<EntityIndex> &assignment,
                          const std::vector<EntityIndex> &context);

// Up to `beam_width` distinct assignments, best first, ranked by objective,
// then total popularity, then total match distance, then the entity ids.
// An empty candidate list yields one empty assignment.
std::vector<Assignment> DisambiguateRelationMax(
    const KnowledgeBase &kb, const std::vector<EntityCandidate> &candidates,
    const std::vector<EntityIndex> &context, size_t beam_width);

// Context-free ranking: up to `beam_width` assignments in order of total
// popularity, then total distance, then entity ids.
std::vector<Assignment> DisambiguatePopularity(
    const KnowledgeBase &kb, const std::vector<EntityCandidate> &candidates,
    size_t beam_width);

LinkedUtterance ToLinkedUtterance(const KnowledgeBase &kb,
                                  const Utterance &utterance,
                                  const std::vector<EntityCandidate> &candidates,
                                  const Assignment &assignment);

struct LinkedPair {
  LinkedUtterance question;
  // Ranked answer hypotheses; never empty.
  std::vector<LinkedUtterance> answers;
};

// Links the question with an empty context and keeps its best assignment,
// then links the answer using the question's entities as context.
LinkedPair LinkPair(const KnowledgeBase &kb, const Utterance &question,
                    const Utterance &answer, const LinkerConfig &config,
                    LinkMethod method);

LinkMethod ParseLinkMethod(std::string_view name);
std::string_view LinkMethodName(LinkMethod method);

}  // namespace denotation

#endif  // DENOTATION_LINKER_H_
