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


#include "denotation/linker.h"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

#include "denotation/text.h"

namespace denotation {

Utterance Utterance::FromText(std::string_view raw) {
  Utterance u;
  u.raw = std::string(raw);
  u.tokens = SplitTokens(NormalizeText(raw));
  return u;
}

bool LinkedUtterance::Contains(std::string_view entity) const {
  return std::any_of(links.begin(), links.end(),
                     [entity](const Link &l) { return l.entity == entity; });
}

std::vector<EntityCandidate> GenerateCandidates(const KnowledgeBase &kb,
                                                const Utterance &utterance,
                                                const LinkerConfig &config) {
  std::vector<EntityCandidate> candidates;
  const size_t n = utterance.tokens.size();
  for (size_t start = 0; start < n; ++start) {
    for (size_t order = 1; order <= config.max_ngram_order && start + order <= n;
         ++order) {
      std::string surface = JoinTokens(utterance.tokens, start, start + order);
      std::vector<SurfaceMatch> matches =
          kb.LookupSurface(surface, config.max_normalized_distance);
      if (matches.empty()) continue;
      candidates.push_back(
          {Span{start, start + order}, std::move(surface), std::move(matches)});
    }
  }
  return candidates;
}

std::vector<EntityCandidate> ResolveOverlaps(std::vector<EntityCandidate> candidates) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const EntityCandidate &a, const EntityCandidate &b) {
                     if (a.span.start != b.span.start) return a.span.start < b.span.start;
                     return a.span.end < b.span.end;
                   });

  std::vector<bool> dominated(candidates.size(), false);
  for (size_t i = 0; i < candidates.size(); ++i) {
    for (size_t j = 0; j < candidates.size(); ++j) {
      if (candidates[j].span.length() > candidates[i].span.length() &&
          candidates[j].span.Overlaps(candidates[i].span)) {
        dominated[i] = true;
        break;
      }
    }
  }

  std::vector<EntityCandidate> kept;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (dominated[i]) continue;
    bool clash = std::any_of(kept.begin(), kept.end(), [&](const EntityCandidate &k) {
      return k.span.Overlaps(candidates[i].span);
    });
    if (!clash) kept.push_back(std::move(candidates[i]));
  }
  return kept;
}

namespace {

int64_t PairScore(const KnowledgeBase &kb, EntityIndex a, EntityIndex b) {
  return a == b ? 0 : static_cast<int64_t>(kb.RelationCount(a, b));
}

// Strict "ranks ahead of" order shared by every disambiguation method.
bool RanksAhead(const KnowledgeBase &kb, const Assignment &a, const Assignment &b) {
  if (a.objective != b.objective) return a.objective > b.objective;
  if (a.popularity != b.popularity) return a.popularity > b.popularity;
  if (a.distance != b.distance) return a.distance < b.distance;
  return std::lexicographical_compare(
      a.entities.begin(), a.entities.end(), b.entities.begin(), b.entities.end(),
      [&kb](EntityIndex x, EntityIndex y) { return kb.id(x) < kb.id(y); });
}

// Keeps the `limit` best assignments seen so far, sorted best first.
class TopAssignments {
 public:
  TopAssignments(const KnowledgeBase &kb, size_t limit) : kb_(kb), limit_(limit) {}

  void Offer(Assignment candidate) {
    if (best_.size() == limit_ && !RanksAhead(kb_, candidate, best_.back())) return;
    auto pos = std::upper_bound(best_.begin(), best_.end(), candidate,
                                [this](const Assignment &x, const Assignment &y) {
                                  return RanksAhead(kb_, x, y);
                                });
    best_.insert(pos, std::move(candidate));
    if (best_.size() > limit_) best_.pop_back();
  }

  std::vector<Assignment> Take() { return std::move(best_); }

 private:
  const KnowledgeBase &kb_;
  size_t limit_;
  std::vector<Assignment> best_;
};

// Precomputed relation scores for one disambiguation problem.
struct ScoreTables {
  // context_score[i][m]: relations of candidate i's m-th match with context.
  std::vector<std::vector<int64_t>> context_score;
  // pair_score[i][j][m_i * size_j + m_j] for i < j.
  std::vector<std::vector<std::vector<int64_t>>> pair_score;

  ScoreTables(const KnowledgeBase &kb, const std::vector<EntityCandidate> &candidates,
              const std::vector<EntityIndex> &context) {
    const size_t k = candidates.size();
    context_score.resize(k);
    pair_score.assign(k, std::vector<std::vector<int64_t>>(k));
    for (size_t i = 0; i < k; ++i) {
      for (const SurfaceMatch &m : candidates[i].matches) {
        int64_t s = 0;
        for (EntityIndex c : context) s += PairScore(kb, m.entity, c);
        context_score[i].push_back(s);
      }
      for (size_t j = i + 1; j < k; ++j) {
        std::vector<int64_t> &table = pair_score[i][j];
        table.reserve(candidates[i].matches.size() * candidates[j].matches.size());
        for (const SurfaceMatch &mi : candidates[i].matches) {
          for (const SurfaceMatch &mj : candidates[j].matches) {
            table.push_back(PairScore(kb, mi.entity, mj.entity));
          }
        }
      }
    }
  }

  // Score added by choosing match `m` for candidate `i` given the choices
  // already made for candidates [0, i).
  int64_t Gain(const std::vector<EntityCandidate> &candidates,
               const std::vector<size_t> &choice, size_t i, size_t m) const {
    int64_t gain = context_score[i][m];
    for (size_t j = 0; j < i; ++j) {
      gain += pair_score[j][i][choice[j] * candidates[i].matches.size() + m];
    }
    return gain;
  }
};

void Extend(const KnowledgeBase &kb, const EntityCandidate &candidate, size_t m,
            Assignment &a) {
  const SurfaceMatch &match = candidate.matches[m];
  a.entities.push_back(match.entity);
  a.popularity += static_cast<int64_t>(kb.Popularity(match.entity));
  a.distance += match.distance;
}

std::vector<EntityIndex> Deduplicated(const std::vector<EntityIndex> &context) {
  std::vector<EntityIndex> out;
  for (EntityIndex e : context) {
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  }
  return out;
}

}  // namespace

int64_t RelationObjective(const KnowledgeBase &kb,
                          const std::vector<EntityIndex> &assignment,
                          const std::vector<EntityIndex> &context) {
  int64_t total = 0;
  for (size_t i = 0; i < assignment.size(); ++i) {
    for (size_t j = i + 1; j < assignment.size(); ++j) {
      total += PairScore(kb, assignment[i], assignment[j]);
    }
    for (EntityIndex c : context) total += PairScore(kb, assignment[i], c);
  }
  return total;
}

std::vector<Assignment> DisambiguateRelationMax(
    const KnowledgeBase &kb, const std::vector<EntityCandidate> &candidates,
    const std::vector<EntityIndex> &context, size_t beam_width) {
  if (beam_width == 0) throw std::invalid_argument("beam width must be at least 1");
  if (candidates.empty()) return {Assignment{}};
  for (const EntityCandidate &c : candidates) {
    if (c.matches.empty()) throw std::invalid_argument("candidate without matches");
  }

  const std::vector<EntityIndex> ctx = Deduplicated(context);
  const ScoreTables tables(kb, candidates, ctx);
  const size_t k = candidates.size();

  uint64_t space = 1;
  for (const EntityCandidate &c : candidates) {
    space = space > kExhaustiveSearchLimit ? space : space * c.matches.size();
  }

  if (space <= kExhaustiveSearchLimit) {
    TopAssignments top(kb, beam_width);
    std::vector<size_t> choice(k, 0);
    while (true) {
      Assignment a;
      a.entities.reserve(k);
      for (size_t i = 0; i < k; ++i) {
        a.objective += tables.Gain(candidates, choice, i, choice[i]);
        Extend(kb, candidates[i], choice[i], a);
      }
      top.Offer(std::move(a));
      size_t i = k;
      while (i > 0) {
        --i;
        if (++choice[i] < candidates[i].matches.size()) break;
        choice[i] = 0;
        if (i == 0) return top.Take();
      }
    }
  }

  // Beam search over candidates in left-to-right order.
  struct Partial {
    Assignment assignment;
    std::vector<size_t> choice;
  };
  const size_t width = std::max(kSearchBeam, beam_width);
  std::vector<Partial> beam(1);
  for (size_t i = 0; i < k; ++i) {
    std::vector<Partial> next;
    next.reserve(beam.size() * candidates[i].matches.size());
    for (const Partial &p : beam) {
      for (size_t m = 0; m < candidates[i].matches.size(); ++m) {
        Partial q = p;
        q.assignment.objective += tables.Gain(candidates, p.choice, i, m);
        Extend(kb, candidates[i], m, q.assignment);
        q.choice.push_back(m);
        next.push_back(std::move(q));
      }
    }
    auto ahead = [&kb](const Partial &a, const Partial &b) {
      return RanksAhead(kb, a.assignment, b.assignment);
    };
    if (next.size() > width) {
      std::partial_sort(next.begin(), next.begin() + width, next.end(), ahead);
      next.resize(width);
    } else {
      std::sort(next.begin(), next.end(), ahead);
    }
    beam = std::move(next);
  }
  std::vector<Assignment> out;
  for (size_t i = 0; i < beam.size() && i < beam_width; ++i) {
    out.push_back(std::move(beam[i].assignment));
  }
  return out;
}

std::vector<Assignment> DisambiguatePopularity(
    const KnowledgeBase &kb, const std::vector<EntityCandidate> &candidates,
    size_t beam_width) {
  if (beam_width == 0) throw std::invalid_argument("beam width must be at least 1");
  if (candidates.empty()) return {Assignment{}};

  // Per-candidate match lists ranked by popularity, distance, id; truncated
  // to the n most popular since no n-best member can use a lower rank.
  std::vector<std::vector<SurfaceMatch>> ranked;
  for (const EntityCandidate &c : candidates) {
    if (c.matches.empty()) throw std::invalid_argument("candidate without matches");
    std::vector<SurfaceMatch> list = c.matches;
    std::sort(list.begin(), list.end(), [&kb](const SurfaceMatch &a, const SurfaceMatch &b) {
      size_t pa = kb.Popularity(a.entity), pb = kb.Popularity(b.entity);
      if (pa != pb) return pa > pb;
      if (a.distance != b.distance) return a.distance < b.distance;
      return kb.id(a.entity) < kb.id(b.entity);
    });
    if (list.size() > beam_width) list.resize(beam_width);
    ranked.push_back(std::move(list));
  }

  struct State {
    Assignment assignment;
    std::vector<size_t> ranks;
  };
  auto build = [&](std::vector<size_t> ranks) {
    State s;
    for (size_t i = 0; i < ranks.size(); ++i) {
      const SurfaceMatch &m = ranked[i][ranks[i]];
      s.assignment.entities.push_back(m.entity);
      s.assignment.popularity += static_cast<int64_t>(kb.Popularity(m.entity));
      s.assignment.distance += m.distance;
    }
    s.ranks = std::move(ranks);
    return s;
  };
  // Moving one candidate to its next-ranked match never improves the rank
  // of an assignment, so best-first expansion yields the exact n-best.
  auto behind = [&kb](const State &a, const State &b) {
    return RanksAhead(kb, b.assignment, a.assignment);
  };
  std::priority_queue<State, std::vector<State>, decltype(behind)> frontier(behind);
  std::set<std::vector<size_t>> seen;
  std::vector<size_t> origin(ranked.size(), 0);
  seen.insert(origin);
  frontier.push(build(origin));

  std::vector<Assignment> out;
  while (!frontier.empty() && out.size() < beam_width) {
    State s = frontier.top();
    frontier.pop();
    for (size_t i = 0; i < s.ranks.size(); ++i) {
      if (s.ranks[i] + 1 >= ranked[i].size()) continue;
      std::vector<size_t> next = s.ranks;
      ++next[i];
      if (seen.insert(next).second) frontier.push(build(std::move(next)));
    }
    out.push_back(std::move(s.assignment));
  }
  return out;
}

LinkedUtterance ToLinkedUtterance(const KnowledgeBase &kb,
                                  const Utterance &utterance,
                                  const std::vector<EntityCandidate> &candidates,
                                  const Assignment &assignment) {
  if (assignment.entities.size() != candidates.size()) {
    throw std::invalid_argument("assignment does not match the candidate list");
  }
  LinkedUtterance linked{utterance, {}};
  for (size_t i = 0; i < candidates.size(); ++i) {
    linked.links.push_back({candidates[i].span, kb.id(assignment.entities[i])});
  }
  std::sort(linked.links.begin(), linked.links.end(),
            [](const Link &a, const Link &b) { return a.span.start < b.span.start; });
  return linked;
}

LinkedPair LinkPair(const KnowledgeBase &kb, const Utterance &question,
                    const Utterance &answer, const LinkerConfig &config,
                    LinkMethod method) {
  if (config.beam_width == 0) throw std::invalid_argument("beam width must be at least 1");
  LinkedPair result;

  std::vector<EntityCandidate> q_candidates =
      ResolveOverlaps(GenerateCandidates(kb, question, config));
  Assignment q_best = method == LinkMethod::kRelationMax
                          ? DisambiguateRelationMax(kb, q_candidates, {}, 1).front()
                          : DisambiguatePopularity(kb, q_candidates, 1).front();
  result.question = ToLinkedUtterance(kb, question, q_candidates, q_best);

  std::vector<EntityCandidate> a_candidates =
      ResolveOverlaps(GenerateCandidates(kb, answer, config));
  std::vector<Assignment> ranked =
      method == LinkMethod::kRelationMax
          ? DisambiguateRelationMax(kb, a_candidates, q_best.entities, config.beam_width)
          : DisambiguatePopularity(kb, a_candidates, config.beam_width);
  for (const Assignment &a : ranked) {
    result.answers.push_back(ToLinkedUtterance(kb, answer, a_candidates, a));
  }
  return result;
}

LinkMethod ParseLinkMethod(std::string_view name) {
  if (name == "relation-max") return LinkMethod::kRelationMax;
  if (name == "popularity") return LinkMethod::kPopularity;
  throw std::invalid_argument("unknown linking method '" + std::string(name) + "'");
}

std::string_view LinkMethodName(LinkMethod method) {
  return method == LinkMethod::kRelationMax ? "relation-max" : "popularity";
}

}  // namespace denotation
