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

#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "denotation/errors.h"
#include "test_util.h"

namespace denotation {
namespace {

struct Mention {
  size_t start;
  size_t end;
  std::string entity;
};

LinkedUtterance Linked(const std::string &text, const std::vector<Mention> &mentions) {
  LinkedUtterance u{Utterance::FromText(text), {}};
  for (const Mention &m : mentions) u.links.push_back({{m.start, m.end}, m.entity});
  return u;
}

// Each entity gets exactly the requested popularity via edges to fresh leaves.
KnowledgeBase KbWithPopularity(const std::vector<std::pair<std::string, int>> &pops) {
  std::vector<TripleRecord> triples;
  int leaf = 0;
  std::vector<Entity> lexicon;
  for (const auto &[id, n] : pops) {
    lexicon.push_back({id, id, {}});
    for (int i = 0; i < n; ++i) triples.push_back({id, "r", "leaf" + std::to_string(leaf++)});
  }
  return KnowledgeBase::Build(lexicon, triples);
}

TEST(NgramPriorTableTest, SmoothedPrior) {
  NgramPriorTable table(3);
  EXPECT_DOUBLE_EQ(table.Prior("born in #ENTITY"), 0.5);
  table.Add("born in #ENTITY", true);
  table.Add("born in #ENTITY", true);
  table.Add("was a #ENTITY", false);
  EXPECT_DOUBLE_EQ(table.Prior("born in #ENTITY"), 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(table.Prior("was a #ENTITY"), 1.0 / 3.0);
  EXPECT_THROW(NgramPriorTable(1), std::invalid_argument);
  EXPECT_THROW(NgramPriorTable(3, 0.0), std::invalid_argument);
  EXPECT_THROW(table.Set("x y #ENTITY", {-1, 0}), std::invalid_argument);
}

TEST(NgramPriorTableTest, SaveLoadRoundTrip) {
  testing::TempDir dir;
  NgramPriorTable table(3);
  table.Add("born in #ENTITY", true);
  table.Add("#START #START #ENTITY", false);
  table.Save(dir / "p.tsv");
  EXPECT_EQ(NgramPriorTable::Load(dir / "p.tsv"), table);
}

TEST(NgramPriorTableTest, LoadRejectsMalformed) {
  testing::TempDir dir;
  testing::WriteText(dir / "a.tsv", "born in #ENTITY\t1\n");
  EXPECT_THROW(NgramPriorTable::Load(dir / "a.tsv"), DataError);
  testing::WriteText(dir / "b.tsv", "born in #ENTITY\t1\tx\n");
  EXPECT_THROW(NgramPriorTable::Load(dir / "b.tsv"), DataError);
  testing::WriteText(dir / "c.tsv", "born in #ENTITY\t1\t0\nin #ENTITY\t1\t0\n");
  EXPECT_THROW(NgramPriorTable::Load(dir / "c.tsv"), DataError);
  testing::WriteText(dir / "d.tsv", "born in here\t1\t0\n");
  EXPECT_THROW(NgramPriorTable::Load(dir / "d.tsv"), DataError);
}

TEST(ContextPatternTest, PadsAtStart) {
  LinkedUtterance u = Linked("Hawaii is where he was born in Hawaii", {{0, 1, "h"}, {7, 8, "h"}});
  EXPECT_EQ(ContextPattern(u, u.links[0], 3), "#START #START #ENTITY");
  EXPECT_EQ(ContextPattern(u, u.links[1], 3), "born in #ENTITY");
  EXPECT_EQ(ContextPattern(u, u.links[1], 2), "in #ENTITY");
}

TEST(BasicCancellationTest, CancelsQuestionEntitiesAndPicksPopular) {
  KnowledgeBase kb = KbWithPopularity({{"australian", 40}, {"composer", 30}, {"calcraft", 50},
                                       {"year", 5}, {"sydney", 20}, {"nsw", 25},
                                       {"australia", 60}});
  LinkedUtterance q = Linked("What is Sharon Calcraft's nationality?", {{2, 4, "calcraft"}});
  LinkedUtterance a = Linked(
      "Australian Composer Sharon Calcraft was born in 1955 in Sydney New South Wales Australia",
      {{0, 1, "australian"}, {1, 2, "composer"}, {2, 4, "calcraft"}, {7, 8, "year"},
       {9, 10, "sydney"}, {10, 13, "nsw"}, {13, 14, "australia"}});
  IdentificationResult r = BasicCancellation(q, a, kb);
  ASSERT_TRUE(r.chosen);
  EXPECT_EQ(r.chosen->entity, "australia");
  ASSERT_EQ(r.scores.size(), 7u);
  EXPECT_FALSE(r.scores[2].kept);
}

TEST(BasicCancellationTest, AbsentWhenEverythingCancelled) {
  KnowledgeBase kb = KbWithPopularity({{"a", 1}, {"b", 2}});
  LinkedUtterance q = Linked("a and b", {{0, 1, "a"}, {2, 3, "b"}});
  LinkedUtterance a = Linked("b", {{0, 1, "b"}});
  EXPECT_FALSE(BasicCancellation(q, a, kb).chosen);
}

TEST(BasicCancellationTest, TwoSurvivorsByPopularity) {
  KnowledgeBase kb = KbWithPopularity({{"seven", 7}, {"three", 3}});
  LinkedUtterance q = Linked("question", {});
  LinkedUtterance a = Linked("three seven", {{0, 1, "three"}, {1, 2, "seven"}});
  EXPECT_EQ(BasicCancellation(q, a, kb).chosen->entity, "seven");
}

TEST(DetectEnumerationTest, RequiresFlankingEntities) {
  EXPECT_TRUE(DetectEnumeration(Linked("Is Stana Katic male or female?",
                                       {{1, 3, "katic"}, {3, 4, "male"}, {5, 6, "female"}})));
  EXPECT_FALSE(DetectEnumeration(Linked("Where was Barack Obama born?", {{2, 4, "obama"}})));
  EXPECT_FALSE(DetectEnumeration(Linked("To be or not to be who wrote it?", {})));
  EXPECT_FALSE(DetectEnumeration(Linked("Is Katic or not?", {{1, 2, "katic"}})));
  // "or" inside a linked span does not count.
  EXPECT_FALSE(DetectEnumeration(Linked("Was it War or Peace?", {{2, 5, "book"}})));
}

TEST(EnumerationTest, IntersectsWithQuestion) {
  KnowledgeBase kb =
      KbWithPopularity({{"katic", 10}, {"male", 500}, {"female", 400}, {"other", 900}});
  LinkedUtterance q = Linked("Is Stana Katic male or female?",
                             {{1, 3, "katic"}, {3, 4, "male"}, {5, 6, "female"}});
  LinkedUtterance a = Linked("She is female", {{2, 3, "female"}});
  EXPECT_FALSE(BasicCancellation(q, a, kb).chosen);
  EXPECT_EQ(CancellationWithEnumeration(q, a, kb).chosen->entity, "female");

  LinkedUtterance unlisted = Linked("Neither really other", {{2, 3, "other"}});
  EXPECT_FALSE(CancellationWithEnumeration(q, unlisted, kb).chosen);
}

TEST(EnumerationTest, FallsBackToBasicWithoutEnumeration) {
  KnowledgeBase kb = KbWithPopularity({{"obama", 100}, {"president", 80}, {"hawaii", 30}});
  LinkedUtterance q = Linked("Where was Barack Obama born?", {{2, 4, "obama"}});
  LinkedUtterance a = Linked("Barack Obama was a USA president born in Hawaii",
                             {{0, 2, "obama"}, {4, 6, "president"}, {8, 9, "hawaii"}});
  EXPECT_EQ(CancellationWithEnumeration(q, a, kb).chosen, BasicCancellation(q, a, kb).chosen);
}

TEST(TrainNgramPriorsTest, CountsObamaExample) {
  LinkedUtterance q = Linked("Where was Barack Obama born?", {{2, 4, "obama"}});
  LinkedUtterance a = Linked("Barack Obama was a USA president born in Hawaii",
                             {{0, 2, "obama"}, {4, 6, "president"}, {8, 9, "hawaii"}});
  PriorTrainingResult r = TrainNgramPriors({{q, a, "hawaii"}}, 3);
  EXPECT_EQ(r.used_pairs, 1u);
  EXPECT_EQ(r.denotation_occurrences, 1u);
  const auto &counts = r.table.counts();
  EXPECT_EQ(counts.at("born in #ENTITY"), (PatternCounts{1, 0}));
  EXPECT_EQ(counts.at("was a #ENTITY"), (PatternCounts{0, 1}));
  EXPECT_THROW(TrainNgramPriors({}, 1), std::invalid_argument);
}

TEST(TrainNgramPriorsTest, EmptyTrainingSetGivesHalfPriors) {
  PriorTrainingResult r = TrainNgramPriors({}, 3);
  EXPECT_TRUE(r.table.counts().empty());
  EXPECT_DOUBLE_EQ(r.table.Prior("anything here #ENTITY"), 0.5);
}

TEST(TrainNgramPriorsTest, SkipsPairsWithoutGold) {
  LinkedUtterance q = Linked("q", {});
  LinkedUtterance a = Linked("x y", {{0, 1, "x"}});
  PriorTrainingResult r = TrainNgramPriors({{q, a, "gold"}, {q, a, "x"}}, 3);
  EXPECT_EQ(r.used_pairs, 1u);
  EXPECT_EQ(r.skipped_pairs, 1u);
}

TEST(PriorsTest, ContextOverridesPopularity) {
  KnowledgeBase kb = KbWithPopularity({{"obama", 100}, {"president", 80}, {"hawaii", 30}});
  LinkedUtterance q = Linked("Where was Barack Obama born?", {{2, 4, "obama"}});
  LinkedUtterance a = Linked("Barack Obama was a USA president born in Hawaii",
                             {{0, 2, "obama"}, {4, 6, "president"}, {8, 9, "hawaii"}});
  NgramPriorTable table(3);
  table.Set("born in #ENTITY", {20, 0});
  table.Set("was a #ENTITY", {0, 20});
  EXPECT_EQ(CancellationWithEnumeration(q, a, kb).chosen->entity, "president");
  EXPECT_EQ(CancellationWithPriors(q, a, kb, table).chosen->entity, "hawaii");
}

TEST(PriorsTest, ArithmeticOfScore) {
  // popularity 10 with prior 0.1 loses to popularity 2 with prior 0.9.
  KnowledgeBase kb = KbWithPopularity({{"a", 10}, {"b", 2}});
  LinkedUtterance q = Linked("question", {});
  LinkedUtterance a = Linked("pa a pb b", {{1, 2, "a"}, {3, 4, "b"}});
  NgramPriorTable table(2, 1e-9);
  table.Set("pa #ENTITY", {1, 9});
  table.Set("pb #ENTITY", {9, 1});
  IdentificationResult r = CancellationWithPriors(q, a, kb, table);
  EXPECT_EQ(r.chosen->entity, "b");
  EXPECT_NEAR(r.scores[0].score, 1.0, 1e-6);
  EXPECT_NEAR(r.scores[1].score, 1.8, 1e-6);
}

// Random linked pairs over a small entity pool.
struct RandomPair {
  LinkedUtterance question;
  LinkedUtterance answer;
};

RandomPair MakePair(std::mt19937_64 &rng) {
  const std::vector<std::string> words = {"born", "in", "was", "a", "from", "or", "the", "of"};
  auto make = [&](size_t length, size_t entities) {
    std::string text;
    for (size_t i = 0; i < length; ++i) text += words[rng() % words.size()] + " ";
    LinkedUtterance u{Utterance::FromText(text), {}};
    std::vector<size_t> positions(length);
    for (size_t i = 0; i < length; ++i) positions[i] = i;
    for (size_t i = length - 1; i > 0; --i) std::swap(positions[i], positions[rng() % (i + 1)]);
    positions.resize(std::min(entities, length));
    std::sort(positions.begin(), positions.end());
    for (size_t p : positions) u.links.push_back({{p, p + 1}, "e" + std::to_string(rng() % 6)});
    return u;
  };
  RandomPair p;
  p.question = make(2 + rng() % 6, rng() % 4);
  p.answer = make(1 + rng() % 8, rng() % 5);
  return p;
}

KnowledgeBase RandomPopularityKb(std::mt19937_64 &rng) {
  std::vector<std::pair<std::string, int>> pops;
  for (int i = 0; i < 6; ++i) pops.push_back({"e" + std::to_string(i), 1 + int(rng() % 20)});
  return KbWithPopularity(pops);
}

TEST(RulesPropertyTest, BasicNeverReturnsQuestionEntity) {
  std::mt19937_64 rng(1);
  KnowledgeBase kb = RandomPopularityKb(rng);
  for (int trial = 0; trial < 1000; ++trial) {
    RandomPair p = MakePair(rng);
    IdentificationResult r = BasicCancellation(p.question, p.answer, kb);
    if (r.chosen) {
      ASSERT_FALSE(p.question.Contains(r.chosen->entity));
    }
  }
}

TEST(RulesPropertyTest, UniformPriorsPreserveArgmax) {
  std::mt19937_64 rng(2);
  KnowledgeBase kb = RandomPopularityKb(rng);
  for (int trial = 0; trial < 1000; ++trial) {
    RandomPair p = MakePair(rng);
    NgramPriorTable table(3);
    const int64_t d = rng() % 5, e = rng() % 5;
    for (const Link &l : p.answer.links) table.Set(ContextPattern(p.answer, l, 3), {d, e});
    IdentificationResult with = CancellationWithPriors(p.question, p.answer, kb, table);
    IdentificationResult without = CancellationWithEnumeration(p.question, p.answer, kb);
    ASSERT_EQ(with.chosen, without.chosen);
  }
}

TEST(RulesPropertyTest, RaisingOwnPatternKeepsFirstPlace) {
  std::mt19937_64 rng(3);
  KnowledgeBase kb = RandomPopularityKb(rng);
  for (int trial = 0; trial < 1000; ++trial) {
    RandomPair p = MakePair(rng);
    NgramPriorTable table(3);
    for (const Link &l : p.answer.links) {
      table.Set(ContextPattern(p.answer, l, 3), {int64_t(rng() % 5), int64_t(rng() % 5)});
    }
    IdentificationResult before = CancellationWithPriors(p.question, p.answer, kb, table);
    if (!before.chosen) continue;
    const std::string pattern = ContextPattern(p.answer, *before.chosen, 3);
    table.Add(pattern, true);
    IdentificationResult after = CancellationWithPriors(p.question, p.answer, kb, table);
    ASSERT_TRUE(after.chosen);
    ASSERT_EQ(after.chosen->entity, before.chosen->entity);
  }
}

TEST(RulesPropertyTest, TrainingConservesDenotationCounts) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PriorTrainingExample> examples;
    size_t gold_occurrences = 0;
    for (int k = 0; k < 5; ++k) {
      RandomPair p = MakePair(rng);
      std::string gold = "e" + std::to_string(rng() % 6);
      if (p.answer.Contains(gold)) {
        for (const Link &l : p.answer.links) gold_occurrences += l.entity == gold;
      }
      examples.push_back({p.question, p.answer, gold});
    }
    PriorTrainingResult r = TrainNgramPriors(examples, 3);
    int64_t total = 0;
    for (const auto &[pattern, c] : r.table.counts()) total += c.denotation;
    ASSERT_EQ(static_cast<size_t>(total), gold_occurrences);
    ASSERT_EQ(r.denotation_occurrences, gold_occurrences);
  }
}

}  // namespace
}  // namespace denotation
