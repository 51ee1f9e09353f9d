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


#include "denotation/cli.h"

#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "denotation/eval.h"
#include "denotation/rules.h"
#include "test_util.h"

namespace denotation {
namespace {

using testing::ReadText;
using testing::TempDir;
using testing::WriteText;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "denotation");
  std::vector<const char *> argv;
  for (const std::string &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void Generate(const std::vector<std::string> &extra = {}) {
    std::vector<std::string> args = {"generate", "--out", dir_.path().string(), "--seed", "3"};
    args.insert(args.end(), extra.begin(), extra.end());
    Result r = Invoke(args);
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  std::vector<std::string> Kb() const {
    return {"--kb-triples", (dir_ / "kb_triples.tsv").string(), "--kb-lexicon",
            (dir_ / "kb_lexicon.tsv").string()};
  }
  std::vector<std::string> With(std::vector<std::string> args,
                                const std::vector<std::string> &more) const {
    args.insert(args.end(), more.begin(), more.end());
    return args;
  }
  std::string Path(const std::string &name) const { return (dir_ / name).string(); }

  TempDir dir_;
};

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(Invoke({"--help"}).code, kExitOk);
  EXPECT_EQ(Invoke({}).code, kExitUsage);
  EXPECT_EQ(Invoke({"link", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"generate", "--out", Path("g"), "--kb-size", "2"}).code, kExitUsage);
}

TEST_F(CliTest, MissingInputIsDataError) {
  Result r = Invoke({"link", "--kb-triples", Path("none.tsv"), "--kb-lexicon", Path("none2.tsv"),
                  "--dataset", Path("none3.tsv"), "--out", Path("o.jsonl")});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("none.tsv"), std::string::npos);
}

TEST_F(CliTest, LinkReportsAccuracies) {
  Generate();
  Result r = Invoke(With({"link", "--dataset", Path("test.tsv"), "--out", Path("t.jsonl")}, Kb()));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("linking_accuracy@1: 1.0000"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("linking_accuracy@5: 1.0000"), std::string::npos);
  EXPECT_FALSE(ReadText(Path("t.jsonl")).empty());
}

TEST_F(CliTest, RelationMaxBeatsPopularityOnAmbiguousData) {
  Generate({"--ambiguity-rate", "0.6"});
  auto accuracy_at_1 = [&](const std::string &method) {
    Result r = Invoke(With({"link", "--dataset", Path("test.tsv"), "--out", Path("x.jsonl"),
                         "--method", method},
                        Kb()));
    EXPECT_EQ(r.code, kExitOk) << r.err;
    size_t at = r.out.find("linking_accuracy@1: ");
    size_t at5 = r.out.find("linking_accuracy@5: ");
    double one = std::stod(r.out.substr(at + 20));
    double five = std::stod(r.out.substr(at5 + 20));
    EXPECT_GE(five, one);
    return one;
  };
  EXPECT_GT(accuracy_at_1("relation-max"), accuracy_at_1("popularity"));
}

TEST_F(CliTest, PriorsOnObamaFixture) {
  WriteText(dir_ / "lex.tsv",
            "obama\tBarack Obama\nhawaii\tHawaii\npresident\tUSA president\n");
  WriteText(dir_ / "tri.tsv",
            "obama\tborn_in\thawaii\nobama\tposition\tpresident\n");
  WriteText(dir_ / "d.tsv",
            "1\tWhere was Barack Obama born?\tBarack Obama was a USA president born in "
            "Hawaii.\thawaii\n");
  Result r = Invoke({"train", "--kb-triples", Path("tri.tsv"), "--kb-lexicon", Path("lex.tsv"),
                  "--dataset", Path("d.tsv"), "--identifier", "priors", "--out", Path("p.tsv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  NgramPriorTable table = NgramPriorTable::Load(Path("p.tsv"));
  ASSERT_TRUE(table.counts().count("born in #ENTITY"));
  EXPECT_GE(table.counts().at("born in #ENTITY").denotation, 1);
  // "a USA president" links as one span, so its context is "obama was".
  EXPECT_EQ(table.counts().at("obama was #ENTITY").extra, 1);
  EXPECT_EQ(table.counts().at("#START #START #ENTITY").extra, 1);
}

TEST_F(CliTest, TrainRejectsZeroEpochsAndUnusableData) {
  Generate();
  EXPECT_EQ(Invoke(With({"train", "--dataset", Path("train.tsv"), "--identifier", "neural",
                      "--epochs", "0", "--out", Path("m.json")},
                     Kb()))
                .code,
            kExitUsage);
  WriteText(dir_ / "bad.tsv", "1\tWho?\tNobody at all.\tp0\n2\tWhat?\tNothing.\tp1\n");
  Result r = Invoke(With({"train", "--dataset", Path("bad.tsv"), "--identifier", "priors", "--out",
                       Path("p.tsv")},
                      Kb()));
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.out.find("skipped_pairs: 2"), std::string::npos);
}

TEST_F(CliTest, NeuralTrainingIsReproducible) {
  Generate({"--dialogues", "40"});
  auto train = [&](const std::string &out) {
    return Invoke(With({"train", "--dataset", Path("train.tsv"), "--identifier", "neural", "--seed",
                     "7", "--epochs", "5", "--out", Path(out)},
                    Kb()));
  };
  Result a = train("a.json"), b = train("b.json");
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_NE(a.out.find("epoch 5 "), std::string::npos);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(ReadText(Path("a.json")), ReadText(Path("b.json")));
}

TEST_F(CliTest, EvaluatePerfectRun) {
  Generate();
  ASSERT_EQ(Invoke(With({"train", "--dataset", Path("train.tsv"), "--identifier", "priors", "--out",
                      Path("p.tsv")},
                     Kb()))
                .code,
            kExitOk);
  Result r = Invoke(With({"evaluate", "--dataset", Path("test.tsv"), "--identifier", "priors",
                       "--priors", Path("p.tsv"), "--out", Path("report.txt")},
                      Kb()));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EvalReport report = EvalReport::ParseText(ReadText(Path("report.txt")));
  EXPECT_EQ(report.linking_accuracy(1), 1.0);
  EXPECT_EQ(report.identification_accuracy(), 1.0);
  EXPECT_EQ(report.extraction_accuracy(), 1.0);
  EXPECT_NE(r.out.find("extraction_ci_halfwidth: 0\n"), std::string::npos);
  EXPECT_NE(r.out.find("decomposition_check: 1 ok"), std::string::npos);
  EXPECT_FALSE(ReadText(Path("report.txt.linking.tsv")).empty());
  EXPECT_FALSE(ReadText(Path("report.txt.predictions.jsonl")).empty());
}

TEST_F(CliTest, EvaluateRejectsMismatchedArtifacts) {
  Generate();
  EXPECT_EQ(Invoke(With({"evaluate", "--dataset", Path("test.tsv"), "--identifier", "basic",
                      "--priors", Path("p.tsv"), "--out", Path("r.txt")},
                     Kb()))
                .code,
            kExitUsage);
  EXPECT_EQ(Invoke(With({"evaluate", "--dataset", Path("test.tsv"), "--identifier", "neural",
                      "--out", Path("r.txt")},
                     Kb()))
                .code,
            kExitUsage);
  EXPECT_EQ(Invoke(With({"evaluate", "--dataset", Path("test.tsv"), "--identifier", "priors",
                      "--model", Path("m.json"), "--out", Path("r.txt")},
                     Kb()))
                .code,
            kExitUsage);
}

TEST_F(CliTest, EvaluateMockedPredictions) {
  std::vector<PairOutcome> pairs;
  for (int i = 0; i < 132; ++i) {
    PairOutcome p;
    p.id = std::to_string(i);
    p.gold = "g";
    p.nbest = {{i < 82 ? "g" : "x"}};
    p.chosen = i < 63 ? "g" : "x";
    pairs.push_back(p);
  }
  SavePredictions(Path("mock.jsonl"), pairs);
  Result r = Invoke({"evaluate", "--identifier", "priors", "--from-predictions", Path("mock.jsonl"),
                  "--out", Path("r.txt")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(ReadText(Path("r.txt.identification.tsv")),
            "identifier\taccuracy_di\taccuracy_de\npriors\t0.7683\t0.4773\n");
}

TEST_F(CliTest, GenerateIsByteIdentical) {
  TempDir other;
  Generate({"--misspelling-rate", "0.2", "--ambiguity-rate", "0.3"});
  Result r = Invoke({"generate", "--out", other.path().string(), "--seed", "3",
                  "--misspelling-rate", "0.2", "--ambiguity-rate", "0.3"});
  ASSERT_EQ(r.code, kExitOk);
  for (const char *name : {"kb_triples.tsv", "kb_lexicon.tsv", "train.tsv", "test.tsv"}) {
    EXPECT_EQ(ReadText(dir_ / name), ReadText(other / name)) << name;
  }
}

}  // namespace
}  // namespace denotation
