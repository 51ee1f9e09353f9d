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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "denotation/data.h"
#include "denotation/errors.h"
#include "denotation/eval.h"
#include "denotation/io.h"
#include "denotation/kb.h"
#include "denotation/linker.h"
#include "denotation/neural.h"
#include "denotation/rules.h"

namespace denotation {

namespace {

namespace fs = std::filesystem;

struct Options {
  // Knowledge base and linking.
  std::string kb_triples;
  std::string kb_lexicon;
  std::string dataset;
  std::string linked;
  std::string method = "relation-max";
  size_t beam = 5;
  double edit_threshold = kDefaultEditThreshold;
  size_t max_ngram = 4;
  // Identification.
  std::string identifier;
  size_t ngram_order = kDefaultPriorOrder;
  std::string priors;
  std::string model;
  // Neural training.
  size_t epochs = 50;
  uint64_t seed = 0;
  std::string val_dataset;
  std::string val_linked;
  std::string pretrained_vectors;
  bool no_positional = false;
  // Evaluation.
  bool exact_ci = false;
  std::string from_predictions;
  // Generator.
  size_t kb_size = 60;
  size_t dialogues = 351;
  double misspelling_rate = 0.0;
  double extra_rate = 0.0;
  double enumeration_rate = 0.0;
  double ambiguity_rate = 0.0;

  std::string out;
};

std::string Fixed(double v, int precision = 4) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", precision, v);
  return buffer;
}

void RequireFile(const std::string &path, const std::string &flag) {
  if (path.empty()) throw UsageError(flag + " is required");
  if (!fs::exists(path)) throw DataError("input file '" + path + "' does not exist");
}

LinkerConfig MakeLinkerConfig(const Options &o) {
  if (o.beam < 1) throw UsageError("--beam must be at least 1");
  if (o.max_ngram < 1) throw UsageError("--max-ngram must be at least 1");
  if (!(o.edit_threshold >= 0.0 && o.edit_threshold <= 1.0)) {
    throw UsageError("--edit-threshold must lie in [0, 1]");
  }
  LinkerConfig config;
  config.beam_width = o.beam;
  config.max_normalized_distance = o.edit_threshold;
  config.max_ngram_order = o.max_ngram;
  return config;
}

LinkMethod MakeMethod(const Options &o) {
  try {
    return ParseLinkMethod(o.method);
  } catch (const std::invalid_argument &) {
    throw UsageError("--method must be relation-max or popularity");
  }
}

KnowledgeBase LoadKb(const Options &o) {
  RequireFile(o.kb_triples, "--kb-triples");
  RequireFile(o.kb_lexicon, "--kb-lexicon");
  return KnowledgeBase::Load(o.kb_triples, o.kb_lexicon);
}

// Linked records from either a linked file or a dataset linked on the fly.
std::vector<LinkedRecord> Records(const Options &o, const std::optional<KnowledgeBase> &kb,
                                  const std::string &dataset, const std::string &linked,
                                  const std::string &flag) {
  if (!dataset.empty() && !linked.empty()) {
    throw UsageError("give either --" + flag + "dataset or --" + flag + "linked, not both");
  }
  if (!linked.empty()) {
    RequireFile(linked, "--" + flag + "linked");
    return LoadLinked(linked);
  }
  RequireFile(dataset, "--" + flag + "dataset");
  std::vector<DialoguePair> pairs = LoadDataset(dataset);
  return LinkDataset(*kb, pairs, MakeLinkerConfig(o), MakeMethod(o));
}

bool NeedsKb(const Options &o) {
  return !o.dataset.empty() || !o.val_dataset.empty();
}

std::vector<PairOutcome> Outcomes(const std::vector<LinkedRecord> &records) {
  std::vector<PairOutcome> outcomes;
  for (const LinkedRecord &r : records) {
    PairOutcome p;
    p.id = r.id;
    p.gold = r.gold;
    for (const LinkedUtterance &a : r.linked.answers) {
      std::vector<std::string> ids;
      for (const Link &l : a.links) ids.push_back(l.entity);
      p.nbest.push_back(std::move(ids));
    }
    outcomes.push_back(std::move(p));
  }
  return outcomes;
}

int CmdGenerate(const Options &o, std::ostream &out) {
  if (o.out.empty()) throw UsageError("--out is required");
  SyntheticSpec spec;
  spec.kb_size = o.kb_size;
  spec.dialogue_count = o.dialogues;
  spec.misspelling_rate = o.misspelling_rate;
  spec.extra_entity_rate = o.extra_rate;
  spec.enumeration_rate = o.enumeration_rate;
  spec.ambiguity_rate = o.ambiguity_rate;
  spec.seed = o.seed;
  SyntheticCorpus corpus;
  try {
    corpus = GenerateSynthetic(spec);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  WriteSynthetic(corpus, o.out);
  out << "entities: " << corpus.lexicon.size() << '\n'
      << "triples: " << corpus.triples.size() << '\n'
      << "train: " << corpus.train.size() << '\n'
      << "val: " << corpus.val.size() << '\n'
      << "test: " << corpus.test.size() << '\n';
  return kExitOk;
}

int CmdLink(const Options &o, std::ostream &out) {
  if (o.out.empty()) throw UsageError("--out is required");
  std::optional<KnowledgeBase> kb = LoadKb(o);
  RequireFile(o.dataset, "--dataset");
  std::vector<LinkedRecord> records =
      LinkDataset(*kb, LoadDataset(o.dataset), MakeLinkerConfig(o), MakeMethod(o));
  SaveLinked(o.out, records);
  out << "pairs: " << records.size() << '\n';
  if (!records.empty()) {
    std::vector<PairOutcome> outcomes = Outcomes(records);
    for (size_t n : {1, 2, 5}) {
      out << "linking_accuracy@" << n << ": " << Fixed(LinkingAccuracy(outcomes, n)) << '\n';
    }
  }
  return kExitOk;
}

// Pairs whose gold entity is linked in the best answer hypothesis.
std::vector<const LinkedRecord *> Usable(const std::vector<LinkedRecord> &records,
                                         size_t *skipped) {
  std::vector<const LinkedRecord *> usable;
  for (const LinkedRecord &r : records) {
    if (r.linked.answers.front().Contains(r.gold)) {
      usable.push_back(&r);
    } else {
      ++*skipped;
    }
  }
  return usable;
}

int CmdTrain(const Options &o, std::ostream &out) {
  if (o.out.empty()) throw UsageError("--out is required");
  if (o.identifier != "priors" && o.identifier != "neural") {
    throw UsageError("--identifier must be priors or neural for training");
  }
  std::optional<KnowledgeBase> kb;
  if (NeedsKb(o)) kb = LoadKb(o);
  std::vector<LinkedRecord> records = Records(o, kb, o.dataset, o.linked, "");
  size_t skipped = 0;
  std::vector<const LinkedRecord *> usable = Usable(records, &skipped);
  out << "usable_pairs: " << usable.size() << '\n' << "skipped_pairs: " << skipped << '\n';
  if (usable.empty()) throw DataError("no training pair has its gold entity linked");

  if (o.identifier == "priors") {
    if (o.ngram_order < 2) throw UsageError("--ngram-order must be at least 2");
    std::vector<PriorTrainingExample> examples;
    for (const LinkedRecord *r : usable) {
      examples.push_back({r->linked.question, r->linked.answers.front(), r->gold});
    }
    PriorTrainingResult result = TrainNgramPriors(examples, o.ngram_order);
    result.table.Save(o.out);
    out << "patterns: " << result.table.counts().size() << '\n';
    return kExitOk;
  }

  if (o.epochs == 0) throw UsageError("--epochs must be at least 1");
  std::vector<std::pair<LinkedUtterance, LinkedUtterance>> linked_pairs;
  for (const LinkedRecord *r : usable) {
    linked_pairs.emplace_back(r->linked.question, r->linked.answers.front());
  }
  Vocabulary vocab = Vocabulary::Build(linked_pairs);
  std::vector<EncodedSequence> train;
  for (const LinkedRecord *r : usable) {
    train.push_back(EncodePair(vocab, r->linked.question, r->linked.answers.front(), r->gold));
  }
  std::vector<EncodedSequence> val;
  if (!o.val_dataset.empty() || !o.val_linked.empty()) {
    std::vector<LinkedRecord> val_records = Records(o, kb, o.val_dataset, o.val_linked, "val-");
    size_t val_skipped = 0;
    for (const LinkedRecord *r : Usable(val_records, &val_skipped)) {
      val.push_back(EncodePair(vocab, r->linked.question, r->linked.answers.front(), r->gold));
    }
    out << "val_pairs: " << val.size() << '\n' << "val_skipped_pairs: " << val_skipped << '\n';
  }
  std::optional<PretrainedTable> pretrained;
  if (!o.pretrained_vectors.empty()) {
    RequireFile(o.pretrained_vectors, "--pretrained-vectors");
    pretrained = PretrainedTable::Load(o.pretrained_vectors);
  }
  TrainingConfig config;
  config.epochs = o.epochs;
  config.seed = o.seed;
  config.flags.use_positional_features = !o.no_positional;
  config.flags.use_pretrained = pretrained.has_value();
  TrainingResult result = TrainModel(vocab, pretrained, train, val, config);
  for (const EpochLog &e : result.log) {
    out << "epoch " << e.epoch << " loss " << Fixed(e.mean_loss, 6) << " train_accuracy "
        << Fixed(e.train_accuracy) << " val_accuracy " << Fixed(e.val_accuracy) << '\n';
  }
  out << "best_epoch: " << result.best_epoch << '\n';
  result.model.Save(o.out);
  return kExitOk;
}

// The report, both tables and the per-pair predictions next to `--out`.
int WriteReport(const Options &o, const std::vector<PairOutcome> &outcomes, std::ostream &out) {
  EvalReport report = BuildReport(outcomes, {1, 2, 5}, o.method, o.identifier, o.exact_ci);
  const std::string text = report.ToText();
  {
    std::ofstream file = OpenOutput(o.out);
    file << text;
  }
  {
    std::ofstream file = OpenOutput(o.out + ".linking.tsv");
    file << report.LinkingTable();
  }
  {
    std::ofstream file = OpenOutput(o.out + ".identification.tsv");
    file << report.IdentificationTable();
  }
  if (o.from_predictions.empty()) SavePredictions(o.out + ".predictions.jsonl", outcomes);
  out << text;
  return kExitOk;
}

int CmdEvaluate(const Options &o, std::ostream &out) {
  if (o.out.empty()) throw UsageError("--out is required");
  const std::string &id = o.identifier;
  if (id != "basic" && id != "enum" && id != "priors" && id != "neural") {
    throw UsageError("--identifier must be basic, enum, priors or neural");
  }
  if (!o.priors.empty() && id != "priors") {
    throw UsageError("--priors is only valid with --identifier priors");
  }
  if (!o.model.empty() && id != "neural") {
    throw UsageError("--model is only valid with --identifier neural");
  }
  if (!o.from_predictions.empty()) {
    if (!o.dataset.empty() || !o.linked.empty() || !o.priors.empty() || !o.model.empty()) {
      throw UsageError("--from-predictions replaces --dataset, --linked, --priors and --model");
    }
    RequireFile(o.from_predictions, "--from-predictions");
    std::vector<PairOutcome> outcomes = LoadPredictions(o.from_predictions);
    if (outcomes.empty()) throw DataError("no pairs to evaluate");
    return WriteReport(o, outcomes, out);
  }
  if (id == "priors") RequireFile(o.priors, "--priors");
  if (id == "neural") RequireFile(o.model, "--model");

  std::optional<NgramPriorTable> priors;
  if (id == "priors") {
    priors = NgramPriorTable::Load(o.priors);
    if (priors->order() != o.ngram_order) {
      throw UsageError("priors file has n-gram order " + std::to_string(priors->order()) +
                       " but --ngram-order is " + std::to_string(o.ngram_order));
    }
  }
  std::optional<NeuralModel> model;
  if (id == "neural") {
    model = NeuralModel::Load(o.model);
    if (model->flags().use_positional_features == o.no_positional) {
      throw UsageError("--no-positional does not match the model checkpoint");
    }
    if (!o.pretrained_vectors.empty() && !model->flags().use_pretrained) {
      throw UsageError("model was trained without pretrained vectors");
    }
  }

  // Identification rules need popularity, so the knowledge base is always loaded.
  KnowledgeBase kb = LoadKb(o);
  std::optional<KnowledgeBase> kb_for_linking;
  if (!o.dataset.empty()) kb_for_linking = kb;
  std::vector<LinkedRecord> records = Records(o, kb_for_linking, o.dataset, o.linked, "");
  if (records.empty()) throw DataError("no pairs to evaluate");

  std::vector<PairOutcome> outcomes = Outcomes(records);
  for (size_t i = 0; i < records.size(); ++i) {
    const LinkedUtterance &q = records[i].linked.question;
    const LinkedUtterance &a = records[i].linked.answers.front();
    std::optional<Link> chosen;
    if (id == "basic") {
      chosen = BasicCancellation(q, a, kb).chosen;
    } else if (id == "enum") {
      chosen = CancellationWithEnumeration(q, a, kb).chosen;
    } else if (id == "priors") {
      chosen = CancellationWithPriors(q, a, kb, *priors).chosen;
    } else {
      EncodedSequence seq = EncodePair(model->vocab(), q, a);
      bool any = std::find(seq.answer_entity_mask.begin(), seq.answer_entity_mask.end(),
                           true) != seq.answer_entity_mask.end();
      if (any) outcomes[i].chosen = model->Predict(seq).entity;
    }
    if (chosen) outcomes[i].chosen = chosen->entity;
  }

  return WriteReport(o, outcomes, out);
}

}  // namespace

int RunCli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  Options o;
  CLI::App app{"Extracts question denotations from answer hints."};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  auto add_kb = [&o](CLI::App *cmd) {
    cmd->add_option("--kb-triples", o.kb_triples, "Triples TSV: subject, relation, object");
    cmd->add_option("--kb-lexicon", o.kb_lexicon, "Lexicon TSV: id, name, aliases");
  };
  auto add_linking = [&o](CLI::App *cmd) {
    cmd->add_option("--method", o.method, "relation-max or popularity")
        ->check(CLI::IsMember({"relation-max", "popularity"}));
    cmd->add_option("--beam", o.beam, "Answer hypotheses kept per pair");
    cmd->add_option("--edit-threshold", o.edit_threshold, "Maximum normalized edit distance");
    cmd->add_option("--max-ngram", o.max_ngram, "Longest n-gram considered as a mention");
  };
  auto add_data = [&o](CLI::App *cmd) {
    cmd->add_option("--dataset", o.dataset, "Dialogue pairs TSV, linked on the fly");
    cmd->add_option("--linked", o.linked, "Linked pairs JSONL written by 'link'");
  };

  CLI::App *generate = app.add_subcommand("generate", "Write a synthetic KB and dataset");
  generate->add_option("--out", o.out, "Output directory")->required();
  generate->add_option("--seed", o.seed, "Random seed");
  generate->add_option("--kb-size", o.kb_size, "Number of person entities");
  generate->add_option("--dialogues", o.dialogues, "Number of dialogue pairs");
  generate->add_option("--misspelling-rate", o.misspelling_rate, "Gold mentions with one typo");
  generate->add_option("--extra-rate", o.extra_rate, "Answers naming an extra entity");
  generate->add_option("--enumeration-rate", o.enumeration_rate, "Either-or questions");
  generate->add_option("--ambiguity-rate", o.ambiguity_rate, "Golds with a same-name decoy");

  CLI::App *link = app.add_subcommand("link", "Link a dataset against the KB");
  add_kb(link);
  link->add_option("--dataset", o.dataset, "Dialogue pairs TSV")->required();
  add_linking(link);
  link->add_option("--out", o.out, "Linked pairs JSONL")->required();

  CLI::App *train = app.add_subcommand("train", "Train n-gram priors or the neural model");
  add_kb(train);
  add_data(train);
  add_linking(train);
  train->add_option("--identifier", o.identifier, "priors or neural")->required();
  train->add_option("--ngram-order", o.ngram_order, "Context n-gram size for priors");
  train->add_option("--epochs", o.epochs, "Training epochs");
  train->add_option("--seed", o.seed, "Random seed");
  train->add_option("--val-dataset", o.val_dataset, "Validation pairs TSV");
  train->add_option("--val-linked", o.val_linked, "Validation linked JSONL");
  train->add_option("--pretrained-vectors", o.pretrained_vectors, "Fixed word vectors");
  train->add_flag("--no-positional", o.no_positional, "Disable positional features");
  train->add_option("--out", o.out, "Priors TSV or model checkpoint")->required();

  CLI::App *evaluate = app.add_subcommand("evaluate", "Identify denotations and report");
  add_kb(evaluate);
  add_data(evaluate);
  add_linking(evaluate);
  evaluate->add_option("--identifier", o.identifier, "basic, enum, priors or neural")
      ->required();
  evaluate->add_option("--ngram-order", o.ngram_order, "Must match the priors file");
  evaluate->add_option("--priors", o.priors, "Priors TSV written by 'train'");
  evaluate->add_option("--model", o.model, "Checkpoint written by 'train'");
  evaluate->add_option("--pretrained-vectors", o.pretrained_vectors,
                       "Only checked against the checkpoint");
  evaluate->add_flag("--no-positional", o.no_positional, "Must match the checkpoint");
  evaluate->add_flag("--exact-ci", o.exact_ci, "Add Clopper-Pearson intervals");
  evaluate->add_option("--from-predictions", o.from_predictions,
                       "Score a predictions JSONL instead of running the pipeline");
  evaluate->add_option("--out", o.out, "Report path; tables and predictions go next to it")
      ->required();

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
      int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitUsage;
    }
    if (generate->parsed()) return CmdGenerate(o, out);
    if (link->parsed()) return CmdLink(o, out);
    if (train->parsed()) return CmdTrain(o, out);
    if (evaluate->parsed()) return CmdEvaluate(o, out);
    return kExitUsage;
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError &e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception &e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace denotation
