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


#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "denotation/cli.h"
#include "denotation/data.h"
#include "denotation/errors.h"
#include "denotation/eval.h"
#include "denotation/kb.h"
#include "denotation/linker.h"
#include "denotation/text.h"

namespace py = pybind11;

namespace denotation {
namespace {

using PyLink = std::tuple<size_t, size_t, std::string>;

std::vector<PyLink> Links(const LinkedUtterance &u) {
  std::vector<PyLink> out;
  for (const Link &l : u.links) out.emplace_back(l.span.start, l.span.end, l.entity);
  return out;
}

KnowledgeBase BuildKb(const std::vector<std::tuple<std::string, std::string>> &lexicon,
                      const std::vector<std::tuple<std::string, std::string, std::string>> &triples) {
  std::vector<Entity> entities;
  for (const auto &[id, name] : lexicon) entities.push_back({id, name, {}});
  std::vector<TripleRecord> records;
  for (const auto &[s, r, o] : triples) records.push_back({s, r, o});
  return KnowledgeBase::Build(std::move(entities), records);
}

py::dict LinkPairPy(const KnowledgeBase &kb, const std::string &question,
                    const std::string &answer, const std::string &method, size_t beam,
                    double threshold, size_t max_ngram) {
  LinkerConfig config;
  config.beam_width = beam;
  config.max_normalized_distance = threshold;
  config.max_ngram_order = max_ngram;
  LinkedPair pair = LinkPair(kb, Utterance::FromText(question), Utterance::FromText(answer),
                             config, ParseLinkMethod(method));
  py::dict out;
  out["question"] = Links(pair.question);
  std::vector<std::vector<PyLink>> answers;
  for (const LinkedUtterance &a : pair.answers) answers.push_back(Links(a));
  out["answers"] = answers;
  return out;
}

py::dict GenerateSyntheticPy(const std::string &out_dir, uint64_t seed, size_t kb_size,
                             size_t dialogues, double misspelling_rate, double extra_rate,
                             double enumeration_rate, double ambiguity_rate) {
  SyntheticSpec spec;
  spec.seed = seed;
  spec.kb_size = kb_size;
  spec.dialogue_count = dialogues;
  spec.misspelling_rate = misspelling_rate;
  spec.extra_entity_rate = extra_rate;
  spec.enumeration_rate = enumeration_rate;
  spec.ambiguity_rate = ambiguity_rate;
  SyntheticCorpus corpus = GenerateSynthetic(spec);
  WriteSynthetic(corpus, out_dir);
  py::dict out;
  out["entities"] = corpus.lexicon.size();
  out["triples"] = corpus.triples.size();
  out["train"] = corpus.train.size();
  out["val"] = corpus.val.size();
  out["test"] = corpus.test.size();
  return out;
}

std::tuple<int, std::string, std::string> RunCliPy(std::vector<std::string> args) {
  args.insert(args.begin(), "denotation");
  std::vector<const char *> argv;
  for (const std::string &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  }
  return {code, out.str(), err.str()};
}

}  // namespace
}  // namespace denotation

PYBIND11_MODULE(_denotation, m) {
  using namespace denotation;
  m.doc() = "Denotation extraction from answer hints.";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

  m.def("normalize_text", &NormalizeText, py::arg("text"));
  m.def("normalized_edit_distance", &NormalizedEditDistance, py::arg("a"), py::arg("b"));

  py::class_<KnowledgeBase>(m, "KnowledgeBase")
      .def_static("load", &KnowledgeBase::Load, py::arg("triples"), py::arg("lexicon"))
      .def_static("build", &BuildKb, py::arg("lexicon"), py::arg("triples"),
                  "Lexicon as (id, name) tuples, triples as (subject, relation, object).")
      .def_property_readonly("num_entities", &KnowledgeBase::num_entities)
      .def_property_readonly("num_triples", &KnowledgeBase::num_triples)
      .def(
          "popularity",
          [](const KnowledgeBase &kb, const std::string &id) { return kb.Popularity(id); },
          py::arg("entity"))
      .def(
          "relation_count",
          [](const KnowledgeBase &kb, const std::string &a, const std::string &b) {
            return kb.RelationCount(a, b);
          },
          py::arg("a"), py::arg("b"))
      .def(
          "lookup",
          [](const KnowledgeBase &kb, const std::string &surface, double threshold) {
            std::vector<std::tuple<std::string, double>> out;
            for (const SurfaceMatch &s : kb.LookupSurface(surface, threshold)) {
              out.emplace_back(kb.id(s.entity), s.distance);
            }
            return out;
          },
          py::arg("surface"), py::arg("threshold") = kDefaultEditThreshold);

  m.def("link_pair", &LinkPairPy, py::arg("kb"), py::arg("question"), py::arg("answer"),
        py::arg("method") = "relation-max", py::arg("beam") = 5,
        py::arg("threshold") = kDefaultEditThreshold, py::arg("max_ngram") = 4,
        "Links a question and answer; links are (start, end, entity) token spans.");
  m.def("generate_synthetic", &GenerateSyntheticPy, py::arg("out_dir"), py::arg("seed") = 0,
        py::arg("kb_size") = 60, py::arg("dialogues") = 351, py::arg("misspelling_rate") = 0.0,
        py::arg("extra_rate") = 0.0, py::arg("enumeration_rate") = 0.0,
        py::arg("ambiguity_rate") = 0.0);
  m.def("binomial_ci_halfwidth", &BinomialCiHalfwidth, py::arg("p"), py::arg("n"));
  m.def(
      "clopper_pearson",
      [](size_t k, size_t n) {
        Interval iv = ClopperPearson(k, n);
        return std::make_tuple(iv.low, iv.high);
      },
      py::arg("successes"), py::arg("trials"));
  m.def("run_cli", &RunCliPy, py::arg("args"),
        "Runs the command-line tool in process; returns (exit_code, stdout, stderr).");
}
