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


#include "denotation/data.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "denotation/errors.h"
#include "denotation/io.h"
#include "denotation/text.h"

namespace denotation {

using json = nlohmann::json;

std::vector<DialoguePair> LoadDataset(const std::filesystem::path &path) {
  std::ifstream in = OpenInput(path);
  const std::string name = path.string();
  std::vector<DialoguePair> pairs;
  std::string line;
  size_t line_no = 0;
  while (ReadLine(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields = SplitTabs(line);
    if (fields.size() != 4) {
      throw DataError(LocatedMessage(
          name, line_no,
          "expected 4 tab-separated fields (id, question, answer_hint, gold), got " +
              std::to_string(fields.size())));
    }
    for (const std::string &f : fields) {
      if (f.empty()) throw DataError(LocatedMessage(name, line_no, "empty field"));
    }
    pairs.push_back({fields[0], fields[1], fields[2], fields[3]});
  }
  return pairs;
}

void SaveDataset(const std::filesystem::path &path, const std::vector<DialoguePair> &pairs) {
  std::ofstream out = OpenOutput(path);
  for (const DialoguePair &p : pairs) {
    out << p.id << '\t' << p.question << '\t' << p.answer_hint << '\t'
        << p.gold_denotation << '\n';
  }
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Linked records

namespace {

json UtteranceToJson(const LinkedUtterance &u) {
  json links = json::array();
  for (const Link &l : u.links) {
    links.push_back({{"start", l.span.start}, {"end", l.span.end}, {"entity", l.entity}});
  }
  return {{"raw", u.utterance.raw}, {"tokens", u.utterance.tokens}, {"links", links}};
}

LinkedUtterance UtteranceFromJson(const json &j) {
  LinkedUtterance u;
  u.utterance.raw = j.at("raw").get<std::string>();
  u.utterance.tokens = j.at("tokens").get<std::vector<std::string>>();
  size_t previous_end = 0;
  for (const json &l : j.at("links")) {
    Link link{{l.at("start").get<size_t>(), l.at("end").get<size_t>()},
              l.at("entity").get<std::string>()};
    if (link.span.start >= link.span.end || link.span.end > u.utterance.tokens.size() ||
        link.span.start < previous_end) {
      throw DataError("link spans must be non-empty, in range, ordered and disjoint");
    }
    previous_end = link.span.end;
    u.links.push_back(std::move(link));
  }
  return u;
}

}  // namespace

void SaveLinked(const std::filesystem::path &path, const std::vector<LinkedRecord> &records) {
  std::ofstream out = OpenOutput(path);
  for (const LinkedRecord &r : records) {
    json answers = json::array();
    for (const LinkedUtterance &a : r.linked.answers) answers.push_back(UtteranceToJson(a));
    json j = {{"id", r.id},
              {"gold", r.gold},
              {"question", UtteranceToJson(r.linked.question)},
              {"answers", answers}};
    out << j.dump() << '\n';
  }
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

std::vector<LinkedRecord> LoadLinked(const std::filesystem::path &path) {
  std::ifstream in = OpenInput(path);
  std::vector<LinkedRecord> records;
  std::string line;
  size_t line_no = 0;
  while (ReadLine(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      LinkedRecord r;
      r.id = j.at("id").get<std::string>();
      r.gold = j.at("gold").get<std::string>();
      r.linked.question = UtteranceFromJson(j.at("question"));
      for (const json &a : j.at("answers")) r.linked.answers.push_back(UtteranceFromJson(a));
      if (r.linked.answers.empty()) throw DataError("record without answer hypotheses");
      records.push_back(std::move(r));
    } catch (const json::exception &e) {
      throw DataError(LocatedMessage(path.string(), line_no, e.what()));
    } catch (const DataError &e) {
      throw DataError(LocatedMessage(path.string(), line_no, e.what()));
    }
  }
  return records;
}

std::vector<LinkedRecord> LinkDataset(const KnowledgeBase &kb,
                                      const std::vector<DialoguePair> &pairs,
                                      const LinkerConfig &config, LinkMethod method) {
  std::vector<LinkedRecord> records;
  records.reserve(pairs.size());
  for (const DialoguePair &p : pairs) {
    records.push_back({p.id, p.gold_denotation,
                       LinkPair(kb, Utterance::FromText(p.question),
                                Utterance::FromText(p.answer_hint), config, method)});
  }
  return records;
}

// ---------------------------------------------------------------------------
// Synthetic corpus

namespace {

constexpr char kConsonants[] = "bdfgklmnprstvz";
constexpr char kVowels[] = "aeiou";
// Every name word is at least this many edits away from every other, so a
// single-edit misspelling of "The Xxxxxxx" stays outside the default
// lookup threshold of every other title.
constexpr size_t kMinWordSeparation = 4;

const std::vector<std::string> &Occupations() {
  static const std::vector<std::string> list = {"painter", "dancer", "farmer", "lawyer",
                                                "sailor",  "poet",   "singer", "actor"};
  return list;
}

// Words appearing in the dialogue templates below.
const std::vector<std::string> &TemplateWords() {
  static const std::vector<std::string> list = {
      "where", "was",  "born", "what", "is",     "the",  "nationality", "of",
      "work",  "did",  "write", "it",  "male",   "female", "or",        "from",
      "in",    "a",    "and",  "author", "who"};
  return list;
}

class Random {
 public:
  explicit Random(uint64_t seed) : rng_(seed) {}
  size_t Below(size_t n) { return static_cast<size_t>(rng_() % n); }
  bool Chance(double p) { return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p; }

 private:
  std::mt19937_64 rng_;
};

// Pronounceable CVCVCVC words, pairwise far apart in edit distance and far
// from the template vocabulary.
class NamePool {
 public:
  explicit NamePool(Random &random) : random_(random) {
    for (const std::string &w : TemplateWords()) reserved_.push_back(DecodeUtf8(w));
    for (const std::string &w : Occupations()) reserved_.push_back(DecodeUtf8(w));
  }

  std::string Word() {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      std::string w;
      for (int k = 0; k < 7; ++k) {
        w.push_back(k % 2 == 0 ? kConsonants[random_.Below(sizeof(kConsonants) - 1)]
                               : kVowels[random_.Below(sizeof(kVowels) - 1)]);
      }
      std::u32string u = DecodeUtf8(w);
      auto close = [&u](const std::u32string &other) {
        return EditDistance(u, other, kMinWordSeparation) < kMinWordSeparation;
      };
      if (std::any_of(words_.begin(), words_.end(), close)) continue;
      if (std::any_of(reserved_.begin(), reserved_.end(), [&u](const std::u32string &r) {
            size_t longest = std::max(u.size(), r.size());
            return EditDistance(u, r) * 10 <= longest * 4;
          })) {
        continue;
      }
      words_.push_back(u);
      w[0] = static_cast<char>(w[0] - 'a' + 'A');
      return w;
    }
    throw std::logic_error("name pool exhausted");
  }

 private:
  Random &random_;
  std::vector<std::u32string> words_;
  std::vector<std::u32string> reserved_;
};

// Applies one substitution, insertion or deletion at a letter position.
std::string Misspell(const std::string &name, Random &random) {
  std::vector<size_t> letters;
  for (size_t i = 0; i < name.size(); ++i) {
    if (std::isalpha(static_cast<unsigned char>(name[i]))) letters.push_back(i);
  }
  size_t pos = letters[random.Below(letters.size())];
  std::string out = name;
  switch (random.Below(3)) {
    case 0: {
      char original = static_cast<char>(std::tolower(static_cast<unsigned char>(name[pos])));
      char replacement = original;
      while (replacement == original) replacement = static_cast<char>('a' + random.Below(26));
      out[pos] = std::isupper(static_cast<unsigned char>(name[pos]))
                     ? static_cast<char>(std::toupper(static_cast<unsigned char>(replacement)))
                     : replacement;
      break;
    }
    case 1:
      out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos),
                 static_cast<char>('a' + random.Below(26)));
      break;
    default:
      out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
      break;
  }
  return out;
}

size_t LetterCount(const std::string &s) {
  return static_cast<size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); }));
}

enum class Kind { kBirthplace, kNationality, kWork, kGenderChoice, kCountryChoice };

struct Dialogue {
  DialoguePair pair;
  // Canonical names deliberately mentioned in the question or answer.
  std::vector<std::string> mentioned;
  bool ambiguous = false;
  bool misspelled = false;
  bool enumeration = false;
  bool extra = false;
};

void CheckRate(double rate, const char *name) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

// Every n-gram of the texts may only match entities named as intended.
void VerifyDialogue(const KnowledgeBase &kb, const Dialogue &d) {
  std::unordered_set<std::string> allowed;
  for (const std::string &name : d.mentioned) allowed.insert(NormalizeText(name));
  LinkerConfig config;
  for (const std::string *text : {&d.pair.question, &d.pair.answer_hint}) {
    Utterance u = Utterance::FromText(*text);
    for (const EntityCandidate &c : GenerateCandidates(kb, u, config)) {
      for (const SurfaceMatch &m : c.matches) {
        if (!allowed.count(NormalizeText(kb.entity(m.entity).canonical_name))) {
          throw std::logic_error("synthetic dialogue '" + d.pair.id +
                                 "' has an unintended entity match '" + c.surface + "'");
        }
      }
    }
  }
}

}  // namespace

SyntheticCorpus GenerateSynthetic(const SyntheticSpec &spec) {
  if (spec.kb_size < 5) throw std::invalid_argument("kb_size must be at least 5");
  CheckRate(spec.misspelling_rate, "misspelling_rate");
  CheckRate(spec.extra_entity_rate, "extra_entity_rate");
  CheckRate(spec.enumeration_rate, "enumeration_rate");
  CheckRate(spec.ambiguity_rate, "ambiguity_rate");

  Random random(spec.seed);
  NamePool pool(random);
  SyntheticCorpus corpus;
  std::vector<Entity> &lexicon = corpus.lexicon;
  std::vector<TripleRecord> &triples = corpus.triples;
  std::unordered_map<std::string, size_t> popularity;
  auto add_triple = [&](const std::string &s, const std::string &r, const std::string &o) {
    triples.push_back({s, r, o});
    ++popularity[s];
    ++popularity[o];
  };
  std::unordered_map<std::string, std::string> names;
  auto add_entity = [&](std::string id, std::string name) {
    names[id] = name;
    lexicon.push_back({id, std::move(name), {}});
    return id;
  };

  const size_t n_persons = spec.kb_size;
  const size_t n_countries = std::max<size_t>(3, n_persons / 8);
  const size_t n_cities = std::max<size_t>(4, n_persons / 3);

  std::vector<std::string> countries, cities, occupations, persons, works;
  std::unordered_map<std::string, std::string> city_country;
  for (size_t i = 0; i < n_countries; ++i) {
    countries.push_back(add_entity("n" + std::to_string(i), pool.Word()));
  }
  for (size_t i = 0; i < n_cities; ++i) {
    std::string city = add_entity("c" + std::to_string(i), pool.Word());
    city_country[city] = countries[i % n_countries];
    add_triple(city, "located_in", city_country[city]);
    cities.push_back(city);
  }
  for (size_t i = 0; i < Occupations().size(); ++i) {
    occupations.push_back(add_entity("o" + std::to_string(i), Occupations()[i]));
  }
  const std::string male = add_entity("g.male", "male");
  const std::string female = add_entity("g.female", "female");

  struct Person {
    std::string id, city, country, occupation, gender, work;
  };
  std::vector<Person> people;
  for (size_t i = 0; i < n_persons; ++i) {
    Person p;
    p.id = add_entity("p" + std::to_string(i), pool.Word() + " " + pool.Word());
    p.work = add_entity("w" + std::to_string(i), "The " + pool.Word());
    p.city = cities[random.Below(cities.size())];
    p.country = city_country[p.city];
    p.occupation = occupations[random.Below(occupations.size())];
    p.gender = random.Below(2) == 0 ? male : female;
    add_triple(p.id, "born_in", p.city);
    add_triple(p.id, "nationality", p.country);
    add_triple(p.id, "profession", p.occupation);
    add_triple(p.id, "gender", p.gender);
    add_triple(p.id, "wrote", p.work);
    people.push_back(std::move(p));
  }

  // Decoys share the gold's name and outrank it in popularity through
  // parallel edges to a private landmark, but never touch the person.
  std::unordered_set<std::string> has_decoy;
  size_t landmarks = 0;
  auto ensure_decoy = [&](const std::string &gold) {
    if (!has_decoy.insert(gold).second) return;
    const std::string decoy = add_entity(gold + ".decoy", names.at(gold));
    const std::string landmark =
        add_entity("l" + std::to_string(landmarks++), pool.Word());
    const size_t edges = popularity[gold] + 1;
    for (size_t k = 0; k < edges; ++k) add_triple(decoy, "near", landmark);
  };

  std::vector<Dialogue> dialogues;
  for (size_t d = 0; d < spec.dialogue_count; ++d) {
    Dialogue dlg;
    char id[32];
    std::snprintf(id, sizeof(id), "syn-%06zu", d);
    dlg.pair.id = id;
    const Person &p = people[random.Below(people.size())];
    const std::string &pn = names[p.id];

    Kind kind;
    if (random.Chance(spec.enumeration_rate)) {
      kind = random.Below(2) == 0 ? Kind::kGenderChoice : Kind::kCountryChoice;
      dlg.enumeration = true;
    } else if (random.Chance(spec.ambiguity_rate)) {
      kind = random.Below(2) == 0 ? Kind::kBirthplace : Kind::kWork;
      dlg.ambiguous = true;
    } else {
      kind = static_cast<Kind>(random.Below(3));
    }
    dlg.extra = !dlg.enumeration && random.Chance(spec.extra_entity_rate);

    std::string gold;
    switch (kind) {
      case Kind::kBirthplace: gold = p.city; break;
      case Kind::kNationality: gold = p.country; break;
      case Kind::kWork: gold = p.work; break;
      case Kind::kGenderChoice: gold = p.gender; break;
      case Kind::kCountryChoice: gold = p.country; break;
    }
    std::string gold_surface = names[gold];
    if (random.Chance(spec.misspelling_rate) && LetterCount(gold_surface) >= 5) {
      gold_surface = Misspell(gold_surface, random);
      dlg.misspelled = true;
    }
    const std::string &occupation = names[p.occupation];
    dlg.mentioned = {pn, names[gold]};
    if (dlg.extra) dlg.mentioned.push_back(occupation);

    switch (kind) {
      case Kind::kBirthplace:
        dlg.pair.question = "Where was " + pn + " born?";
        dlg.pair.answer_hint = dlg.extra
                                   ? pn + " was a " + occupation + " born in " + gold_surface + "."
                                   : pn + " was born in " + gold_surface + ".";
        break;
      case Kind::kNationality:
        dlg.pair.question = "What is the nationality of " + pn + "?";
        dlg.pair.answer_hint = dlg.extra ? pn + " was a " + occupation + " from " + gold_surface + "."
                                         : pn + " is from " + gold_surface + ".";
        break;
      case Kind::kWork:
        dlg.pair.question = "What work did " + pn + " write?";
        dlg.pair.answer_hint =
            dlg.extra ? pn + " was a " + occupation + " and the author of " + gold_surface + "."
                      : pn + " is the author of " + gold_surface + ".";
        break;
      case Kind::kGenderChoice:
        dlg.pair.question = "Is " + pn + " male or female?";
        dlg.pair.answer_hint = "It is " + gold_surface + ".";
        dlg.mentioned = {pn, "male", "female"};
        break;
      case Kind::kCountryChoice: {
        std::string other = countries[random.Below(countries.size())];
        while (other == p.country) other = countries[random.Below(countries.size())];
        bool gold_first = random.Below(2) == 0;
        const std::string &first = names[gold_first ? p.country : other];
        const std::string &second = names[gold_first ? other : p.country];
        dlg.pair.question = "Is " + pn + " from " + first + " or " + second + "?";
        dlg.pair.answer_hint = "It is " + gold_surface + ".";
        dlg.mentioned = {pn, first, second};
        break;
      }
    }
    dlg.pair.gold_denotation = gold;
    if (dlg.ambiguous) ensure_decoy(gold);
    dialogues.push_back(std::move(dlg));
  }

  const KnowledgeBase kb = KnowledgeBase::Build(lexicon, triples);
  for (const Dialogue &dlg : dialogues) VerifyDialogue(kb, dlg);

  const size_t n = dialogues.size();
  const size_t n_train = static_cast<size_t>(std::llround(n * 176.0 / 351.0));
  const size_t n_val = static_cast<size_t>(std::llround(n * 43.0 / 351.0));
  for (size_t i = 0; i < n; ++i) {
    const Dialogue &dlg = dialogues[i];
    std::vector<DialoguePair> &split =
        i < n_train ? corpus.train : (i < n_train + n_val ? corpus.val : corpus.test);
    split.push_back(dlg.pair);
    if (has_decoy.count(dlg.pair.gold_denotation)) corpus.ambiguous.insert(dlg.pair.id);
    if (dlg.misspelled) corpus.misspelled.insert(dlg.pair.id);
    if (dlg.enumeration) corpus.enumeration.insert(dlg.pair.id);
    if (dlg.extra) corpus.with_extra.insert(dlg.pair.id);
  }
  return corpus;
}

void WriteSynthetic(const SyntheticCorpus &corpus, const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory '" + dir.string() + "': " + ec.message());
  {
    std::ofstream out = OpenOutput(dir / "kb_lexicon.tsv");
    for (const Entity &e : corpus.lexicon) {
      out << e.id << '\t' << e.canonical_name << '\t';
      for (size_t i = 0; i < e.aliases.size(); ++i) out << (i ? "|" : "") << e.aliases[i];
      out << '\n';
    }
  }
  {
    std::ofstream out = OpenOutput(dir / "kb_triples.tsv");
    for (const TripleRecord &t : corpus.triples) {
      out << t.subject << '\t' << t.relation << '\t' << t.object << '\n';
    }
  }
  SaveDataset(dir / "train.tsv", corpus.train);
  SaveDataset(dir / "val.tsv", corpus.val);
  SaveDataset(dir / "test.tsv", corpus.test);
  std::ofstream out = OpenOutput(dir / "fixtures.tsv");
  out << "id\tsplit\tambiguous\tmisspelled\tenumeration\textra\n";
  auto flag = [](const std::set<std::string> &s, const std::string &id) {
    return s.count(id) ? '1' : '0';
  };
  for (const auto &[split, pairs] :
       {std::pair{"train", &corpus.train}, {"val", &corpus.val}, {"test", &corpus.test}}) {
    for (const DialoguePair &p : *pairs) {
      out << p.id << '\t' << split << '\t' << flag(corpus.ambiguous, p.id) << '\t'
          << flag(corpus.misspelled, p.id) << '\t' << flag(corpus.enumeration, p.id) << '\t'
          << flag(corpus.with_extra, p.id) << '\n';
    }
  }
  if (!out) throw DataError("failed writing into '" + dir.string() + "'");
}

}  // namespace denotation
