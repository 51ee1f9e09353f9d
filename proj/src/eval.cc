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


#include "denotation/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>

#include "json.hpp"

#include "denotation/errors.h"
#include "denotation/io.h"

namespace denotation {

using json = nlohmann::json;

namespace {

bool LinkedAt(const PairOutcome &p, size_t n) {
  for (size_t k = 0; k < n && k < p.nbest.size(); ++k) {
    const std::vector<std::string> &ids = p.nbest[k];
    if (std::find(ids.begin(), ids.end(), p.gold) != ids.end()) return true;
  }
  return false;
}

bool Identified(const PairOutcome &p) {
  return LinkedAt(p, 1) && p.chosen && *p.chosen == p.gold;
}

std::string FormatDouble(double v, int precision) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", precision, v);
  return buffer;
}

std::string ExactDouble(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

}  // namespace

double LinkingAccuracy(const std::vector<PairOutcome> &pairs, size_t n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (pairs.empty()) throw std::invalid_argument("no pairs to evaluate");
  size_t linked = std::count_if(pairs.begin(), pairs.end(),
                                [n](const PairOutcome &p) { return LinkedAt(p, n); });
  return static_cast<double>(linked) / static_cast<double>(pairs.size());
}

Ratio IdentificationAccuracy(const std::vector<PairOutcome> &pairs) {
  Ratio r;
  for (const PairOutcome &p : pairs) {
    if (!LinkedAt(p, 1)) continue;
    ++r.denominator;
    if (Identified(p)) ++r.numerator;
  }
  r.undefined = r.denominator == 0;
  return r;
}

double ExtractionAccuracy(const std::vector<PairOutcome> &pairs) {
  if (pairs.empty()) throw std::invalid_argument("no pairs to evaluate");
  size_t correct = std::count_if(pairs.begin(), pairs.end(), Identified);
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

double BinomialCiHalfwidth(double p, size_t n) {
  if (n < 1) throw std::invalid_argument("sample size must be at least 1");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("proportion outside [0, 1]");
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

Interval ClopperPearson(size_t successes, size_t trials, double confidence) {
  if (trials < 1 || successes > trials) throw std::invalid_argument("invalid binomial counts");
  const double alpha = 1.0 - confidence;
  const double k = static_cast<double>(successes), n = static_cast<double>(trials);
  Interval out{0.0, 1.0};
  if (successes > 0) {
    out.low = boost::math::quantile(boost::math::beta_distribution<>(k, n - k + 1), alpha / 2);
  }
  if (successes < trials) {
    out.high =
        boost::math::quantile(boost::math::beta_distribution<>(k + 1, n - k), 1 - alpha / 2);
  }
  return out;
}

double EvalReport::linking_accuracy(size_t n) const {
  auto it = correctly_linked.find(n);
  if (it == correctly_linked.end()) throw std::invalid_argument("no linking count for this n");
  if (total_pairs == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total_pairs);
}

Ratio EvalReport::identification() const {
  Ratio r;
  r.numerator = correctly_identified;
  auto it = correctly_linked.find(1);
  r.denominator = it == correctly_linked.end() ? 0 : it->second;
  r.undefined = r.denominator == 0;
  return r;
}

double EvalReport::extraction_accuracy() const {
  if (total_pairs == 0) return 0.0;
  return static_cast<double>(correctly_identified) / static_cast<double>(total_pairs);
}

bool EvalReport::DecompositionHolds() const {
  Ratio id = identification();
  if (correctly_identified > id.denominator || id.denominator > total_pairs) return false;
  if (id.undefined) return correctly_identified == 0;
  // identified/linked * linked/total == identified/total up to rounding.
  return std::abs(id.value() * linking_accuracy(1) - extraction_accuracy()) <= 1e-12;
}

EvalReport BuildReport(const std::vector<PairOutcome> &pairs, const std::vector<size_t> &ns,
                       std::string linker, std::string identifier, bool exact_ci) {
  if (pairs.empty()) throw std::invalid_argument("no pairs to evaluate");
  EvalReport report;
  report.linker = std::move(linker);
  report.identifier = std::move(identifier);
  report.exact_ci = exact_ci;
  report.total_pairs = pairs.size();
  std::vector<size_t> all = ns;
  all.push_back(1);
  for (size_t n : all) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    report.correctly_linked[n] = std::count_if(
        pairs.begin(), pairs.end(), [n](const PairOutcome &p) { return LinkedAt(p, n); });
  }
  report.correctly_identified = std::count_if(pairs.begin(), pairs.end(), Identified);
  return report;
}

std::string EvalReport::ToText() const {
  std::ostringstream out;
  auto ci_line = [&](const std::string &key, size_t k, size_t n) {
    if (n == 0) {
      out << key << ": 0\n";
      return;
    }
    double p = static_cast<double>(k) / static_cast<double>(n);
    out << key << ": " << ExactDouble(BinomialCiHalfwidth(p, n)) << '\n';
    if (exact_ci) {
      Interval iv = ClopperPearson(k, n);
      out << key << "_exact_low: " << ExactDouble(iv.low) << '\n';
      out << key << "_exact_high: " << ExactDouble(iv.high) << '\n';
    }
  };
  out << "linker: " << linker << '\n';
  out << "identifier: " << identifier << '\n';
  out << "exact_ci: " << (exact_ci ? "true" : "false") << '\n';
  out << "total_pairs: " << total_pairs << '\n';
  for (const auto &[n, count] : correctly_linked) {
    out << "correctly_linked@" << n << ": " << count << '\n';
  }
  out << "correctly_identified: " << correctly_identified << '\n';
  for (const auto &[n, count] : correctly_linked) {
    out << "linking_accuracy@" << n << ": " << ExactDouble(linking_accuracy(n)) << '\n';
    ci_line("linking_ci_halfwidth@" + std::to_string(n), count, total_pairs);
  }
  Ratio id = identification();
  out << "identification_accuracy: " << ExactDouble(id.value()) << '\n';
  out << "identification_undefined: " << (id.undefined ? "true" : "false") << '\n';
  ci_line("identification_ci_halfwidth", id.numerator, id.denominator);
  out << "extraction_accuracy: " << ExactDouble(extraction_accuracy()) << '\n';
  ci_line("extraction_ci_halfwidth", correctly_identified, total_pairs);
  out << "decomposition_check: "
      << ExactDouble(id.value() * (correctly_linked.count(1) ? linking_accuracy(1) : 0.0))
      << (DecompositionHolds() ? " ok" : " mismatch") << '\n';
  return out.str();
}

EvalReport EvalReport::ParseText(const std::string &text) {
  EvalReport report;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  auto count = [&](const std::string &value) {
    try {
      size_t used = 0;
      unsigned long long v = std::stoull(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      return static_cast<size_t>(v);
    } catch (const std::exception &) {
      throw DataError(LocatedMessage("<report>", line_no, "invalid count '" + value + "'"));
    }
  };
  while (ReadLine(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    size_t colon = line.find(": ");
    if (colon == std::string::npos) {
      throw DataError(LocatedMessage("<report>", line_no, "expected 'key: value'"));
    }
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 2);
    if (key == "linker") report.linker = value;
    else if (key == "identifier") report.identifier = value;
    else if (key == "exact_ci") report.exact_ci = value == "true";
    else if (key == "total_pairs") report.total_pairs = count(value);
    else if (key == "correctly_identified") report.correctly_identified = count(value);
    else if (key.rfind("correctly_linked@", 0) == 0) {
      report.correctly_linked[count(key.substr(17))] = count(value);
    }
    // Derived values are recomputed from the counts.
  }
  return report;
}

std::string EvalReport::LinkingTable() const {
  std::ostringstream out;
  out << "linker\tn\taccuracy\tci_halfwidth\n";
  for (const auto &[n, count] : correctly_linked) {
    double p = linking_accuracy(n);
    out << linker << '\t' << n << '\t' << FormatDouble(p, 4) << '\t'
        << FormatDouble(total_pairs ? BinomialCiHalfwidth(p, total_pairs) : 0.0, 4) << '\n';
  }
  return out.str();
}

std::string EvalReport::IdentificationTable() const {
  std::ostringstream out;
  out << "identifier\taccuracy_di\taccuracy_de\n";
  out << identifier << '\t' << FormatDouble(identification_accuracy(), 4) << '\t'
      << FormatDouble(extraction_accuracy(), 4) << '\n';
  return out.str();
}

void SavePredictions(const std::filesystem::path &path,
                     const std::vector<PairOutcome> &pairs) {
  std::ofstream out = OpenOutput(path);
  for (const PairOutcome &p : pairs) {
    json j;
    j["id"] = p.id;
    j["gold"] = p.gold;
    j["nbest"] = p.nbest;
    j["chosen"] = p.chosen ? json(*p.chosen) : json(nullptr);
    out << j.dump() << '\n';
  }
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

std::vector<PairOutcome> LoadPredictions(const std::filesystem::path &path) {
  std::ifstream in = OpenInput(path);
  std::vector<PairOutcome> pairs;
  std::string line;
  size_t line_no = 0;
  while (ReadLine(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      PairOutcome p;
      p.id = j.at("id").get<std::string>();
      p.gold = j.at("gold").get<std::string>();
      p.nbest = j.at("nbest").get<std::vector<std::vector<std::string>>>();
      if (j.contains("chosen") && !j["chosen"].is_null()) {
        p.chosen = j["chosen"].get<std::string>();
      }
      pairs.push_back(std::move(p));
    } catch (const json::exception &e) {
      throw DataError(LocatedMessage(path.string(), line_no, e.what()));
    }
  }
  return pairs;
}

}  // namespace denotation
