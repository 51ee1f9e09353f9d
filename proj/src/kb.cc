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


#include "denotation/kb.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "denotation/errors.h"
#include "denotation/io.h"
#include "denotation/text.h"

namespace denotation {

namespace {

uint64_t PairKey(EntityIndex a, EntityIndex b) {
  uint64_t lo = std::min(ToInt(a), ToInt(b));
  uint64_t hi = std::max(ToInt(a), ToInt(b));
  return (lo << 32) | hi;
}

bool SkippableLine(const std::string &line) {
  return line.empty() || line[0] == '#';
}

}  // namespace

KnowledgeBase KnowledgeBase::Load(const std::filesystem::path &triples_path,
                                  const std::filesystem::path &lexicon_path) {
  std::vector<Entity> lexicon;
  std::unordered_set<std::string> seen;
  {
    const std::string path = lexicon_path.string();
    std::ifstream in = OpenInput(lexicon_path);
    std::string line;
    size_t line_no = 0;
    while (ReadLine(in, line)) {
      ++line_no;
      if (SkippableLine(line)) continue;
      std::vector<std::string> fields = SplitTabs(line);
      if (fields.size() != 2 && fields.size() != 3) {
        throw DataError(LocatedMessage(
            path, line_no,
            "expected 3 tab-separated fields (id, name, aliases), got " +
                std::to_string(fields.size())));
      }
      if (fields[0].empty()) {
        throw DataError(LocatedMessage(path, line_no, "empty entity id"));
      }
      if (fields[1].empty()) {
        throw DataError(LocatedMessage(path, line_no, "empty canonical name"));
      }
      if (!seen.insert(fields[0]).second) {
        throw DataError(LocatedMessage(path, line_no,
                                       "duplicate entity id '" + fields[0] + "'"));
      }
      Entity entity{fields[0], fields[1], {}};
      if (fields.size() == 3 && !fields[2].empty()) {
        size_t start = 0;
        while (start <= fields[2].size()) {
          size_t end = fields[2].find('|', start);
          if (end == std::string::npos) end = fields[2].size();
          if (end > start) entity.aliases.push_back(fields[2].substr(start, end - start));
          start = end + 1;
        }
      }
      lexicon.push_back(std::move(entity));
    }
  }

  std::vector<TripleRecord> triples;
  {
    const std::string path = triples_path.string();
    std::ifstream in = OpenInput(triples_path);
    std::string line;
    size_t line_no = 0;
    while (ReadLine(in, line)) {
      ++line_no;
      if (SkippableLine(line)) continue;
      std::vector<std::string> fields = SplitTabs(line);
      if (fields.size() != 3) {
        throw DataError(LocatedMessage(
            path, line_no,
            "expected 3 tab-separated fields (subject, relation, object), got " +
                std::to_string(fields.size())));
      }
      for (const std::string &field : fields) {
        if (field.empty()) {
          throw DataError(LocatedMessage(path, line_no, "empty triple field"));
        }
      }
      triples.push_back({fields[0], fields[1], fields[2]});
    }
  }
  return Build(std::move(lexicon), triples);
}

KnowledgeBase KnowledgeBase::Build(std::vector<Entity> lexicon,
                                   const std::vector<TripleRecord> &triples) {
  KnowledgeBase kb;
  kb.entities_ = std::move(lexicon);
  for (size_t i = 0; i < kb.entities_.size(); ++i) {
    const Entity &e = kb.entities_[i];
    if (e.id.empty()) throw DataError("entity with empty id");
    if (e.canonical_name.empty()) {
      throw DataError("entity '" + e.id + "' has an empty canonical name");
    }
    if (!kb.by_id_.emplace(e.id, EntityIndex{static_cast<uint32_t>(i)}).second) {
      throw DataError("duplicate entity id '" + e.id + "'");
    }
  }

  auto resolve = [&kb](const std::string &id) {
    auto it = kb.by_id_.find(id);
    if (it != kb.by_id_.end()) return it->second;
    EntityIndex e{static_cast<uint32_t>(kb.entities_.size())};
    kb.entities_.push_back({id, id, {}});
    kb.by_id_.emplace(id, e);
    return e;
  };

  std::map<std::string, uint32_t, std::less<>> relation_ids;
  kb.triples_.reserve(triples.size());
  for (const TripleRecord &t : triples) {
    if (t.subject.empty() || t.object.empty()) {
      throw DataError("triple with an empty entity id");
    }
    if (t.relation.empty()) throw DataError("triple with an empty relation");
    auto [it, inserted] = relation_ids.emplace(
        t.relation, static_cast<uint32_t>(kb.relations_.size()));
    if (inserted) kb.relations_.push_back(t.relation);
    EntityIndex s = resolve(t.subject);
    EntityIndex o = resolve(t.object);
    kb.triples_.push_back({s, it->second, o});
  }
  kb.Index();
  return kb;
}

void KnowledgeBase::Index() {
  adjacency_.assign(entities_.size(), {});
  for (const Triple &t : triples_) {
    adjacency_[ToInt(t.subject)].push_back({t.relation, t.object});
    adjacency_[ToInt(t.object)].push_back({t.relation, t.subject});
    if (t.subject != t.object) ++pair_counts_[PairKey(t.subject, t.object)];
  }

  for (size_t i = 0; i < entities_.size(); ++i) {
    EntityIndex e{static_cast<uint32_t>(i)};
    auto add = [&](const std::string &name) {
      std::vector<EntityIndex> &bucket = surface_index_[NormalizeText(name)];
      if (bucket.empty() || bucket.back() != e) bucket.push_back(e);
    };
    add(entities_[i].canonical_name);
    for (const std::string &alias : entities_[i].aliases) add(alias);
  }

  // Deterministic order of forms inside each length bucket.
  std::vector<const std::string *> keys;
  keys.reserve(surface_index_.size());
  for (const auto &[key, unused] : surface_index_) keys.push_back(&key);
  std::sort(keys.begin(), keys.end(),
            [](const std::string *a, const std::string *b) { return *a < *b; });
  for (const std::string *key : keys) {
    std::u32string text = DecodeUtf8(*key);
    if (text.size() >= forms_by_length_.size()) {
      forms_by_length_.resize(text.size() + 1);
    }
    size_t length = text.size();
    forms_by_length_[length].push_back(
        {std::move(text), surface_index_.at(*key)});
  }
}

std::optional<EntityIndex> KnowledgeBase::Find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

EntityIndex KnowledgeBase::Require(std::string_view id) const {
  std::optional<EntityIndex> e = Find(id);
  if (!e) throw std::invalid_argument("unknown entity id '" + std::string(id) + "'");
  return *e;
}

size_t KnowledgeBase::RelationCount(EntityIndex a, EntityIndex b) const {
  if (a == b) {
    throw std::invalid_argument("relation count requires two distinct entities");
  }
  auto it = pair_counts_.find(PairKey(a, b));
  return it == pair_counts_.end() ? 0 : it->second;
}

size_t KnowledgeBase::RelationCount(std::string_view a, std::string_view b) const {
  return RelationCount(Require(a), Require(b));
}

std::span<const EntityIndex> KnowledgeBase::SurfaceEntities(
    std::string_view normalized) const {
  auto it = surface_index_.find(std::string(normalized));
  if (it == surface_index_.end()) return {};
  return it->second;
}

std::vector<SurfaceMatch> KnowledgeBase::LookupSurface(
    std::string_view surface, double max_normalized_distance) const {
  std::u32string query = DecodeUtf8(NormalizeText(surface));
  if (query.empty()) throw std::invalid_argument("empty surface form");
  const double threshold = std::clamp(max_normalized_distance, 0.0, 1.0);
  const size_t q = query.size();

  std::unordered_map<uint32_t, double> best;
  for (size_t length = 0; length < forms_by_length_.size(); ++length) {
    const size_t longest = std::max(length, q);
    const size_t allowed =
        static_cast<size_t>(std::floor(threshold * static_cast<double>(longest) + 1e-9));
    const size_t gap = length > q ? length - q : q - length;
    if (gap > allowed) continue;
    for (const SurfaceForm &form : forms_by_length_[length]) {
      size_t d = EditDistance(query, form.text, allowed);
      if (d > allowed) continue;
      double distance = static_cast<double>(d) / static_cast<double>(longest);
      for (EntityIndex e : form.entities) {
        auto [it, inserted] = best.emplace(ToInt(e), distance);
        if (!inserted && distance < it->second) it->second = distance;
      }
    }
  }

  std::vector<SurfaceMatch> matches;
  matches.reserve(best.size());
  for (const auto &[e, distance] : best) {
    matches.push_back({EntityIndex{e}, distance});
  }
  std::sort(matches.begin(), matches.end(),
            [this](const SurfaceMatch &a, const SurfaceMatch &b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              size_t pa = Popularity(a.entity), pb = Popularity(b.entity);
              if (pa != pb) return pa > pb;
              return id(a.entity) < id(b.entity);
            });
  return matches;
}

}  // namespace denotation
