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


#ifndef DENOTATION_KB_H_
#define DENOTATION_KB_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace denotation {

// Dense position of an entity inside one KnowledgeBase. Not stable across
// knowledge bases; use Entity::id for anything persisted.
enum class EntityIndex : uint32_t {};

inline uint32_t ToInt(EntityIndex e) { return static_cast<uint32_t>(e); }

struct Entity {
  std::string id;
  std::string canonical_name;
  std::vector<std::string> aliases;
};

// A triple as it appears in a file, before ids are resolved.
struct TripleRecord {
  std::string subject;
  std::string relation;
  std::string object;
};

struct Triple {
  EntityIndex subject;
  uint32_t relation;
  EntityIndex object;
};

// One adjacency entry: the relation label and the entity at the other end.
struct Neighbor {
  uint32_t relation;
  EntityIndex entity;
};

struct SurfaceMatch {
  EntityIndex entity;
  double distance;
};

inline constexpr double kDefaultEditThreshold = 0.2;

// Immutable triple store with a surface-form index.
//
// Popularity of an entity is the number of triple slots it occupies, so a
// self-loop contributes two. Relation counts treat triples as undirected
// edges and count parallel edges separately.
class KnowledgeBase {
 public:
  // Reads the tab-separated triples and lexicon files. Entities referenced
  // only by triples are created with their id as canonical name.
  static KnowledgeBase Load(const std::filesystem::path &triples_path,
                            const std::filesystem::path &lexicon_path);

  // Builds a knowledge base from in-memory records. Throws DataError on a
  // duplicate entity id, an empty id or canonical name, or an empty
  // relation label.
  static KnowledgeBase Build(std::vector<Entity> lexicon,
                             const std::vector<TripleRecord> &triples);

  size_t num_entities() const { return entities_.size(); }
  size_t num_triples() const { return triples_.size(); }

  const Entity &entity(EntityIndex e) const { return entities_[ToInt(e)]; }
  const std::string &id(EntityIndex e) const { return entity(e).id; }
  std::span<const Entity> entities() const { return entities_; }
  std::span<const Triple> triples() const { return triples_; }
  const std::string &relation_name(uint32_t relation) const {
    return relations_[relation];
  }

  std::optional<EntityIndex> Find(std::string_view id) const;
  // Like Find, but throws std::invalid_argument for an unknown id.
  EntityIndex Require(std::string_view id) const;

  size_t Popularity(EntityIndex e) const { return adjacency_[ToInt(e)].size(); }
  size_t Popularity(std::string_view id) const { return Popularity(Require(id)); }

  // Number of triples between two distinct entities in either direction.
  // Throws std::invalid_argument when a == b.
  size_t RelationCount(EntityIndex a, EntityIndex b) const;
  size_t RelationCount(std::string_view a, std::string_view b) const;

  std::span<const Neighbor> Neighbors(EntityIndex e) const {
    return adjacency_[ToInt(e)];
  }

  // Entities whose normalized name or alias is exactly `normalized`.
  std::span<const EntityIndex> SurfaceEntities(std::string_view normalized) const;
  const std::unordered_map<std::string, std::vector<EntityIndex>> &
  surface_index() const {
    return surface_index_;
  }

  // Every entity with a name or alias within `max_normalized_distance` of
  // `surface`, ordered by ascending distance, then descending popularity,
  // then ascending id. Throws std::invalid_argument for an empty surface.
  std::vector<SurfaceMatch> LookupSurface(std::string_view surface,
                                          double max_normalized_distance) const;

 private:
  struct SurfaceForm {
    std::u32string text;
    std::vector<EntityIndex> entities;
  };

  KnowledgeBase() = default;
  void Index();

  std::vector<Entity> entities_;
  std::vector<Triple> triples_;
  std::vector<std::string> relations_;
  std::unordered_map<std::string, EntityIndex> by_id_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::unordered_map<uint64_t, uint32_t> pair_counts_;
  std::unordered_map<std::string, std::vector<EntityIndex>> surface_index_;
  // Surface forms bucketed by length in code points.
  std::vector<std::vector<SurfaceForm>> forms_by_length_;
};

}  // namespace denotation

#endif  // DENOTATION_KB_H_
