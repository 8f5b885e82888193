#pragma once

// Entity salience and coherence from a link graph, and the 30-slot
// difficulty feature vector.
//
// Full layout (all groups enabled):
//    0..5   SAL   target, min, max, sum, mean, question-mean  (log-transformed)
//    6..21  TYPE  {min, max, sum, mean} for person, location, organization, other
//   22..25  COH   min, sum, mean, mean over pairs with the answer
//   26..29  TYPE  one-hot coarse type of the answer
// Disabled groups are dropped; the remaining slots keep this relative order.

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kgquiz/kg_store.hpp"

namespace kgq {

class LinkGraph {
 public:
  // Self-loops are dropped and duplicate edges collapse.
  LinkGraph(std::vector<std::pair<EntityId, EntityId>> edges);

  // `source<TAB>target` per line.
  static LinkGraph load(const std::filesystem::path& path);

  const std::vector<std::pair<EntityId, EntityId>>& edges() const { return edges_; }
  std::size_t total_edges() const { return edges_.size(); }

  // Sorted sources linking to e; empty for unknown entities.
  const std::vector<EntityId>& in_links(std::string_view e) const;
  std::size_t indegree(std::string_view e) const { return in_links(e).size(); }

 private:
  std::vector<std::pair<EntityId, EntityId>> edges_;
  std::unordered_map<std::string, std::vector<EntityId>> in_links_;
};

class SalienceTable {
 public:
  SalienceTable() = default;
  explicit SalienceTable(std::unordered_map<std::string, double> phi) : phi_(std::move(phi)) {}

  // 0 for entities without in-links.
  double operator()(std::string_view e) const;
  const std::unordered_map<std::string, double>& values() const { return phi_; }

  // `entity<TAB>phi`, sorted by entity.
  std::string to_tsv() const;

 private:
  std::unordered_map<std::string, double> phi_;
};

// phi(e) = indegree(e) / total_edges. Throws EmptyGraph.
SalienceTable build_salience(const LinkGraph& links);

// Jaccard overlap of in-link sets; 0 when both are empty.
double coherence(std::string_view e1, std::string_view e2, const LinkGraph& links);

enum class FeatureGroup : std::uint8_t { SAL = 1, COH = 2, TYPE = 4 };

// Bit set over FeatureGroup.
struct FeatureGroups {
  std::uint8_t bits = 0;

  static FeatureGroups all() { return {7}; }
  static FeatureGroups none() { return {0}; }
  static FeatureGroups of(bool sal, bool coh, bool type);

  bool has(FeatureGroup g) const { return (bits & static_cast<std::uint8_t>(g)) != 0; }
  std::size_t width() const;

  // Comma-separated group names, e.g. "SAL,TYPE"; "" for none.
  std::string to_string() const;
  // Accepts the to_string() form (case-insensitive); throws InvalidArgument.
  static FeatureGroups parse(std::string_view s);

  friend bool operator==(FeatureGroups, FeatureGroups) = default;
};

inline constexpr std::size_t kFullFeatureWidth = 30;
inline constexpr double kLogFloor = 1e-9;

struct QuestionInstance {
  std::vector<EntityId> question_entities;
  EntityId answer;

  // Deduplicates question entities (keeping first occurrence). Throws
  // EmptyQuestionEntities or InvalidInstance (answer among question entities).
  QuestionInstance(std::vector<EntityId> question, EntityId answer);
};

using FeatureVector = std::vector<double>;

struct FeatureContext {
  const KnowledgeGraph& kg;
  const SalienceTable& salience;
  const LinkGraph& links;
  CoarseRoots roots;
};

// Slot names of the full layout, in order.
const std::array<std::string, kFullFeatureWidth>& feature_slot_names();
std::vector<std::string> feature_slot_names(FeatureGroups groups);

// Full 30-slot vector.
FeatureVector extract_all_features(const QuestionInstance& inst, const FeatureContext& ctx);

// Keeps only the slots of enabled groups.
FeatureVector project_features(const FeatureVector& full, FeatureGroups groups);

FeatureVector extract_features(const QuestionInstance& inst, const FeatureContext& ctx,
                               FeatureGroups groups);

}  // namespace kgq
