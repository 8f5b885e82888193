#pragma once

// Query generation with a guaranteed unique answer.
//
// For an answer entity drawn from a topic, an answer type is sampled by type
// salience, then instance facts of the entity are turned into triple
// patterns (?x replaces the entity) and added greedily, in seeded random
// order, until the query's only answer is the entity. Facts whose other
// entity shares a surface word with the answer are never used.

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>

#include "kgquiz/corpus_miner.hpp"
#include "kgquiz/difficulty_model.hpp"
#include "kgquiz/kg_store.hpp"
#include "kgquiz/random.hpp"
#include "kgquiz/stats_features.hpp"
#include "kgquiz/verbalizer.hpp"

namespace kgq {

using Stopwords = std::set<std::string, std::less<>>;

// The built-in list; data/stopwords.txt ships the same words.
const Stopwords& default_stopwords();
// One lowercase word per line.
Stopwords load_stopwords(const std::filesystem::path& path);

struct GenConfig {
  std::size_t max_instance_patterns = 4;
  std::size_t max_type_patterns = 1;
  std::size_t entity_retries = 20;
  std::size_t subset_attempts = 50;
  std::uint64_t seed = 42;

  void validate() const;  // throws InvalidArgument
};

struct GeneratedQuestion {
  Query query;
  EntityId answer;
  TypeId answer_type;
  std::vector<EntityId> question_entities;
  double p_easy = 0.5;
  Difficulty difficulty = Difficulty::Hard;
  std::string verbalization;
};

// Samples t with probability proportional to s(t,e), restricted to types of e
// in the KG. Falls back to a uniform draw over the entity's direct types.
// Throws NoSalientType.
TypeId select_answer_type(std::string_view e, const TypeSalienceTable& salience,
                          const KnowledgeGraph& kg, Rng& rng);

// Lowercased, stopword-free words of every surface form of e (or of its id,
// split on underscores, when the lexicon has none).
std::set<std::string> surface_words(std::string_view e, const EntityLexicon& lex,
                                    const Stopwords& stopwords);

bool surface_overlap(std::string_view e1, std::string_view e2, const EntityLexicon& lex,
                     const Stopwords& stopwords);

// True if some selected type is a subtype of (or equal to) new_type.
bool is_redundant_type(std::string_view new_type, std::span<const TypeId> selected,
                       const KnowledgeGraph& kg);

// Read-only inputs shared by every generation call.
struct GenerationResources {
  const KnowledgeGraph& kg;
  const VerbalizationBundle& bundle;
  const TypeSalienceTable& type_salience;
  const DifficultyModel& model;
  FeatureContext features;
  const Stopwords& stopwords;
};

// Candidate instance patterns for e, sorted: every non-literal fact with e as
// subject (PO) or object (SP) whose other entity does not overlap e and
// whose predicate can be verbalized.
std::vector<TriplePattern> candidate_patterns(std::string_view e, const GenerationResources& res,
                                              std::string_view var = "x");

// Throws EmptyTopic or QueryGenerationFailed.
GeneratedQuestion generate_query(const Topic& topic, const GenerationResources& res,
                                 const GenConfig& config, Rng& rng);

}  // namespace kgq
