#pragma once

// Deterministic synthetic world used across the test suite: a ~500-fact
// knowledge graph with a person/location/organization hierarchy, an
// annotated corpus with Hearst and relation sentences, a link graph and
// labeled training rows.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kgquiz/corpus_miner.hpp"
#include "kgquiz/difficulty_model.hpp"
#include "kgquiz/kg_store.hpp"
#include "kgquiz/question_gen.hpp"
#include "kgquiz/stats_features.hpp"
#include "kgquiz/verbalizer.hpp"

namespace kgq::testing {

struct SyntheticWorld {
  std::vector<std::string> kg_lines;
  std::vector<std::string> corpus_lines;
  std::vector<std::string> type_lex_lines;
  std::vector<std::pair<EntityId, EntityId>> links;
  std::vector<EntityId> topic;
  std::vector<std::string> training_lines;  // label<TAB>answer<TAB>q1,q2
};

SyntheticWorld make_world(std::uint64_t seed = 7);

// kg.tsv corpus.txt type_lex.tsv links.tsv topic.txt train.tsv
void write_world(const SyntheticWorld& w, const std::filesystem::path& dir);

KnowledgeGraph kg_from_lines(const std::vector<std::string>& lines);
KnowledgeGraph kg_from_text(const std::string& tsv);
TypeLexicon type_lex_from_lines(const std::vector<std::string>& lines);
std::vector<AnnotatedSentence> corpus_from_lines(const std::vector<std::string>& lines);
std::vector<LabeledInstance> training_from_lines(const std::vector<std::string>& lines);

// The world with every lexicon mined and the model trained. Not movable:
// resources() hands out references into it.
class LoadedWorld {
 public:
  explicit LoadedWorld(const SyntheticWorld& w);
  LoadedWorld(const LoadedWorld&) = delete;
  LoadedWorld& operator=(const LoadedWorld&) = delete;

  const SyntheticWorld& source;
  KnowledgeGraph kg;
  LinkGraph links;
  SalienceTable salience;
  std::vector<AnnotatedSentence> corpus;
  VerbalizationBundle bundle;
  TypeSalienceTable type_salience;
  std::vector<LabeledInstance> training;
  DifficultyModel model;
  Topic topic;
  Stopwords stopwords;

  FeatureContext context() const { return {kg, salience, links, {}}; }
  GenerationResources resources() const {
    return {kg, bundle, type_salience, model, context(), stopwords};
  }
};

// The small hand-written presidents example under tests/data/presidents, with the
// SAL-only model from model.json.
class PresidentsWorld {
 public:
  PresidentsWorld();
  PresidentsWorld(const PresidentsWorld&) = delete;
  PresidentsWorld& operator=(const PresidentsWorld&) = delete;

  KnowledgeGraph kg;
  LinkGraph links;
  SalienceTable salience;
  VerbalizationBundle bundle;
  TypeSalienceTable type_salience;
  DifficultyModel model;
  Topic topic;
  Stopwords stopwords;

  FeatureContext context() const { return {kg, salience, links, {}}; }
  GenerationResources resources() const {
    return {kg, bundle, type_salience, model, context(), stopwords};
  }
};

// Built once per process.
const SyntheticWorld& shared_world();
const LoadedWorld& shared_loaded();

// Random query whose patterns come from the facts of a random seed entity,
// mixed with facts of other entities so that empty answers also occur.
Query random_query(const KnowledgeGraph& kg, Rng& rng);

std::filesystem::path test_data_dir();

// Fresh empty directory under the system temp dir.
std::filesystem::path make_temp_dir(const std::string& tag);

std::string read_file(const std::filesystem::path& p);

}  // namespace kgq::testing
