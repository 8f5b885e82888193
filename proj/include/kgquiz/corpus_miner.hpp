#pragma once

// Lexicon mining over an entity-annotated corpus.
//
// Corpus format: one sentence per line, entity mentions written inline as
// `[surface text|EntityId]`. Everything outside brackets is split on
// whitespace; a bracket also ends the current word.
//
// Three products:
//   * type salience s(t,e) from Hearst-style patterns,
//   * predicate paraphrases from sentences that mention both ends of a fact,
//     scored with normalized PMI,
//   * entity surface forms with counts.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "kgquiz/kg_store.hpp"

namespace kgq {

struct Word {
  std::string text;
  friend bool operator==(const Word&, const Word&) = default;
};

struct EntityMention {
  std::string surface;
  EntityId entity;
  friend bool operator==(const EntityMention&, const EntityMention&) = default;
};

using Token = std::variant<Word, EntityMention>;

struct AnnotatedSentence {
  std::vector<Token> tokens;

  std::size_t mention_count() const;
};

// Throws UnbalancedBracket (with byte offset), EmptyEntityId or EmptySurface.
AnnotatedSentence parse_corpus_line(std::string_view line);

// Blank lines are skipped. Parse errors carry the line number.
std::vector<AnnotatedSentence> load_corpus(const std::filesystem::path& path);

// Maps lowercase lemmas to candidate KG types, and back.
class TypeLexicon {
 public:
  void add(std::string lemma, TypeId type);

  // `lemma<TAB>TypeId` per line. Throws MalformedLine, or UnknownType when a
  // type is not registered in `kg`.
  static TypeLexicon load(const std::filesystem::path& path, const KnowledgeGraph& kg);

  const std::set<TypeId>* candidates(std::string_view lemma) const;
  const std::set<std::string>* lemmas(std::string_view type) const;
  const std::map<std::string, std::set<TypeId>>& entries() const { return by_lemma_; }

 private:
  std::map<std::string, std::set<TypeId>> by_lemma_;
  std::map<TypeId, std::set<std::string>, std::less<>> by_type_;
};

struct TypeSalienceTable {
  struct Row {
    std::map<TypeId, double> salience;
    std::map<TypeId, std::size_t> counts;
  };
  std::map<EntityId, Row, std::less<>> rows;

  const Row* find(std::string_view e) const;

  // Builds normalized rows from raw (entity, type) counts.
  static TypeSalienceTable from_counts(const std::map<std::pair<EntityId, TypeId>, std::size_t>& counts);

  // `entity<TAB>type<TAB>salience`, sorted by entity then type.
  std::string to_tsv() const;
  static TypeSalienceTable load(const std::filesystem::path& path);
};

enum class Orientation { SubjectFirst, ObjectFirst };

std::string_view to_string(Orientation o);

struct ScoredPhrase {
  std::string phrase;
  double npmi = 0.0;
  friend bool operator==(const ScoredPhrase&, const ScoredPhrase&) = default;
};

struct PredicateLexicon {
  static constexpr std::size_t kMaxPhrases = 5;
  static constexpr std::size_t kMaxPhraseChars = 50;

  // Each list sorted by npmi descending, then phrase ascending.
  std::map<std::pair<PredId, Orientation>, std::vector<ScoredPhrase>> entries;

  const std::vector<ScoredPhrase>* find(std::string_view pred, Orientation o) const;
  bool has_any(std::string_view pred) const;

  // `predicate<TAB>orientation<TAB>phrase<TAB>npmi`.
  std::string to_tsv() const;
  static PredicateLexicon load(const std::filesystem::path& path);
};

struct SurfaceForm {
  std::string surface;
  std::size_t count = 0;
  friend bool operator==(const SurfaceForm&, const SurfaceForm&) = default;
};

struct EntityLexicon {
  static constexpr std::size_t kMaxForms = 5;

  // Each list sorted by count descending, then surface ascending.
  std::map<EntityId, std::vector<SurfaceForm>, std::less<>> entries;

  const std::vector<SurfaceForm>* find(std::string_view e) const;

  // `entity<TAB>surface<TAB>count`.
  std::string to_tsv() const;
  static EntityLexicon load(const std::filesystem::path& path);
};

// Plural stripping used on TYPE words: the word itself, then without a
// trailing "es", then without a trailing "s". Returns the first form known
// to the lexicon.
std::optional<std::string> lemmatize_type_word(std::string_view word, const TypeLexicon& lex);

// Among the lemma's candidates that are types of e, the deepest one in the
// hierarchy (ties: smallest id).
std::optional<TypeId> disambiguate_type(std::string_view lemma, std::string_view e,
                                        const TypeLexicon& lex, const KnowledgeGraph& kg);

// Raw (entity, type) observation counts from Hearst patterns.
std::map<std::pair<EntityId, TypeId>, std::size_t> count_type_observations(
    const std::vector<AnnotatedSentence>& corpus, const KnowledgeGraph& kg, const TypeLexicon& lex);

TypeSalienceTable mine_type_salience(const std::vector<AnnotatedSentence>& corpus,
                                     const KnowledgeGraph& kg, const TypeLexicon& lex);

// Normalized PMI with natural log. Returns 1.0 when joint == total (the
// normalizer -log p(x,y) vanishes). Throws InvalidArgument on inconsistent
// counts.
double npmi(std::size_t joint, std::size_t count_x, std::size_t count_y, std::size_t total);

struct PhraseEvent {
  PredId predicate;
  Orientation orientation;
  std::string phrase;
  friend auto operator<=>(const PhraseEvent&, const PhraseEvent&) = default;
};

// Every (predicate, orientation, phrase) extraction, one entry per
// (sentence, mention pair, fact). Phrases over the character cap are dropped.
std::vector<PhraseEvent> extract_phrase_events(const std::vector<AnnotatedSentence>& corpus,
                                               const KnowledgeGraph& kg, std::size_t max_gap);

PredicateLexicon mine_predicate_phrases(const std::vector<AnnotatedSentence>& corpus,
                                        const KnowledgeGraph& kg, std::size_t max_gap = 6);

EntityLexicon mine_surface_forms(const std::vector<AnnotatedSentence>& corpus);

}  // namespace kgq
