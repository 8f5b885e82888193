#pragma once

// Template-based rendering of a query as a declarative quiz question:
//
//   This <type_1> and ... <type_m> <instance_1>, ..., and <instance_l>.
//
// TYPE patterns render a type lemma, PO patterns (?x p o) render
// "<phrase> <o>", SP patterns (s p ?x) render "<s> <phrase>". Phrases come
// from the subject-first list of the predicate; the object-first list is the
// fallback, rendered with the entity on the other side.

#include <string>

#include "kgquiz/corpus_miner.hpp"
#include "kgquiz/kg_store.hpp"
#include "kgquiz/random.hpp"

namespace kgq {

struct VerbalizationBundle {
  EntityLexicon entity_lex;
  PredicateLexicon pred_lex;
  TypeLexicon type_lex;

  // Most frequent surface form, or the id with underscores as spaces.
  std::string entity_surface(std::string_view e) const;

  // True if `pred` can be rendered in at least one orientation.
  bool can_render_predicate(std::string_view pred) const { return pred_lex.has_any(pred); }
};

// Throws MissingLexiconEntry when a predicate has no phrase in either
// orientation.
std::string verbalize_triple(const TriplePattern& q, const VerbalizationBundle& bundle, Rng& rng);

// Throws MalformedQuery when there is no TYPE pattern.
std::string verbalize_query(const Query& query, const VerbalizationBundle& bundle, Rng& rng);

}  // namespace kgq
