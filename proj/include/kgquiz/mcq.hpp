#pragma once

// Multiple-choice questions: distractors come from relaxed versions of the
// question's query, and each distractor is scored by how close the
// difficulty model's P(easy) for it is to that of the true answer.

#include <span>
#include <string>
#include <vector>

#include "kgquiz/difficulty_model.hpp"
#include "kgquiz/kg_store.hpp"
#include "kgquiz/question_gen.hpp"
#include "kgquiz/random.hpp"

namespace kgq {

inline constexpr std::size_t kDefaultAlpha = 10;

struct RelaxedQuery {
  Query query;
  std::vector<TriplePattern> removed_patterns;
  std::optional<TypeId> type_relaxed_to;
  std::size_t distance = 0;  // |answers(relaxed)| - 1
  EntitySet answers;
};

// Every proper subset of instance patterns is dropped in turn, combined with
// replacing the type pattern(s) by the answer's coarse root type (kept as is
// when the answer's coarse type is Other). Relaxations with distance outside
// [1, alpha] are discarded. Throws NoAdmissibleRelaxation.
std::vector<RelaxedQuery> relax(const Query& query, const KnowledgeGraph& kg, std::string_view answer,
                                std::size_t alpha, const CoarseRoots& roots = {});

// Union of the answers of all admissible relaxations, minus the answer.
// Throws NoCandidates.
EntitySet candidate_distractors(const Query& query, const KnowledgeGraph& kg, std::string_view answer,
                                std::size_t alpha, const CoarseRoots& roots = {});

// 1 - |P(easy | answer) - P(easy | distractor)| with the same question entities.
double confusability(const DifficultyModel& model, std::span<const EntityId> question_entities,
                     std::string_view answer, std::string_view distractor, const FeatureContext& ctx);

// Maximum member confusability. Throws EmptyDistractorSet.
double set_confusability(std::span<const double> members);

// Combines question difficulty with distractor-set confusability; a
// confusability of exactly 0.5 counts as low.
Difficulty mcq_difficulty(Difficulty question_difficulty, double set_conf);

struct ScoredDistractor {
  EntityId entity;
  double confusability = 0.0;
};

struct MCQ {
  GeneratedQuestion question;
  std::vector<ScoredDistractor> distractors;
  double set_confusability = 0.0;
  Difficulty overall_difficulty = Difficulty::Hard;
  std::vector<EntityId> choices;  // answer + distractors, shuffled
  std::size_t answer_index = 0;
};

struct McqConfig {
  std::size_t choices = 3;
  Difficulty target = Difficulty::Hard;
  std::size_t alpha = kDefaultAlpha;
};

// Picks the choices-1 most (target hard) or least (target easy) confusable
// candidates, ties broken by entity id. Candidates that already appear as
// question entities are skipped. Throws NoCandidates or
// InsufficientCandidates.
MCQ build_mcq(const GeneratedQuestion& question, const KnowledgeGraph& kg,
              const DifficultyModel& model, const FeatureContext& ctx, const McqConfig& config,
              Rng& rng);

}  // namespace kgq
