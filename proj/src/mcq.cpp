#include "kgquiz/mcq.hpp"

#include <algorithm>
#include <cmath>

#include "kgquiz/error.hpp"

namespace kgq {

std::vector<RelaxedQuery> relax(const Query& query, const KnowledgeGraph& kg, std::string_view answer,
                                std::size_t alpha, const CoarseRoots& roots) {
  query.validate();
  const auto instances = query.instance_patterns();
  const std::size_t n = instances.size();
  if (n > 20) fail(ErrorKind::InvalidArgument, "too many instance patterns to enumerate relaxations");

  std::vector<TriplePattern> type_part;
  std::optional<TypeId> relaxed_to = roots.root(coarse_type(kg, answer, roots));
  if (relaxed_to) {
    type_part.push_back(TriplePattern::type_of(query.variable, *relaxed_to));
  } else {
    type_part = query.type_patterns();
  }

  const std::size_t original = kg.evaluate(query).size();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<RelaxedQuery> out;
  for (std::uint64_t removed = 0; removed <= full; ++removed) {
    if (n > 0 && removed == full) continue;
    RelaxedQuery r;
    r.query.variable = query.variable;
    r.query.patterns = type_part;
    for (std::size_t i = 0; i < n; ++i) {
      if (removed & (std::uint64_t{1} << i)) {
        r.removed_patterns.push_back(instances[i]);
      } else {
        r.query.patterns.push_back(instances[i]);
      }
    }
    if (r.query.patterns.empty()) continue;
    r.type_relaxed_to = relaxed_to;
    r.answers = kg.evaluate(r.query);
    if (r.answers.size() <= original) continue;
    r.distance = r.answers.size() - original;
    if (r.distance > alpha) continue;
    out.push_back(std::move(r));
  }
  if (out.empty()) {
    fail(ErrorKind::NoAdmissibleRelaxation,
         "no relaxation with distance in [1, " + std::to_string(alpha) + "]");
  }
  return out;
}

EntitySet candidate_distractors(const Query& query, const KnowledgeGraph& kg, std::string_view answer,
                                std::size_t alpha, const CoarseRoots& roots) {
  std::vector<RelaxedQuery> relaxed;
  try {
    relaxed = relax(query, kg, answer, alpha, roots);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoAdmissibleRelaxation) throw;
    fail(ErrorKind::NoCandidates, e.what());
  }
  EntitySet pool;
  for (const auto& r : relaxed) pool.insert(pool.end(), r.answers.begin(), r.answers.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  std::erase(pool, std::string(answer));
  if (pool.empty()) fail(ErrorKind::NoCandidates, "relaxations yield no distractor candidates");
  return pool;
}

double confusability(const DifficultyModel& model, std::span<const EntityId> question_entities,
                     std::string_view answer, std::string_view distractor, const FeatureContext& ctx) {
  std::vector<EntityId> q(question_entities.begin(), question_entities.end());
  const double pa = predict_instance(model, QuestionInstance(q, std::string(answer)), ctx);
  const double pd = predict_instance(model, QuestionInstance(q, std::string(distractor)), ctx);
  return std::clamp(1.0 - std::abs(pa - pd), 0.0, 1.0);
}

double set_confusability(std::span<const double> members) {
  if (members.empty()) fail(ErrorKind::EmptyDistractorSet, "distractor set is empty");
  return *std::max_element(members.begin(), members.end());
}

Difficulty mcq_difficulty(Difficulty question_difficulty, double set_conf) {
  if (set_conf < 0.0 || set_conf > 1.0) {
    fail(ErrorKind::InvalidArgument, "confusability must lie in [0, 1]");
  }
  if (question_difficulty == Difficulty::Hard) return Difficulty::Hard;
  return set_conf > 0.5 ? Difficulty::Hard : Difficulty::Easy;
}

MCQ build_mcq(const GeneratedQuestion& question, const KnowledgeGraph& kg,
              const DifficultyModel& model, const FeatureContext& ctx, const McqConfig& config,
              Rng& rng) {
  if (config.choices < 2) fail(ErrorKind::InvalidArgument, "need at least 2 choices");
  const std::size_t needed = config.choices - 1;

  EntitySet pool = candidate_distractors(question.query, kg, question.answer, config.alpha, ctx.roots);
  std::erase_if(pool, [&](const EntityId& e) {
    return std::find(question.question_entities.begin(), question.question_entities.end(), e) !=
           question.question_entities.end();
  });
  if (pool.empty()) fail(ErrorKind::NoCandidates, "every candidate is a question entity");
  if (pool.size() < needed) {
    fail(ErrorKind::InsufficientCandidates, "found " + std::to_string(pool.size()) +
                                                " candidates, need " + std::to_string(needed));
  }

  std::vector<EntityId> q = question.question_entities;
  const double p_answer = predict_instance(model, QuestionInstance(q, question.answer), ctx);
  std::vector<ScoredDistractor> scored;
  scored.reserve(pool.size());
  for (const auto& d : pool) {
    const double p = predict_instance(model, QuestionInstance(q, d), ctx);
    scored.push_back({d, std::clamp(1.0 - std::abs(p_answer - p), 0.0, 1.0)});
  }
  const bool hard = config.target == Difficulty::Hard;
  std::sort(scored.begin(), scored.end(), [&](const ScoredDistractor& a, const ScoredDistractor& b) {
    if (a.confusability != b.confusability) {
      return hard ? a.confusability > b.confusability : a.confusability < b.confusability;
    }
    return a.entity < b.entity;
  });
  scored.resize(needed);

  MCQ mcq;
  mcq.question = question;
  mcq.distractors = std::move(scored);
  std::vector<double> confs;
  for (const auto& d : mcq.distractors) confs.push_back(d.confusability);
  mcq.set_confusability = set_confusability(confs);
  mcq.overall_difficulty = mcq_difficulty(question.difficulty, mcq.set_confusability);

  mcq.choices.push_back(question.answer);
  for (const auto& d : mcq.distractors) mcq.choices.push_back(d.entity);
  shuffle(std::span<EntityId>(mcq.choices), rng);
  mcq.answer_index = static_cast<std::size_t>(
      std::find(mcq.choices.begin(), mcq.choices.end(), question.answer) - mcq.choices.begin());
  return mcq;
}

}  // namespace kgq
