#include "kgquiz/question_gen.hpp"

#include <algorithm>
#include <cctype>

#include "kgquiz/error.hpp"
#include "kgquiz/text.hpp"

namespace kgq {
namespace {

void add_words(std::string_view s, const Stopwords& stopwords, std::set<std::string>& out) {
  std::string word;
  auto flush = [&] {
    if (!word.empty() && !stopwords.contains(word)) out.insert(word);
    word.clear();
  };
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || u >= 0x80) {
      word.push_back(static_cast<char>(std::tolower(u)));
    } else {
      flush();
    }
  }
  flush();
}

struct Attempt {
  Query query;
  EntitySet answers;
  std::size_t instance_count = 0;
};

// Greedy construction over one ordering of the candidates. A pattern is kept
// when it is the first instance pattern or when it shrinks the answer set.
Attempt build_attempt(const KnowledgeGraph& kg, const TypeId& answer_type,
                      const std::vector<TriplePattern>& order, const GenConfig& config) {
  Attempt a;
  a.query.patterns.push_back(TriplePattern::type_of(a.query.variable, answer_type));
  std::vector<TypeId> types{answer_type};
  a.answers = kg.evaluate(a.query);
  for (const auto& p : order) {
    if (a.instance_count > 0 && a.answers.size() == 1) break;
    const bool is_type = p.kind() == PatternKind::Type;
    if (is_type) {
      if (types.size() >= config.max_type_patterns) continue;
      if (is_redundant_type(p.object.value, types, kg)) continue;
      // A subtype would turn an already emitted type into a redundant supertype.
      if (std::any_of(types.begin(), types.end(),
                      [&](const TypeId& t) { return kg.is_subtype(p.object.value, t); })) {
        continue;
      }
    } else if (a.instance_count >= config.max_instance_patterns) {
      continue;
    }
    a.query.patterns.push_back(p);
    EntitySet narrowed = kg.evaluate(a.query);
    const bool keep = narrowed.size() < a.answers.size() || (!is_type && a.instance_count == 0);
    if (!keep) {
      a.query.patterns.pop_back();
      continue;
    }
    a.answers = std::move(narrowed);
    if (is_type) {
      types.push_back(p.object.value);
    } else {
      ++a.instance_count;
    }
  }
  return a;
}

}  // namespace

const Stopwords& default_stopwords() {
  static const Stopwords words = {
      "a",    "about", "an",   "and",  "are",  "as",   "at",    "be",    "by",   "de",  "for",
      "from", "has",   "have", "he",   "her",  "his",  "i",     "in",    "into", "is",  "it",
      "its",  "la",    "le",   "mr",   "mrs",  "of",   "on",    "or",    "our",  "she", "so",
      "than", "that",  "the",  "their", "them", "they", "this",  "to",    "was",  "we",  "were",
      "what", "which", "who",  "will", "with", "you"};
  return words;
}

Stopwords load_stopwords(const std::filesystem::path& path) {
  Stopwords words;
  text::for_each_line(path, [&](std::string_view line, std::size_t) {
    auto w = text::trim(line);
    if (!w.empty() && w.front() != '#') words.insert(text::to_lower(w));
  });
  return words;
}

void GenConfig::validate() const {
  if (max_instance_patterns == 0 || max_type_patterns == 0 || entity_retries == 0 ||
      subset_attempts == 0) {
    fail(ErrorKind::InvalidArgument, "generation limits must be positive");
  }
}

TypeId select_answer_type(std::string_view e, const TypeSalienceTable& salience,
                          const KnowledgeGraph& kg, Rng& rng) {
  const auto& types = kg.entity_types(e);
  std::vector<std::pair<TypeId, double>> weighted;
  double total = 0.0;
  if (const auto* row = salience.find(e)) {
    for (const auto& [t, s] : row->salience) {
      if (s > 0.0 && std::binary_search(types.begin(), types.end(), t)) {
        weighted.emplace_back(t, s);
        total += s;
      }
    }
  }
  if (!weighted.empty()) {
    const double u = uniform_unit(rng) * total;
    double acc = 0.0;
    for (const auto& [t, s] : weighted) {
      acc += s;
      if (u < acc) return t;
    }
    return weighted.back().first;
  }
  const auto& direct = kg.direct_types(e);
  if (direct.empty()) {
    fail(ErrorKind::NoSalientType, "entity " + std::string(e) + " has no salient or direct type");
  }
  return direct[uniform_index(rng, direct.size())];
}

std::set<std::string> surface_words(std::string_view e, const EntityLexicon& lex,
                                    const Stopwords& stopwords) {
  std::set<std::string> words;
  if (const auto* forms = lex.find(e)) {
    for (const auto& f : *forms) add_words(f.surface, stopwords, words);
  } else {
    add_words(text::replace_all(e, '_', ' '), stopwords, words);
  }
  return words;
}

bool surface_overlap(std::string_view e1, std::string_view e2, const EntityLexicon& lex,
                     const Stopwords& stopwords) {
  const auto a = surface_words(e1, lex, stopwords);
  const auto b = surface_words(e2, lex, stopwords);
  return std::any_of(a.begin(), a.end(), [&](const std::string& w) { return b.contains(w); });
}

bool is_redundant_type(std::string_view new_type, std::span<const TypeId> selected,
                       const KnowledgeGraph& kg) {
  return std::any_of(selected.begin(), selected.end(),
                     [&](const TypeId& t) { return kg.is_subtype(t, new_type); });
}

std::vector<TriplePattern> candidate_patterns(std::string_view e, const GenerationResources& res,
                                              std::string_view var) {
  std::vector<TriplePattern> out;
  const auto& facts = res.kg.facts();
  auto usable = [&](const Fact& f, const EntityId& other) {
    return other != e && res.bundle.can_render_predicate(f.predicate) &&
           !surface_overlap(e, other, res.bundle.entity_lex, res.stopwords);
  };
  for (std::size_t idx : res.kg.facts_with_subject(e)) {
    const Fact& f = facts[idx];
    if (f.object_is_literal || !usable(f, f.object)) continue;
    out.push_back(TriplePattern::po(std::string(var), f.predicate, Term::item(f.object)));
  }
  for (std::size_t idx : res.kg.facts_with_object(e)) {
    const Fact& f = facts[idx];
    if (!usable(f, f.subject)) continue;
    out.push_back(TriplePattern::sp(f.subject, f.predicate, std::string(var)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

GeneratedQuestion generate_query(const Topic& topic, const GenerationResources& res,
                                 const GenConfig& config, Rng& rng) {
  config.validate();
  if (topic.members.empty()) fail(ErrorKind::EmptyTopic, "topic " + topic.name + " is empty");

  for (std::size_t entity_try = 0; entity_try < config.entity_retries; ++entity_try) {
    const EntityId& e = topic.members[uniform_index(rng, topic.members.size())];

    TypeId answer_type;
    try {
      answer_type = select_answer_type(e, res.type_salience, res.kg, rng);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::NoSalientType) throw;
      continue;
    }

    std::vector<TriplePattern> candidates = candidate_patterns(e, res);
    if (candidates.empty()) continue;
    if (config.max_type_patterns > 1) {
      for (const auto& t : res.kg.direct_types(e)) {
        if (t != answer_type) candidates.push_back(TriplePattern::type_of("x", t));
      }
    }

    for (std::size_t attempt = 0; attempt < config.subset_attempts; ++attempt) {
      std::vector<TriplePattern> order = candidates;
      shuffle(std::span<TriplePattern>(order), rng);
      Attempt a = build_attempt(res.kg, answer_type, order, config);
      if (a.instance_count == 0 || a.answers.size() != 1 || a.answers.front() != e) continue;

      GeneratedQuestion q;
      q.query = std::move(a.query);
      q.answer = e;
      q.answer_type = answer_type;
      for (const auto& p : q.query.instance_patterns()) {
        const Term& g = p.ground();
        if (g.kind == Term::Kind::Item &&
            std::find(q.question_entities.begin(), q.question_entities.end(), g.value) ==
                q.question_entities.end()) {
          q.question_entities.push_back(g.value);
        }
      }
      q.p_easy = predict_instance(res.model, QuestionInstance(q.question_entities, e), res.features);
      q.difficulty = classify_probability(q.p_easy);
      q.verbalization = verbalize_query(q.query, res.bundle, rng);
      return q;
    }
  }
  fail(ErrorKind::QueryGenerationFailed,
       "no unique-answer query found for topic " + topic.name + " after " +
           std::to_string(config.entity_retries) + " entity draws");
}

}  // namespace kgq
