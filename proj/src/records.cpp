#include "kgquiz/records.hpp"

#include <algorithm>

#include "json.hpp"

#include "kgquiz/error.hpp"

namespace kgq {
namespace {

using json = nlohmann::ordered_json;

std::string term_text(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Variable: return "?" + t.value;
    case Term::Kind::Literal: return "\"" + t.value + "\"";
    case Term::Kind::Item: return t.value;
  }
  return t.value;
}

Term parse_term(const std::string& s) {
  if (s.size() >= 2 && s.front() == '?') return Term::variable(s.substr(1));
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return Term::literal(s.substr(1, s.size() - 2));
  return Term::item(s);
}

json question_json(const GeneratedQuestion& q, std::uint64_t seed) {
  json patterns = json::array();
  for (const auto& p : q.query.patterns) {
    patterns.push_back({term_text(p.subject), p.predicate, term_text(p.object)});
  }
  return json{
      {"query", patterns},
      {"answer", q.answer},
      {"answer_type", q.answer_type},
      {"question_entities", q.question_entities},
      {"p_easy", q.p_easy},
      {"difficulty", std::string(to_string(q.difficulty))},
      {"verbalization", q.verbalization},
      {"seed", seed},
  };
}

}  // namespace

std::string question_record(const GeneratedQuestion& q, std::uint64_t seed) {
  return question_json(q, seed).dump();
}

std::string mcq_record(const MCQ& mcq, std::uint64_t seed) {
  json j = question_json(mcq.question, seed);
  json distractors = json::array();
  for (const auto& d : mcq.distractors) {
    distractors.push_back({{"entity", d.entity}, {"confusability", d.confusability}});
  }
  j["choices"] = mcq.choices;
  j["answer_index"] = mcq.answer_index;
  j["distractors"] = distractors;
  j["set_confusability"] = mcq.set_confusability;
  j["overall_difficulty"] = std::string(to_string(mcq.overall_difficulty));
  return j.dump();
}

GeneratedQuestion parse_question_record(std::string_view line) {
  GeneratedQuestion q;
  try {
    const json j = json::parse(line);
    for (const auto& triple : j.at("query")) {
      if (!triple.is_array() || triple.size() != 3) {
        fail(ErrorKind::MalformedLine, "query patterns must be [s, p, o] triples");
      }
      q.query.patterns.push_back({parse_term(triple[0].get<std::string>()), triple[1].get<std::string>(),
                                  parse_term(triple[2].get<std::string>())});
    }
    for (const auto& p : q.query.patterns) {
      const Term& v = p.subject.is_variable() ? p.subject : p.object;
      if (v.is_variable()) {
        q.query.variable = v.value;
        break;
      }
    }
    q.query.validate();
    q.answer = j.at("answer").get<std::string>();
    q.answer_type = j.at("answer_type").get<std::string>();
    if (j.contains("question_entities")) {
      q.question_entities = j.at("question_entities").get<std::vector<std::string>>();
    } else {
      for (const auto& p : q.query.instance_patterns()) {
        const Term& g = p.ground();
        if (g.kind == Term::Kind::Item &&
            std::find(q.question_entities.begin(), q.question_entities.end(), g.value) ==
                q.question_entities.end()) {
          q.question_entities.push_back(g.value);
        }
      }
    }
    q.p_easy = j.at("p_easy").get<double>();
    q.difficulty = parse_difficulty(j.at("difficulty").get<std::string>());
    q.verbalization = j.value("verbalization", std::string());
  } catch (const json::exception& e) {
    fail(ErrorKind::MalformedLine, std::string("bad question record: ") + e.what());
  }
  return q;
}

}  // namespace kgq
