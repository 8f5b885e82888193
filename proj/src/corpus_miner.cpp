#include "kgquiz/corpus_miner.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "kgquiz/error.hpp"
#include "kgquiz/text.hpp"

namespace kgq {
namespace {

const Word* as_word(const Token& t) { return std::get_if<Word>(&t); }
const EntityMention* as_mention(const Token& t) { return std::get_if<EntityMention>(&t); }

bool word_is(const std::vector<Token>& toks, std::size_t i, std::string_view w) {
  if (i >= toks.size()) return false;
  const Word* word = as_word(toks[i]);
  return word != nullptr && word->text == w;
}

// Lowercases a candidate TYPE word and drops trailing punctuation.
std::string normalize_type_word(std::string_view w) {
  while (!w.empty() && std::string_view(".,;:!?'\")").find(w.back()) != std::string_view::npos) {
    w.remove_suffix(1);
  }
  return text::to_lower(w);
}

double parse_double(std::string_view s, std::size_t line_no) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    fail(ErrorKind::MalformedLine, "line " + std::to_string(line_no) + ": bad number '" +
                                       std::string(s) + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view s, std::size_t line_no) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    fail(ErrorKind::MalformedLine, "line " + std::to_string(line_no) + ": bad count '" +
                                       std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> tsv_columns(std::string_view line, std::size_t expected,
                                          std::size_t line_no) {
  auto cols = text::split(line, '\t');
  if (cols.size() != expected) {
    fail(ErrorKind::MalformedLine, "line " + std::to_string(line_no) + ": expected " +
                                       std::to_string(expected) + " columns");
  }
  return cols;
}

bool skip_line(std::string_view line) {
  return text::trim(line).empty() || line.front() == '#';
}

}  // namespace

std::size_t AnnotatedSentence::mention_count() const {
  return static_cast<std::size_t>(std::count_if(tokens.begin(), tokens.end(), [](const Token& t) {
    return std::holds_alternative<EntityMention>(t);
  }));
}

AnnotatedSentence parse_corpus_line(std::string_view line) {
  AnnotatedSentence out;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) out.tokens.emplace_back(Word{std::move(word)});
    word.clear();
  };

  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == ']') {
      fail(ErrorKind::UnbalancedBracket, "unmatched ']' at position " + std::to_string(i));
    }
    if (c != '[') {
      if (std::isspace(static_cast<unsigned char>(c))) {
        flush();
      } else {
        word.push_back(c);
      }
      continue;
    }
    flush();
    std::size_t close = i + 1;
    while (close < line.size() && line[close] != ']') {
      if (line[close] == '[') {
        fail(ErrorKind::UnbalancedBracket, "nested '[' at position " + std::to_string(close));
      }
      ++close;
    }
    if (close == line.size()) {
      fail(ErrorKind::UnbalancedBracket, "unclosed '[' at position " + std::to_string(i));
    }
    std::string_view body = line.substr(i + 1, close - i - 1);
    std::size_t bar = body.rfind('|');
    std::string_view id = bar == std::string_view::npos ? std::string_view{} : text::trim(body.substr(bar + 1));
    if (id.empty()) {
      fail(ErrorKind::EmptyEntityId, "mention at position " + std::to_string(i) + " has no entity id");
    }
    std::string_view surface = text::trim(body.substr(0, bar));
    if (surface.empty()) {
      fail(ErrorKind::EmptySurface, "mention at position " + std::to_string(i) + " has no surface");
    }
    out.tokens.emplace_back(EntityMention{std::string(surface), std::string(id)});
    i = close;
  }
  flush();
  return out;
}

std::vector<AnnotatedSentence> load_corpus(const std::filesystem::path& path) {
  std::vector<AnnotatedSentence> corpus;
  text::for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    if (text::trim(line).empty()) return;
    try {
      corpus.push_back(parse_corpus_line(line));
    } catch (const Error& e) {
      fail(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  });
  return corpus;
}

// ---------------------------------------------------------------------------
// TypeLexicon

void TypeLexicon::add(std::string lemma, TypeId type) {
  by_type_[type].insert(lemma);
  by_lemma_[std::move(lemma)].insert(std::move(type));
}

TypeLexicon TypeLexicon::load(const std::filesystem::path& path, const KnowledgeGraph& kg) {
  TypeLexicon lex;
  text::for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    if (skip_line(line)) return;
    auto cols = tsv_columns(line, 2, line_no);
    if (!kg.has_type(cols[1])) {
      fail(ErrorKind::UnknownType, "line " + std::to_string(line_no) + ": unknown type " +
                                       std::string(cols[1]));
    }
    lex.add(text::to_lower(text::trim(cols[0])), std::string(cols[1]));
  });
  return lex;
}

const std::set<TypeId>* TypeLexicon::candidates(std::string_view lemma) const {
  auto it = by_lemma_.find(std::string(lemma));
  return it == by_lemma_.end() ? nullptr : &it->second;
}

const std::set<std::string>* TypeLexicon::lemmas(std::string_view type) const {
  auto it = by_type_.find(type);
  return it == by_type_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// TypeSalienceTable

const TypeSalienceTable::Row* TypeSalienceTable::find(std::string_view e) const {
  auto it = rows.find(e);
  return it == rows.end() ? nullptr : &it->second;
}

TypeSalienceTable TypeSalienceTable::from_counts(
    const std::map<std::pair<EntityId, TypeId>, std::size_t>& counts) {
  TypeSalienceTable table;
  for (const auto& [key, n] : counts) {
    if (n == 0) continue;
    table.rows[key.first].counts[key.second] = n;
  }
  for (auto& [e, row] : table.rows) {
    std::size_t total = 0;
    for (const auto& [t, n] : row.counts) total += n;
    for (const auto& [t, n] : row.counts) {
      row.salience[t] = static_cast<double>(n) / static_cast<double>(total);
    }
  }
  return table;
}

std::string TypeSalienceTable::to_tsv() const {
  std::ostringstream out;
  for (const auto& [e, row] : rows) {
    for (const auto& [t, s] : row.salience) {
      out << e << '\t' << t << '\t' << text::format_double(s) << '\n';
    }
  }
  return out.str();
}

TypeSalienceTable TypeSalienceTable::load(const std::filesystem::path& path) {
  TypeSalienceTable table;
  text::for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    if (skip_line(line)) return;
    auto cols = tsv_columns(line, 3, line_no);
    table.rows[std::string(cols[0])].salience[std::string(cols[1])] = parse_double(cols[2], line_no);
  });
  return table;
}

// ---------------------------------------------------------------------------
// PredicateLexicon / EntityLexicon

std::string_view to_string(Orientation o) {
  return o == Orientation::SubjectFirst ? "SubjectFirst" : "ObjectFirst";
}

const std::vector<ScoredPhrase>* PredicateLexicon::find(std::string_view pred, Orientation o) const {
  auto it = entries.find({std::string(pred), o});
  return it == entries.end() || it->second.empty() ? nullptr : &it->second;
}

bool PredicateLexicon::has_any(std::string_view pred) const {
  return find(pred, Orientation::SubjectFirst) != nullptr ||
         find(pred, Orientation::ObjectFirst) != nullptr;
}

std::string PredicateLexicon::to_tsv() const {
  std::ostringstream out;
  for (const auto& [key, phrases] : entries) {
    for (const auto& p : phrases) {
      out << key.first << '\t' << to_string(key.second) << '\t' << p.phrase << '\t'
          << text::format_double(p.npmi) << '\n';
    }
  }
  return out.str();
}

PredicateLexicon PredicateLexicon::load(const std::filesystem::path& path) {
  PredicateLexicon lex;
  text::for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    if (skip_line(line)) return;
    auto cols = tsv_columns(line, 4, line_no);
    Orientation o;
    if (cols[1] == "SubjectFirst") {
      o = Orientation::SubjectFirst;
    } else if (cols[1] == "ObjectFirst") {
      o = Orientation::ObjectFirst;
    } else {
      fail(ErrorKind::MalformedLine, "line " + std::to_string(line_no) + ": bad orientation");
    }
    lex.entries[{std::string(cols[0]), o}].push_back(
        ScoredPhrase{std::string(cols[2]), parse_double(cols[3], line_no)});
  });
  for (auto& [key, phrases] : lex.entries) {
    std::stable_sort(phrases.begin(), phrases.end(), [](const ScoredPhrase& a, const ScoredPhrase& b) {
      return a.npmi != b.npmi ? a.npmi > b.npmi : a.phrase < b.phrase;
    });
  }
  return lex;
}

const std::vector<SurfaceForm>* EntityLexicon::find(std::string_view e) const {
  auto it = entries.find(e);
  return it == entries.end() || it->second.empty() ? nullptr : &it->second;
}

std::string EntityLexicon::to_tsv() const {
  std::ostringstream out;
  for (const auto& [e, forms] : entries) {
    for (const auto& f : forms) out << e << '\t' << f.surface << '\t' << f.count << '\n';
  }
  return out.str();
}

EntityLexicon EntityLexicon::load(const std::filesystem::path& path) {
  EntityLexicon lex;
  text::for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    if (skip_line(line)) return;
    auto cols = tsv_columns(line, 3, line_no);
    lex.entries[std::string(cols[0])].push_back(
        SurfaceForm{std::string(cols[1]), parse_count(cols[2], line_no)});
  });
  for (auto& [e, forms] : lex.entries) {
    std::stable_sort(forms.begin(), forms.end(), [](const SurfaceForm& a, const SurfaceForm& b) {
      return a.count != b.count ? a.count > b.count : a.surface < b.surface;
    });
  }
  return lex;
}

// ---------------------------------------------------------------------------
// Type salience

std::optional<std::string> lemmatize_type_word(std::string_view word, const TypeLexicon& lex) {
  if (word.empty()) return std::nullopt;
  if (lex.candidates(word)) return std::string(word);
  if (word.size() > 2 && word.ends_with("es")) {
    std::string_view stem = word.substr(0, word.size() - 2);
    if (lex.candidates(stem)) return std::string(stem);
  }
  if (word.size() > 1 && word.ends_with("s")) {
    std::string_view stem = word.substr(0, word.size() - 1);
    if (lex.candidates(stem)) return std::string(stem);
  }
  return std::nullopt;
}

std::optional<TypeId> disambiguate_type(std::string_view lemma, std::string_view e,
                                        const TypeLexicon& lex, const KnowledgeGraph& kg) {
  const auto* cands = lex.candidates(lemma);
  if (cands == nullptr || !kg.has_entity(e)) return std::nullopt;
  const auto& types = kg.entity_types(e);
  std::optional<TypeId> best;
  std::size_t best_depth = 0;
  for (const auto& t : *cands) {
    if (!std::binary_search(types.begin(), types.end(), t)) continue;
    std::size_t d = kg.type_depth(t);
    if (!best || d > best_depth) {
      best = t;
      best_depth = d;
    }
  }
  return best;
}

std::map<std::pair<EntityId, TypeId>, std::size_t> count_type_observations(
    const std::vector<AnnotatedSentence>& corpus, const KnowledgeGraph& kg, const TypeLexicon& lex) {
  // ENTITY (is a | is an | , a | and other | or other) TYPE
  static constexpr std::array<std::array<std::string_view, 2>, 5> kAfterEntity{{
      {"is", "a"}, {"is", "an"}, {",", "a"}, {"and", "other"}, {"or", "other"}}};

  std::map<std::pair<EntityId, TypeId>, std::size_t> counts;
  auto observe = [&](const Word& type_word, const EntityId& e) {
    auto lemma = lemmatize_type_word(normalize_type_word(type_word.text), lex);
    if (!lemma) return;
    if (auto t = disambiguate_type(*lemma, e, lex, kg)) ++counts[{e, *t}];
  };

  for (const auto& sentence : corpus) {
    const auto& toks = sentence.tokens;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      const EntityMention* m = as_mention(toks[i]);
      if (m == nullptr) continue;

      for (const auto& trigger : kAfterEntity) {
        if (word_is(toks, i + 1, trigger[0]) && word_is(toks, i + 2, trigger[1]) &&
            i + 3 < toks.size()) {
          if (const Word* w = as_word(toks[i + 3])) observe(*w, m->entity);
        }
      }

      // TYPE (like | such as | including | especially) ENTITY
      if (i >= 2 && (word_is(toks, i - 1, "like") || word_is(toks, i - 1, "including") ||
                     word_is(toks, i - 1, "especially"))) {
        if (const Word* w = as_word(toks[i - 2])) observe(*w, m->entity);
      }
      if (i >= 3 && word_is(toks, i - 2, "such") && word_is(toks, i - 1, "as")) {
        if (const Word* w = as_word(toks[i - 3])) observe(*w, m->entity);
      }
    }
  }
  return counts;
}

TypeSalienceTable mine_type_salience(const std::vector<AnnotatedSentence>& corpus,
                                     const KnowledgeGraph& kg, const TypeLexicon& lex) {
  return TypeSalienceTable::from_counts(count_type_observations(corpus, kg, lex));
}

// ---------------------------------------------------------------------------
// Predicate phrases

double npmi(std::size_t joint, std::size_t count_x, std::size_t count_y, std::size_t total) {
  if (joint == 0 || joint > count_x || joint > count_y || count_x > total || count_y > total) {
    fail(ErrorKind::InvalidArgument, "npmi: inconsistent counts");
  }
  if (joint == total) return 1.0;
  const double n = static_cast<double>(total);
  const double pxy = static_cast<double>(joint) / n;
  const double px = static_cast<double>(count_x) / n;
  const double py = static_cast<double>(count_y) / n;
  // Rounding can push a perfect association a hair past 1.
  return std::clamp(std::log(pxy / (px * py)) / -std::log(pxy), -1.0, 1.0);
}

std::vector<PhraseEvent> extract_phrase_events(const std::vector<AnnotatedSentence>& corpus,
                                               const KnowledgeGraph& kg, std::size_t max_gap) {
  std::vector<PhraseEvent> events;
  const auto& facts = kg.facts();
  for (const auto& sentence : corpus) {
    const auto& toks = sentence.tokens;
    std::vector<std::size_t> mentions;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (as_mention(toks[i]) != nullptr) mentions.push_back(i);
    }
    // Only adjacent mentions qualify: anything between must be plain words.
    for (std::size_t k = 0; k + 1 < mentions.size(); ++k) {
      const std::size_t i = mentions[k];
      const std::size_t j = mentions[k + 1];
      const std::size_t gap = j - i - 1;
      if (gap == 0 || gap > max_gap) continue;
      std::vector<std::string> words;
      for (std::size_t w = i + 1; w < j; ++w) words.push_back(as_word(toks[w])->text);
      std::string phrase = text::join(words, " ");
      if (phrase.size() > PredicateLexicon::kMaxPhraseChars) continue;

      const EntityId& first = as_mention(toks[i])->entity;
      const EntityId& second = as_mention(toks[j])->entity;
      if (first == second) continue;
      for (std::size_t idx : kg.facts_with_subject(first)) {
        const Fact& f = facts[idx];
        if (!f.object_is_literal && f.object == second) {
          events.push_back({f.predicate, Orientation::SubjectFirst, phrase});
        }
      }
      for (std::size_t idx : kg.facts_with_subject(second)) {
        const Fact& f = facts[idx];
        if (!f.object_is_literal && f.object == first) {
          events.push_back({f.predicate, Orientation::ObjectFirst, phrase});
        }
      }
    }
  }
  return events;
}

PredicateLexicon mine_predicate_phrases(const std::vector<AnnotatedSentence>& corpus,
                                        const KnowledgeGraph& kg, std::size_t max_gap) {
  const auto events = extract_phrase_events(corpus, kg, max_gap);

  std::map<std::pair<PredId, Orientation>, std::size_t> key_counts;
  std::map<std::string, std::size_t> phrase_counts;
  std::map<PhraseEvent, std::size_t> joint_counts;
  for (const auto& ev : events) {
    ++key_counts[{ev.predicate, ev.orientation}];
    ++phrase_counts[ev.phrase];
    ++joint_counts[ev];
  }

  PredicateLexicon lex;
  for (const auto& [ev, joint] : joint_counts) {
    double score = npmi(joint, key_counts.at({ev.predicate, ev.orientation}),
                        phrase_counts.at(ev.phrase), events.size());
    if (score > 0.0) lex.entries[{ev.predicate, ev.orientation}].push_back({ev.phrase, score});
  }
  for (auto& [key, phrases] : lex.entries) {
    std::sort(phrases.begin(), phrases.end(), [](const ScoredPhrase& a, const ScoredPhrase& b) {
      return a.npmi != b.npmi ? a.npmi > b.npmi : a.phrase < b.phrase;
    });
    if (phrases.size() > PredicateLexicon::kMaxPhrases) phrases.resize(PredicateLexicon::kMaxPhrases);
  }
  return lex;
}

// ---------------------------------------------------------------------------
// Surface forms

EntityLexicon mine_surface_forms(const std::vector<AnnotatedSentence>& corpus) {
  std::map<EntityId, std::map<std::string, std::size_t>> counts;
  for (const auto& sentence : corpus) {
    for (const auto& tok : sentence.tokens) {
      if (const EntityMention* m = as_mention(tok)) ++counts[m->entity][m->surface];
    }
  }
  EntityLexicon lex;
  for (auto& [e, by_surface] : counts) {
    std::vector<SurfaceForm> forms;
    for (auto& [s, n] : by_surface) forms.push_back({s, n});
    std::sort(forms.begin(), forms.end(), [](const SurfaceForm& a, const SurfaceForm& b) {
      return a.count != b.count ? a.count > b.count : a.surface < b.surface;
    });
    if (forms.size() > EntityLexicon::kMaxForms) forms.resize(EntityLexicon::kMaxForms);
    lex.entries[e] = std::move(forms);
  }
  return lex;
}

}  // namespace kgq
