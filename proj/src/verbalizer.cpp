#include "kgquiz/verbalizer.hpp"

#include <cctype>
#include <iterator>

#include "kgquiz/error.hpp"
#include "kgquiz/text.hpp"

namespace kgq {
namespace {

template <typename Container>
const auto& pick_uniform(const Container& items, Rng& rng) {
  auto it = items.begin();
  std::advance(it, static_cast<std::ptrdiff_t>(uniform_index(rng, items.size())));
  return *it;
}

std::string render_ground(const Term& t, const VerbalizationBundle& bundle) {
  return t.kind == Term::Kind::Literal ? t.value : bundle.entity_surface(t.value);
}

// "a", "a and b", "a, b and c"
std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += (i + 1 == items.size()) ? " and " : ", ";
    out += items[i];
  }
  return out;
}

}  // namespace

std::string VerbalizationBundle::entity_surface(std::string_view e) const {
  if (const auto* forms = entity_lex.find(e)) return forms->front().surface;
  return text::replace_all(e, '_', ' ');
}

std::string verbalize_triple(const TriplePattern& q, const VerbalizationBundle& bundle, Rng& rng) {
  switch (q.kind()) {
    case PatternKind::Type: {
      const auto* lemmas = bundle.type_lex.lemmas(q.object.value);
      if (lemmas == nullptr || lemmas->empty()) return text::replace_all(q.object.value, '_', ' ');
      return pick_uniform(*lemmas, rng);
    }
    case PatternKind::PO:
    case PatternKind::SP: {
      const bool var_is_subject = q.kind() == PatternKind::PO;
      const std::string other = render_ground(q.ground(), bundle);
      if (const auto* phrases = bundle.pred_lex.find(q.predicate, Orientation::SubjectFirst)) {
        const std::string& phrase = pick_uniform(*phrases, rng).phrase;
        return var_is_subject ? phrase + " " + other : other + " " + phrase;
      }
      if (const auto* phrases = bundle.pred_lex.find(q.predicate, Orientation::ObjectFirst)) {
        const std::string& phrase = pick_uniform(*phrases, rng).phrase;
        return var_is_subject ? other + " " + phrase : phrase + " " + other;
      }
      fail(ErrorKind::MissingLexiconEntry, "no phrase for predicate " + q.predicate);
    }
  }
  fail(ErrorKind::MalformedQuery, "unknown pattern kind");
}

std::string verbalize_query(const Query& query, const VerbalizationBundle& bundle, Rng& rng) {
  std::vector<std::string> types;
  std::vector<std::string> instances;
  for (const auto& p : query.patterns) {
    (p.kind() == PatternKind::Type ? types : instances).push_back(verbalize_triple(p, bundle, rng));
  }
  if (types.empty()) fail(ErrorKind::MalformedQuery, "query has no type pattern to verbalize");

  std::string body = "This " + text::join(types, " and ");
  if (!instances.empty()) body += " " + join_list(instances);
  while (!body.empty() && (body.back() == '.' || body.back() == ' ')) body.pop_back();
  body[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(body[0])));
  return body + ".";
}

}  // namespace kgq
