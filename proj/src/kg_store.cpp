#include "kgquiz/kg_store.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "kgquiz/error.hpp"
#include "kgquiz/text.hpp"

namespace kgq {
namespace {

const EntitySet kEmptySet;
const std::vector<std::size_t> kNoFacts;

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool is_quoted_literal(std::string_view s) {
  return s.size() >= 2 && s.front() == '"' && s.back() == '"';
}

std::string key2(std::string_view a, std::string_view b) {
  std::string k;
  k.reserve(a.size() + b.size() + 1);
  k.append(a);
  k.push_back('\t');
  k.append(b);
  return k;
}

// Literal objects are keyed in their quoted form so they never collide with
// item ids.
std::string object_key(const std::string& value, bool literal) {
  return literal ? "\"" + value + "\"" : value;
}

}  // namespace

std::string_view to_string(CoarseType t) {
  switch (t) {
    case CoarseType::Person: return "person";
    case CoarseType::Location: return "location";
    case CoarseType::Organization: return "organization";
    case CoarseType::Other: return "other";
  }
  return "other";
}

std::optional<TypeId> CoarseRoots::root(CoarseType t) const {
  switch (t) {
    case CoarseType::Person: return person;
    case CoarseType::Location: return location;
    case CoarseType::Organization: return organization;
    case CoarseType::Other: return std::nullopt;
  }
  return std::nullopt;
}

PatternKind TriplePattern::kind() const {
  if (predicate == kTypePredicate) return PatternKind::Type;
  return subject.is_variable() ? PatternKind::PO : PatternKind::SP;
}

const Term& TriplePattern::ground() const {
  return subject.is_variable() ? object : subject;
}

TriplePattern TriplePattern::type_of(std::string var, TypeId type) {
  return {Term::variable(std::move(var)), PredId(kTypePredicate), Term::item(std::move(type))};
}

TriplePattern TriplePattern::po(std::string var, PredId pred, Term object) {
  return {Term::variable(std::move(var)), std::move(pred), std::move(object)};
}

TriplePattern TriplePattern::sp(EntityId subject, PredId pred, std::string var) {
  return {Term::item(std::move(subject)), std::move(pred), Term::variable(std::move(var))};
}

void Query::validate() const {
  if (patterns.empty()) fail(ErrorKind::MalformedQuery, "query has no patterns");
  for (const auto& p : patterns) {
    if (p.predicate == kSubClassOfPredicate) {
      fail(ErrorKind::MalformedQuery, "subClassOf is not allowed in query patterns");
    }
    const bool s_var = p.subject.is_variable();
    const bool o_var = p.object.is_variable();
    if (s_var == o_var) {
      fail(ErrorKind::MalformedQuery,
           s_var ? "pattern binds the variable twice" : "ground pattern (no variable)");
    }
    const Term& var = s_var ? p.subject : p.object;
    if (var.value != variable) {
      fail(ErrorKind::MalformedQuery, "pattern uses variable ?" + var.value + ", expected ?" + variable);
    }
    if (p.subject.kind == Term::Kind::Literal) {
      fail(ErrorKind::MalformedQuery, "literal in subject position");
    }
    if (p.predicate == kTypePredicate && (!s_var || p.object.kind != Term::Kind::Item)) {
      fail(ErrorKind::MalformedQuery, "type pattern must have the form (?v type T)");
    }
  }
}

std::vector<TriplePattern> Query::type_patterns() const {
  std::vector<TriplePattern> out;
  for (const auto& p : patterns) {
    if (p.kind() == PatternKind::Type) out.push_back(p);
  }
  return out;
}

std::vector<TriplePattern> Query::instance_patterns() const {
  std::vector<TriplePattern> out;
  for (const auto& p : patterns) {
    if (p.kind() != PatternKind::Type) out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Builder

void KnowledgeGraph::Builder::add(std::string_view subject, std::string_view predicate,
                                  std::string_view object) {
  const bool literal = is_quoted_literal(object);
  if (predicate == kTypePredicate) {
    if (literal) {
      literal_types_.emplace_back(object);
      return;
    }
    type_facts_.emplace_back(std::string(subject), std::string(object));
  } else if (predicate == kSubClassOfPredicate) {
    if (literal) {
      literal_types_.emplace_back(object);
      return;
    }
    subclass_edges_.emplace_back(std::string(subject), std::string(object));
  } else {
    Fact f;
    f.subject = std::string(subject);
    f.predicate = std::string(predicate);
    f.object = literal ? std::string(object.substr(1, object.size() - 2)) : std::string(object);
    f.object_is_literal = literal;
    facts_.push_back(std::move(f));
  }
}

void KnowledgeGraph::Builder::add_line(std::string_view line, std::size_t line_no) {
  if (text::trim(line).empty() || line.front() == '#') return;
  auto cols = text::split(line, '\t');
  if (cols.size() != 3 || cols[0].empty() || cols[1].empty() || cols[2].empty()) {
    fail(ErrorKind::MalformedLine, "line " + std::to_string(line_no) + ": expected 3 non-empty "
                                   "tab-separated columns, got " + std::to_string(cols.size()));
  }
  if (is_quoted_literal(cols[0])) {
    fail(ErrorKind::MalformedLine, "line " + std::to_string(line_no) + ": literal in subject position");
  }
  add(cols[0], cols[1], cols[2]);
}

KnowledgeGraph KnowledgeGraph::Builder::build() && {
  if (!literal_types_.empty()) {
    fail(ErrorKind::UnknownType, "literal " + literal_types_.front() + " used as a type");
  }

  KnowledgeGraph kg;
  kg.facts_ = std::move(facts_);
  kg.type_facts_ = std::move(type_facts_);
  kg.subclass_edges_ = std::move(subclass_edges_);
  sort_unique(kg.facts_);
  sort_unique(kg.type_facts_);
  sort_unique(kg.subclass_edges_);

  for (const auto& [e, t] : kg.type_facts_) {
    kg.entities_.push_back(e);
    kg.types_.push_back(t);
  }
  for (const auto& [sub, super] : kg.subclass_edges_) {
    kg.types_.push_back(sub);
    kg.types_.push_back(super);
  }
  for (const auto& f : kg.facts_) {
    kg.entities_.push_back(f.subject);
    if (!f.object_is_literal) kg.entities_.push_back(f.object);
  }
  sort_unique(kg.entities_);
  sort_unique(kg.types_);

  // Hierarchy: cycle check, longest-path depth and upward closure in one DFS.
  std::unordered_map<std::string, std::vector<TypeId>> parents;
  for (const auto& [sub, super] : kg.subclass_edges_) parents[sub].push_back(super);

  enum class Mark { Fresh, Active, Done };
  std::unordered_map<std::string, Mark> mark;
  auto visit = [&](auto& self, const TypeId& t) -> void {
    Mark& m = mark[t];
    if (m == Mark::Done) return;
    if (m == Mark::Active) fail(ErrorKind::CyclicHierarchy, "subClassOf cycle through " + t);
    m = Mark::Active;
    std::vector<TypeId> closure{t};
    std::size_t depth = 0;
    auto it = parents.find(t);
    if (it != parents.end()) {
      for (const auto& p : it->second) {
        self(self, p);
        const auto& up = kg.supertypes_.at(p);
        closure.insert(closure.end(), up.begin(), up.end());
        depth = std::max(depth, kg.type_depth_.at(p) + 1);
      }
    }
    sort_unique(closure);
    kg.supertypes_[t] = std::move(closure);
    kg.type_depth_[t] = depth;
    mark[t] = Mark::Done;
  };
  for (const auto& t : kg.types_) visit(visit, t);

  for (const auto& e : kg.entities_) {
    kg.direct_types_[e];
    kg.entity_types_[e];
  }
  for (const auto& [e, t] : kg.type_facts_) kg.direct_types_[e].push_back(t);
  for (auto& [e, direct] : kg.direct_types_) {
    auto& all = kg.entity_types_[e];
    for (const auto& t : direct) {
      const auto& up = kg.supertypes_.at(t);
      all.insert(all.end(), up.begin(), up.end());
    }
    sort_unique(all);
    for (const auto& t : all) kg.instances_[t].push_back(e);
  }
  for (auto& [t, members] : kg.instances_) sort_unique(members);

  for (std::size_t i = 0; i < kg.facts_.size(); ++i) {
    const Fact& f = kg.facts_[i];
    kg.by_subject_[f.subject].push_back(i);
    kg.by_pred_object_[key2(f.predicate, object_key(f.object, f.object_is_literal))].push_back(f.subject);
    if (!f.object_is_literal) {
      kg.by_object_[f.object].push_back(i);
      kg.by_subject_pred_[key2(f.subject, f.predicate)].push_back(f.object);
    }
  }
  for (auto& [k, v] : kg.by_pred_object_) sort_unique(v);
  for (auto& [k, v] : kg.by_subject_pred_) sort_unique(v);
  return kg;
}

// ---------------------------------------------------------------------------
// KnowledgeGraph

KnowledgeGraph KnowledgeGraph::parse(std::istream& in) {
  Builder b;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    b.add_line(line, line_no);
  }
  return std::move(b).build();
}

KnowledgeGraph KnowledgeGraph::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
  return parse(in);
}

bool KnowledgeGraph::has_entity(std::string_view e) const {
  return std::binary_search(entities_.begin(), entities_.end(), e);
}

bool KnowledgeGraph::has_type(std::string_view t) const {
  return std::binary_search(types_.begin(), types_.end(), t);
}

bool KnowledgeGraph::is_subtype(std::string_view sub, std::string_view super) const {
  if (!has_type(super)) fail(ErrorKind::UnknownType, "unknown type " + std::string(super));
  const auto& up = supertypes(sub);
  return std::binary_search(up.begin(), up.end(), super);
}

const std::vector<TypeId>& KnowledgeGraph::entity_types(std::string_view e) const {
  auto it = entity_types_.find(std::string(e));
  if (it == entity_types_.end()) fail(ErrorKind::UnknownEntity, "unknown entity " + std::string(e));
  return it->second;
}

const std::vector<TypeId>& KnowledgeGraph::direct_types(std::string_view e) const {
  auto it = direct_types_.find(std::string(e));
  if (it == direct_types_.end()) fail(ErrorKind::UnknownEntity, "unknown entity " + std::string(e));
  return it->second;
}

const std::vector<TypeId>& KnowledgeGraph::supertypes(std::string_view t) const {
  auto it = supertypes_.find(std::string(t));
  if (it == supertypes_.end()) fail(ErrorKind::UnknownType, "unknown type " + std::string(t));
  return it->second;
}

std::size_t KnowledgeGraph::type_depth(std::string_view t) const {
  auto it = type_depth_.find(std::string(t));
  if (it == type_depth_.end()) fail(ErrorKind::UnknownType, "unknown type " + std::string(t));
  return it->second;
}

const EntitySet& KnowledgeGraph::instances_of(std::string_view t) const {
  auto it = instances_.find(std::string(t));
  return it == instances_.end() ? kEmptySet : it->second;
}

std::span<const std::size_t> KnowledgeGraph::facts_with_subject(std::string_view e) const {
  auto it = by_subject_.find(std::string(e));
  return it == by_subject_.end() ? std::span<const std::size_t>(kNoFacts) : it->second;
}

std::span<const std::size_t> KnowledgeGraph::facts_with_object(std::string_view e) const {
  auto it = by_object_.find(std::string(e));
  return it == by_object_.end() ? std::span<const std::size_t>(kNoFacts) : it->second;
}

const EntitySet& KnowledgeGraph::subjects_of(std::string_view pred, const Term& object) const {
  auto it = by_pred_object_.find(
      key2(pred, object_key(object.value, object.kind == Term::Kind::Literal)));
  return it == by_pred_object_.end() ? kEmptySet : it->second;
}

const EntitySet& KnowledgeGraph::objects_of(std::string_view subject, std::string_view pred) const {
  auto it = by_subject_pred_.find(key2(subject, pred));
  return it == by_subject_pred_.end() ? kEmptySet : it->second;
}

EntitySet KnowledgeGraph::evaluate(const Query& q) const {
  q.validate();
  std::vector<const EntitySet*> candidates;
  candidates.reserve(q.patterns.size());
  for (const auto& p : q.patterns) {
    switch (p.kind()) {
      case PatternKind::Type: candidates.push_back(&instances_of(p.object.value)); break;
      case PatternKind::PO: candidates.push_back(&subjects_of(p.predicate, p.object)); break;
      case PatternKind::SP: candidates.push_back(&objects_of(p.subject.value, p.predicate)); break;
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const EntitySet* a, const EntitySet* b) { return a->size() < b->size(); });

  EntitySet result = *candidates.front();
  EntitySet scratch;
  for (std::size_t i = 1; i < candidates.size() && !result.empty(); ++i) {
    scratch.clear();
    std::set_intersection(result.begin(), result.end(), candidates[i]->begin(),
                          candidates[i]->end(), std::back_inserter(scratch));
    result.swap(scratch);
  }
  return result;
}

void KnowledgeGraph::write(std::ostream& out) const {
  for (const auto& [sub, super] : subclass_edges_) {
    out << sub << '\t' << kSubClassOfPredicate << '\t' << super << '\n';
  }
  for (const auto& [e, t] : type_facts_) {
    out << e << '\t' << kTypePredicate << '\t' << t << '\n';
  }
  for (const auto& f : facts_) {
    out << f.subject << '\t' << f.predicate << '\t' << object_key(f.object, f.object_is_literal)
        << '\n';
  }
}

CoarseType coarse_type(const KnowledgeGraph& kg, std::string_view e, const CoarseRoots& roots) {
  const auto& types = kg.entity_types(e);
  for (CoarseType c : {CoarseType::Person, CoarseType::Location, CoarseType::Organization}) {
    if (std::binary_search(types.begin(), types.end(), *roots.root(c))) return c;
  }
  return CoarseType::Other;
}

Topic load_topic(const std::filesystem::path& path, const KnowledgeGraph& kg) {
  Topic topic;
  topic.name = path.stem().string();
  text::for_each_line(path, [&](std::string_view raw, std::size_t line_no) {
    std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#') return;
    if (!kg.has_entity(line)) {
      fail(ErrorKind::UnknownEntity,
           "line " + std::to_string(line_no) + ": unknown entity " + std::string(line));
    }
    topic.members.emplace_back(line);
  });
  sort_unique(topic.members);
  if (topic.members.empty()) fail(ErrorKind::EmptyTopic, "topic " + path.string() + " is empty");
  return topic;
}

}  // namespace kgq
