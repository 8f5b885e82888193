#pragma once

// In-memory knowledge graph: instance facts, a subClassOf type hierarchy
// and single-variable triple-pattern query evaluation.
//
// File format (UTF-8 TSV, one fact per line):
//   subject <TAB> predicate <TAB> object
// Lines starting with '#' and blank lines are ignored. The predicates `type`
// and `subClassOf` are reserved and feed the type system. An object wrapped
// in double quotes is a literal; everything else is an item id.
//
// The graph is immutable once built and every accessor is const, so a single
// instance can be shared across threads.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kgq {

using EntityId = std::string;
using TypeId = std::string;
using PredId = std::string;

// Sorted, duplicate-free list of entity ids.
using EntitySet = std::vector<EntityId>;

inline constexpr std::string_view kTypePredicate = "type";
inline constexpr std::string_view kSubClassOfPredicate = "subClassOf";

struct Fact {
  EntityId subject;
  PredId predicate;
  std::string object;
  bool object_is_literal = false;

  friend auto operator<=>(const Fact&, const Fact&) = default;
  friend bool operator==(const Fact&, const Fact&) = default;
};

enum class CoarseType { Person, Location, Organization, Other };

inline constexpr CoarseType kAllCoarseTypes[] = {CoarseType::Person, CoarseType::Location,
                                                 CoarseType::Organization, CoarseType::Other};

std::string_view to_string(CoarseType t);

// Root type ids of the three named coarse types.
struct CoarseRoots {
  TypeId person = "person";
  TypeId location = "location";
  TypeId organization = "organization";

  // Root id for a named coarse type; nullopt for Other.
  std::optional<TypeId> root(CoarseType t) const;
};

// One position of a triple pattern.
struct Term {
  enum class Kind { Variable, Item, Literal };

  Kind kind = Kind::Item;
  std::string value;

  static Term variable(std::string name) { return {Kind::Variable, std::move(name)}; }
  static Term item(std::string id) { return {Kind::Item, std::move(id)}; }
  static Term literal(std::string v) { return {Kind::Literal, std::move(v)}; }

  bool is_variable() const { return kind == Kind::Variable; }

  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;
};

enum class PatternKind { Type, SP, PO };

struct TriplePattern {
  Term subject;
  PredId predicate;
  Term object;

  // TYPE iff the predicate is `type`; PO iff the subject is the variable;
  // SP iff the object is the variable.
  PatternKind kind() const;

  // The non-variable item of an instance pattern (object for PO, subject for SP).
  const Term& ground() const;

  static TriplePattern type_of(std::string var, TypeId type);
  static TriplePattern po(std::string var, PredId pred, Term object);
  static TriplePattern sp(EntityId subject, PredId pred, std::string var);

  friend auto operator<=>(const TriplePattern&, const TriplePattern&) = default;
  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

// Conjunction of patterns over a single variable.
struct Query {
  std::vector<TriplePattern> patterns;
  std::string variable = "x";

  // Throws MalformedQuery unless every pattern uses exactly this variable in
  // exactly one position, TYPE patterns have the shape (?v type t), and no
  // pattern uses `subClassOf`.
  void validate() const;

  std::vector<TriplePattern> type_patterns() const;
  std::vector<TriplePattern> instance_patterns() const;

  friend bool operator==(const Query&, const Query&) = default;
};

class KnowledgeGraph {
 public:
  class Builder {
   public:
    // Adds one raw triple. Routing into type facts, subclass edges or
    // instance facts happens here; structural checks run in build().
    void add(std::string_view subject, std::string_view predicate, std::string_view object);

    // Parses one TSV line; comments and blank lines are skipped.
    void add_line(std::string_view line, std::size_t line_no);

    // Throws CyclicHierarchy or UnknownType.
    KnowledgeGraph build() &&;

   private:
    std::vector<Fact> facts_;
    std::vector<std::pair<EntityId, TypeId>> type_facts_;
    std::vector<std::pair<TypeId, TypeId>> subclass_edges_;
    std::vector<std::string> literal_types_;
  };

  static KnowledgeGraph load(const std::filesystem::path& path);
  static KnowledgeGraph parse(std::istream& in);

  const std::vector<Fact>& facts() const { return facts_; }
  const std::vector<std::pair<EntityId, TypeId>>& type_facts() const { return type_facts_; }
  const std::vector<std::pair<TypeId, TypeId>>& subclass_edges() const { return subclass_edges_; }
  const std::vector<EntityId>& entities() const { return entities_; }
  const std::vector<TypeId>& types() const { return types_; }

  bool has_entity(std::string_view e) const;
  bool has_type(std::string_view t) const;

  // Reflexive-transitive closure over subClassOf. Throws UnknownType.
  bool is_subtype(std::string_view sub, std::string_view super) const;

  // All types of e, closed upward over subClassOf, sorted. Throws UnknownEntity.
  const std::vector<TypeId>& entity_types(std::string_view e) const;
  const std::vector<TypeId>& direct_types(std::string_view e) const;

  // Every supertype of t including t itself, sorted. Throws UnknownType.
  const std::vector<TypeId>& supertypes(std::string_view t) const;

  // Length of the longest subClassOf path from t to a root. Throws UnknownType.
  std::size_t type_depth(std::string_view t) const;

  // Entities that are (transitively) instances of t; sorted.
  const EntitySet& instances_of(std::string_view t) const;

  // Indices into facts() where e is the subject / the (item) object.
  std::span<const std::size_t> facts_with_subject(std::string_view e) const;
  std::span<const std::size_t> facts_with_object(std::string_view e) const;

  // Subjects s with (s p o) a fact; o is matched as literal or item per `object`.
  const EntitySet& subjects_of(std::string_view pred, const Term& object) const;
  // Item objects o with (s p o) a fact.
  const EntitySet& objects_of(std::string_view subject, std::string_view pred) const;

  // Set of entities that satisfy every pattern. Throws MalformedQuery.
  EntitySet evaluate(const Query& q) const;

  // TSV serialization accepted by load(): subclass edges, type facts, then
  // instance facts, each block sorted.
  void write(std::ostream& out) const;

 private:
  KnowledgeGraph() = default;

  std::vector<Fact> facts_;
  std::vector<std::pair<EntityId, TypeId>> type_facts_;
  std::vector<std::pair<TypeId, TypeId>> subclass_edges_;
  std::vector<EntityId> entities_;
  std::vector<TypeId> types_;

  std::unordered_map<std::string, std::vector<TypeId>> direct_types_;
  std::unordered_map<std::string, std::vector<TypeId>> entity_types_;
  std::unordered_map<std::string, std::vector<TypeId>> supertypes_;
  std::unordered_map<std::string, std::size_t> type_depth_;
  std::unordered_map<std::string, EntitySet> instances_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_subject_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_object_;
  std::unordered_map<std::string, EntitySet> by_pred_object_;
  std::unordered_map<std::string, EntitySet> by_subject_pred_;
};

// First of person > location > organization whose root is among the
// entity's types; Other otherwise. Throws UnknownEntity.
CoarseType coarse_type(const KnowledgeGraph& kg, std::string_view e,
                       const CoarseRoots& roots = {});

struct Topic {
  std::string name;
  EntitySet members;
};

// One entity id per line; blank lines and '#' comments are skipped.
// Throws UnknownEntity (with line number) or EmptyTopic.
Topic load_topic(const std::filesystem::path& path, const KnowledgeGraph& kg);

}  // namespace kgq
