#include "support/fixture.hpp"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "kgquiz/random.hpp"
#include "kgquiz/text.hpp"

namespace kgq::testing {
namespace fs = std::filesystem;

namespace {

struct Entity {
  EntityId id;
  std::string surface;
  std::string short_surface;  // empty when the entity has a single surface
  std::vector<TypeId> types;
  double fame = 0.5;
};

const char* kFirstNames[] = {"Alice",  "Bruno",  "Carla", "Dmitri", "Elena",  "Farid",  "Greta",
                             "Hector", "Ingrid", "Jonas", "Keiko",  "Liam",   "Marta",  "Nadir",
                             "Olga",   "Pavel",  "Quinn", "Rosa",   "Stefan", "Tamsin", "Umar",
                             "Vera",   "Walter", "Xenia", "Yusuf",  "Zora",   "Anton",  "Bianca",
                             "Cyril",  "Dalia",  "Emil",  "Fiona",  "Gideon", "Hana",   "Ivo",
                             "Jade",   "Kurt",   "Lena",  "Milo",   "Nora"};
const char* kLastNames[] = {"Abbott",  "Brandt",  "Castell", "Dorsey",  "Ellery",  "Fenwick", "Galloway",
                            "Holm",    "Ibarra",  "Jessop",  "Kovacs",  "Lindqvist", "Moreau", "Novak",
                            "Okafor",  "Petrov",  "Quintero", "Rask",   "Sorensen", "Tiller",  "Ulrich",
                            "Varga",   "Whitlock", "Yates",  "Zeller",  "Albrecht", "Beaumont", "Crane",
                            "Devlin",  "Eastman"};
const char* kCities[] = {"Ashford",  "Brookvale", "Carrow",  "Dunmere",  "Elmstead", "Fairhollow",
                         "Glenrock", "Harwick",   "Ironbridge", "Juniper Falls", "Kestrel Bay",
                         "Larkspur", "Millbrook", "Northgate", "Oakhaven"};
const char* kStates[] = {"Westmarch", "Eastvale", "Southmoor", "Northreach", "Highland"};
const char* kCountries[] = {"Aldoria", "Brevania"};
const char* kCompanies[] = {"Nimbus Corp",   "Quartzline",  "Helix Dynamics", "Bluefin Labs",
                            "Tern Systems",  "Orchid Media", "Copperleaf",    "Vantage Works",
                            "Solstice Foods", "Meridian Rail"};
const char* kUniversities[] = {"Ardent University", "Beacon College", "Caldwell Institute",
                               "Dovetail University", "Evergreen College", "Foxglove Academy"};
const char* kBands[] = {"The Velvet Tides", "Paper Lanterns", "Static Orchard", "Neon Harbor"};
const char* kAwards[] = {"Golden Lyre", "Silver Quill", "Crystal Globe", "Iron Compass",
                         "Laurel Medal", "Aurora Prize", "Beacon Honor", "Summit Trophy"};
const char* kMovies[] = {"Silent Harbor", "Red Meridian", "Glass Orchard", "Winter Lantern",
                         "Hollow Crown", "Paper Moon Rising", "Distant Shores", "Midnight Ferry",
                         "Copper Sky", "Last Orbit", "Salt and Ember", "Wild Clover",
                         "Northern Static", "Pale Horizon", "Broken Compass"};
const char* kAlbums[] = {"Blue Static", "Echo Garden", "Slow Rivers", "Night Cartography",
                         "Tin Hearts", "Glass Weather", "Low Tide", "Kite Season"};

std::string make_id(std::string_view surface) {
  std::string id;
  for (char c : surface) {
    if (c != ' ') id.push_back(c);
  }
  return id;
}

// Lemmas available for each type; the first is the canonical one.
const std::map<TypeId, std::vector<std::string>>& type_lemmas() {
  static const std::map<TypeId, std::vector<std::string>> m = {
      {"person", {"person"}},
      {"politician", {"politician"}},
      {"president", {"president"}},
      {"senator", {"senator"}},
      {"artist", {"artist"}},
      {"musician", {"musician"}},
      {"singer", {"singer", "vocalist", "star"}},
      {"actor", {"actor", "star"}},
      {"scientist", {"scientist", "researcher"}},
      {"lawyer", {"lawyer", "attorney"}},
      {"location", {"location"}},
      {"city", {"town"}},
      {"state", {"state"}},
      {"country", {"country", "nation"}},
      {"organization", {"organization"}},
      {"company", {"company", "firm"}},
      {"university", {"university", "college"}},
      {"band", {"band"}},
      {"work", {"work"}},
      {"movie", {"movie", "film"}},
      {"album", {"album", "record"}},
      {"award", {"award", "prize"}},
  };
  return m;
}

const std::vector<std::pair<TypeId, TypeId>>& hierarchy() {
  static const std::vector<std::pair<TypeId, TypeId>> h = {
      {"politician", "person"}, {"president", "politician"}, {"senator", "politician"},
      {"artist", "person"},     {"musician", "artist"},      {"singer", "musician"},
      {"actor", "artist"},      {"scientist", "person"},     {"lawyer", "person"},
      {"city", "location"},     {"state", "location"},       {"country", "location"},
      {"company", "organization"}, {"university", "organization"}, {"band", "organization"},
      {"movie", "work"},        {"album", "work"},
  };
  return h;
}

TypeId parent_of(const TypeId& t) {
  for (const auto& [sub, super] : hierarchy()) {
    if (sub == t) return super;
  }
  return {};
}

// Relation phrases per predicate: subject-first, then object-first.
struct Phrases {
  std::vector<std::string> subject_first;
  std::vector<std::string> object_first;
};

const std::map<PredId, Phrases>& relation_phrases() {
  static const std::map<PredId, Phrases> m = {
      {"bornIn", {{"was born in"}, {"is the birthplace of"}}},
      {"livesIn", {{"lives in", "resides in"}, {"is home to"}}},
      {"studiedAt", {{"studied at", "graduated from"}, {"is the alma mater of"}}},
      {"worksFor", {{"works for"}, {"employs"}}},
      {"citizenOf", {{"is a citizen of"}, {"is the homeland of"}}},
      {"won", {{"won the", "received the"}, {"was awarded to"}}},
      {"actedIn", {{"acted in the movie", "starred in"}, {"features"}}},
      {"released", {{"released the album"}, {"is an album by"}}},
      {"memberOf", {{"is a member of"}, {"counts among its members"}}},
      {"represents", {{"represents"}, {"is represented by"}}},
      {"ledCountry", {{"led"}, {"was led by"}}},
      {"marriedTo", {{"is married to"}, {"is the spouse of"}}},
      {"directedBy", {{"was directed by"}, {"directed"}}},
      {"locatedIn", {{"is located in", "lies in", "is based in"}, {"contains"}}},
      {"headquarteredIn", {{"is headquartered in", "is based in"}, {"hosts the headquarters of"}}},
  };
  return m;
}

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[uniform_index(rng, v.size())];
}

bool chance(Rng& rng, double p) { return uniform_unit(rng) < p; }

// Index drawn with probability proportional to weights.
std::size_t weighted_index(const std::vector<double>& weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  double r = uniform_unit(rng) * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (r < weights[i]) return i;
    r -= weights[i];
  }
  return weights.size() - 1;
}

struct Builder {
  Rng rng;
  std::vector<Entity> entities;
  std::map<EntityId, std::size_t> index;
  std::vector<std::array<std::string, 3>> facts;  // instance facts only

  explicit Builder(std::uint64_t seed) : rng(seed) {}

  std::size_t add_entity(std::string surface, std::vector<TypeId> types, double fame,
                         std::string short_surface = {}) {
    Entity e{make_id(surface), std::move(surface), std::move(short_surface), std::move(types), fame};
    index[e.id] = entities.size();
    entities.push_back(std::move(e));
    return entities.size() - 1;
  }

  void fact(const EntityId& s, const PredId& p, const std::string& o) { facts.push_back({s, p, o}); }

  std::string mention(const EntityId& id) {
    const Entity& e = entities[index.at(id)];
    const std::string& surface =
        !e.short_surface.empty() && chance(rng, 0.25) ? e.short_surface : e.surface;
    return "[" + surface + "|" + e.id + "]";
  }
};

std::string article(const std::string& word) {
  return std::string("aeiou").find(word.front()) != std::string::npos ? "an" : "a";
}

std::vector<EntityId> ids_of(const Builder& b, const TypeId& type) {
  std::vector<EntityId> out;
  for (const auto& e : b.entities) {
    if (std::find(e.types.begin(), e.types.end(), type) != e.types.end()) out.push_back(e.id);
  }
  return out;
}

}  // namespace

SyntheticWorld make_world(std::uint64_t seed) {
  Builder b(seed);
  SyntheticWorld w;

  // People. Occupations are dealt in blocks so every type is populated.
  const std::vector<std::pair<TypeId, std::size_t>> occupations = {
      {"president", 4}, {"senator", 6}, {"singer", 8}, {"actor", 8}, {"scientist", 7}, {"lawyer", 7}};
  std::vector<EntityId> people;
  std::size_t next_person = 0;
  std::vector<std::size_t> last_order(std::size(kLastNames));
  for (std::size_t i = 0; i < last_order.size(); ++i) last_order[i] = i;
  shuffle(std::span<std::size_t>(last_order), b.rng);
  for (const auto& [occ, n] : occupations) {
    for (std::size_t k = 0; k < n; ++k, ++next_person) {
      std::string last = kLastNames[last_order[next_person % last_order.size()]];
      std::string name = std::string(kFirstNames[next_person]) + " " + last;
      std::vector<TypeId> types{occ};
      if (occ == "actor" && chance(b.rng, 0.25)) types.push_back("singer");
      if (occ == "lawyer" && chance(b.rng, 0.3)) types.push_back("senator");
      double fame = uniform_unit(b.rng);
      if (occ == "president") fame = 0.7 + 0.3 * fame;
      people.push_back(b.entities[b.add_entity(name, types, fame, last)].id);
    }
  }

  for (const char* c : kCities) b.add_entity(c, {"city"}, 0.2 + 0.6 * uniform_unit(b.rng));
  for (const char* s : kStates) b.add_entity(s, {"state"}, 0.5);
  for (const char* c : kCountries) b.add_entity(c, {"country"}, 0.8);
  for (const char* c : kCompanies) b.add_entity(c, {"company"}, 0.2 + 0.6 * uniform_unit(b.rng));
  for (const char* u : kUniversities) b.add_entity(u, {"university"}, 0.3 + 0.5 * uniform_unit(b.rng));
  for (const char* band : kBands) b.add_entity(band, {"band"}, 0.3 + 0.5 * uniform_unit(b.rng));
  for (const char* a : kAwards) b.add_entity(a, {"award"}, 0.3 + 0.6 * uniform_unit(b.rng));
  for (const char* m : kMovies) b.add_entity(m, {"movie"}, 0.1 + 0.8 * uniform_unit(b.rng));
  for (const char* a : kAlbums) b.add_entity(a, {"album"}, 0.1 + 0.8 * uniform_unit(b.rng));

  const auto cities = ids_of(b, "city");
  const auto states = ids_of(b, "state");
  const auto countries = ids_of(b, "country");
  const auto companies = ids_of(b, "company");
  const auto universities = ids_of(b, "university");
  const auto bands = ids_of(b, "band");
  const auto awards = ids_of(b, "award");
  const auto movies = ids_of(b, "movie");
  const auto albums = ids_of(b, "album");

  // Geography and organizations.
  for (std::size_t i = 0; i < cities.size(); ++i) b.fact(cities[i], "locatedIn", states[i % states.size()]);
  for (std::size_t i = 0; i < states.size(); ++i) b.fact(states[i], "locatedIn", countries[i % countries.size()]);
  for (const auto& c : companies) b.fact(c, "headquarteredIn", pick(cities, b.rng));
  for (const auto& u : universities) b.fact(u, "locatedIn", pick(cities, b.rng));
  for (const auto& band : bands) b.fact(band, "headquarteredIn", pick(cities, b.rng));

  // Person facts.
  std::vector<EntityId> actors;
  for (const auto& p : people) {
    const Entity& e = b.entities[b.index.at(p)];
    const auto types = e.types;
    auto has = [&](const char* t) { return std::find(types.begin(), types.end(), t) != types.end(); };
    b.fact(p, "bornIn", pick(cities, b.rng));
    b.fact(p, "citizenOf", pick(countries, b.rng));
    if (chance(b.rng, 0.7)) b.fact(p, "livesIn", pick(cities, b.rng));
    if (chance(b.rng, 0.8)) b.fact(p, "studiedAt", pick(universities, b.rng));
    if (has("scientist") || has("lawyer") || chance(b.rng, 0.15)) b.fact(p, "worksFor", pick(companies, b.rng));
    std::size_t n_awards = uniform_index(b.rng, 3);
    std::set<EntityId> won;
    for (std::size_t k = 0; k < n_awards; ++k) won.insert(pick(awards, b.rng));
    for (const auto& a : won) b.fact(p, "won", a);
    if (has("actor")) {
      actors.push_back(p);
      std::set<EntityId> in;
      std::size_t n = 2 + uniform_index(b.rng, 2);
      for (std::size_t k = 0; k < n; ++k) in.insert(pick(movies, b.rng));
      for (const auto& m : in) b.fact(p, "actedIn", m);
    }
    if (has("singer")) {
      std::set<EntityId> rel;
      std::size_t n = 1 + uniform_index(b.rng, 2);
      for (std::size_t k = 0; k < n; ++k) rel.insert(pick(albums, b.rng));
      for (const auto& a : rel) b.fact(p, "released", a);
      if (chance(b.rng, 0.5)) b.fact(p, "memberOf", pick(bands, b.rng));
    }
    if (has("senator")) b.fact(p, "represents", pick(states, b.rng));
    if (has("president")) b.fact(p, "ledCountry", pick(countries, b.rng));
    b.fact(p, "birthYear", "\"" + std::to_string(1930 + uniform_index(b.rng, 60)) + "\"");
  }
  for (const auto& m : movies) b.fact(m, "directedBy", pick(actors, b.rng));

  // Marriages; the second spouse of half the couples shares the first's
  // family name, which the overlap filter has to catch.
  std::vector<EntityId> order = people;
  shuffle(std::span<EntityId>(order), b.rng);
  for (std::size_t k = 0; k + 1 < 16; k += 2) {
    b.fact(order[k], "marriedTo", order[k + 1]);
    if (k % 4 == 0) {
      Entity& a = b.entities[b.index.at(order[k])];
      Entity& c = b.entities[b.index.at(order[k + 1])];
      const std::string first(text::split_whitespace(c.surface).front());
      c.short_surface = a.short_surface;
      c.surface = first + " " + a.short_surface;
    }
  }

  // KG lines.
  w.kg_lines.push_back("# synthetic fixture");
  for (const auto& [sub, super] : hierarchy()) w.kg_lines.push_back(sub + "\tsubClassOf\t" + super);
  for (const auto& e : b.entities) {
    for (const auto& t : e.types) w.kg_lines.push_back(e.id + "\ttype\t" + t);
  }
  for (const auto& f : b.facts) w.kg_lines.push_back(f[0] + "\t" + f[1] + "\t" + f[2]);

  // Type lexicon.
  for (const auto& [t, lemmas] : type_lemmas()) {
    for (const auto& l : lemmas) w.type_lex_lines.push_back(l + "\t" + t);
  }

  // Corpus: relation sentences (two per fact), Hearst sentences and noise.
  for (const auto& f : b.facts) {
    if (f[2].front() == '"') continue;
    const auto& ph = relation_phrases().at(f[1]);
    for (int rep = 0; rep < 2; ++rep) {
      if (chance(b.rng, 0.65)) {
        w.corpus_lines.push_back(b.mention(f[0]) + " " + pick(ph.subject_first, b.rng) + " " +
                                 b.mention(f[2]) + " .");
      } else {
        w.corpus_lines.push_back(b.mention(f[2]) + " " + pick(ph.object_first, b.rng) + " " +
                                 b.mention(f[0]) + " .");
      }
    }
  }
  for (const auto& e : b.entities) {
    const bool is_person = std::find(people.begin(), people.end(), e.id) != people.end();
    const std::size_t n = is_person ? 4 : 1;
    for (std::size_t k = 0; k < n; ++k) {
      TypeId t = pick(e.types, b.rng);
      const double r = uniform_unit(b.rng);
      if (is_person && r > 0.7) t = parent_of(t);
      if (is_person && r > 0.9) t = "person";
      const std::string lemma = pick(type_lemmas().at(t), b.rng);
      const std::string plural = lemma + "s";
      const std::string m = b.mention(e.id);
      switch (uniform_index(b.rng, 8)) {
        case 0: w.corpus_lines.push_back(m + " is " + article(lemma) + " " + lemma + " ."); break;
        case 1: w.corpus_lines.push_back(m + " and other " + plural + " attended the ceremony ."); break;
        case 2: w.corpus_lines.push_back(m + " , a " + lemma + " , spoke briefly ."); break;
        case 3: w.corpus_lines.push_back(m + " or other " + plural + " will attend ."); break;
        case 4: w.corpus_lines.push_back("Many " + plural + " such as " + m + " came ."); break;
        case 5: w.corpus_lines.push_back("Famous " + plural + " like " + m + " agreed ."); break;
        case 6: w.corpus_lines.push_back("Several " + plural + " including " + m + " met ."); break;
        default: w.corpus_lines.push_back("Young " + plural + " especially " + m + " voted ."); break;
      }
    }
  }
  for (std::size_t k = 0; k < 20; ++k) {
    const EntityId& a = pick(people, b.rng);
    const EntityId& c = pick(cities, b.rng);
    const EntityId& d = pick(awards, b.rng);
    switch (k % 4) {
      case 0: w.corpus_lines.push_back("The weather was mild that year ."); break;
      case 1: w.corpus_lines.push_back(b.mention(a) + " , according to several long forgotten reports , was born in " + b.mention(c) + " ."); break;
      case 2: w.corpus_lines.push_back(b.mention(a) + " visited " + b.mention(c) + " and " + b.mention(d) + " ."); break;
      default: w.corpus_lines.push_back("Nobody expected " + b.mention(a) + " to talk about " + b.mention(c) + " ."); break;
    }
  }

  // Link graph: targets drawn in proportion to fame, plus fact edges.
  std::vector<double> weights;
  for (const auto& e : b.entities) weights.push_back(0.02 + e.fame * e.fame);
  std::set<std::pair<EntityId, EntityId>> edges;
  for (const auto& e : b.entities) {
    const std::size_t out = 3 + uniform_index(b.rng, 6);
    for (std::size_t k = 0; k < out; ++k) {
      const auto& target = b.entities[weighted_index(weights, b.rng)].id;
      if (target != e.id) edges.insert({e.id, target});
    }
  }
  for (const auto& f : b.facts) {
    if (f[2].front() != '"' && chance(b.rng, 0.5)) edges.insert({f[0], f[2]});
  }
  w.links.assign(edges.begin(), edges.end());

  w.topic = people;

  // Training rows: harder questions ask about less famous answers. Labels
  // are balanced by splitting at the median of fame plus noise.
  std::map<EntityId, std::vector<EntityId>> neighbors;
  for (const auto& f : b.facts) {
    if (f[2].front() == '"') continue;
    neighbors[f[0]].push_back(f[2]);
    neighbors[f[2]].push_back(f[0]);
  }
  struct Row {
    EntityId answer;
    std::vector<EntityId> question;
    double score;
  };
  std::vector<Row> rows;
  for (std::size_t k = 0; k < 200; ++k) {
    const EntityId& answer = pick(people, b.rng);
    auto nb = neighbors[answer];
    shuffle(std::span<EntityId>(nb), b.rng);
    nb.resize(std::min<std::size_t>(nb.size(), 1 + uniform_index(b.rng, 3)));
    const double score = b.entities[b.index.at(answer)].fame + 0.15 * (uniform_unit(b.rng) - 0.5);
    rows.push_back({answer, nb, score});
  }
  std::vector<double> scores;
  for (const auto& r : rows) scores.push_back(r.score);
  std::nth_element(scores.begin(), scores.begin() + scores.size() / 2, scores.end());
  const double median = scores[scores.size() / 2];
  for (const auto& r : rows) {
    w.training_lines.push_back(std::string(r.score >= median ? "easy" : "hard") + "\t" + r.answer + "\t" +
                               text::join(r.question, ","));
  }
  return w;
}

void write_world(const SyntheticWorld& w, const fs::path& dir) {
  fs::create_directories(dir);
  auto write_lines = [&](const char* name, const std::vector<std::string>& lines) {
    std::string s;
    for (const auto& l : lines) s += l + "\n";
    text::write_file_atomic(dir / name, s);
  };
  write_lines("kg.tsv", w.kg_lines);
  write_lines("corpus.txt", w.corpus_lines);
  write_lines("type_lex.tsv", w.type_lex_lines);
  write_lines("topic.txt", w.topic);
  write_lines("train.tsv", w.training_lines);
  std::vector<std::string> links;
  for (const auto& [s, t] : w.links) links.push_back(s + "\t" + t);
  write_lines("links.tsv", links);
}

KnowledgeGraph kg_from_lines(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) s += l + "\n";
  return kg_from_text(s);
}

KnowledgeGraph kg_from_text(const std::string& tsv) {
  std::istringstream in(tsv);
  return KnowledgeGraph::parse(in);
}

TypeLexicon type_lex_from_lines(const std::vector<std::string>& lines) {
  TypeLexicon lex;
  for (const auto& l : lines) {
    auto cols = text::split(l, '\t');
    lex.add(std::string(cols[0]), std::string(cols[1]));
  }
  return lex;
}

std::vector<AnnotatedSentence> corpus_from_lines(const std::vector<std::string>& lines) {
  std::vector<AnnotatedSentence> out;
  for (const auto& l : lines) out.push_back(parse_corpus_line(l));
  return out;
}

std::vector<LabeledInstance> training_from_lines(const std::vector<std::string>& lines) {
  std::vector<LabeledInstance> out;
  for (const auto& l : lines) {
    auto cols = text::split(l, '\t');
    std::vector<EntityId> q;
    for (auto e : text::split(cols[2], ',')) q.emplace_back(e);
    out.push_back({QuestionInstance(std::move(q), std::string(cols[1])), parse_difficulty(cols[0])});
  }
  return out;
}

namespace {

DifficultyModel train_world_model(const std::vector<LabeledInstance>& rows, const FeatureContext& ctx) {
  std::vector<LabeledVector> data;
  for (const auto& r : rows) data.push_back({extract_all_features(r.instance, ctx), r.label});
  return train(data, TrainConfig{});
}

Topic topic_of(const std::vector<EntityId>& members) {
  Topic t{"synthetic", members};
  std::sort(t.members.begin(), t.members.end());
  return t;
}

}  // namespace

LoadedWorld::LoadedWorld(const SyntheticWorld& w)
    : source(w),
      kg(kg_from_lines(w.kg_lines)),
      links(w.links),
      salience(build_salience(links)),
      corpus(corpus_from_lines(w.corpus_lines)),
      bundle{mine_surface_forms(corpus), mine_predicate_phrases(corpus, kg), type_lex_from_lines(w.type_lex_lines)},
      type_salience(mine_type_salience(corpus, kg, bundle.type_lex)),
      training(training_from_lines(w.training_lines)),
      model(train_world_model(training, {kg, salience, links, {}})),
      topic(topic_of(w.topic)),
      stopwords(load_stopwords(KGQ_STOPWORDS_FILE)) {}

namespace {
fs::path presidents_dir() { return fs::path(KGQ_TEST_DATA_DIR) / "presidents"; }
}  // namespace

PresidentsWorld::PresidentsWorld()
    : kg(KnowledgeGraph::load(presidents_dir() / "kg.tsv")),
      links(LinkGraph::load(presidents_dir() / "links.tsv")),
      salience(build_salience(links)),
      bundle{EntityLexicon::load(presidents_dir() / "surface.tsv"), PredicateLexicon::load(presidents_dir() / "pred_lex.tsv"),
             TypeLexicon::load(presidents_dir() / "type_lex.tsv", kg)},
      type_salience(TypeSalienceTable::load(presidents_dir() / "type_salience.tsv")),
      model(DifficultyModel::load(presidents_dir() / "model.json")),
      topic(load_topic(presidents_dir() / "topic.txt", kg)),
      stopwords(load_stopwords(KGQ_STOPWORDS_FILE)) {}

const SyntheticWorld& shared_world() {
  static const SyntheticWorld w = make_world();
  return w;
}

const LoadedWorld& shared_loaded() {
  static const LoadedWorld l(shared_world());
  return l;
}

Query random_query(const KnowledgeGraph& kg, Rng& rng) {
  const auto& facts = kg.facts();
  const auto& ents = kg.entities();
  Query q;
  const std::size_t n = 1 + uniform_index(rng, 3);
  const EntityId seed = ents[uniform_index(rng, ents.size())];
  for (std::size_t i = 0; i < n; ++i) {
    const EntityId e = uniform_index(rng, 4) == 0 ? ents[uniform_index(rng, ents.size())] : seed;
    const auto out = kg.facts_with_subject(e);
    const auto in = kg.facts_with_object(e);
    const auto& types = kg.entity_types(e);
    const std::size_t kind = uniform_index(rng, 3);
    if (kind == 0 && !types.empty()) {
      q.patterns.push_back(TriplePattern::type_of("x", types[uniform_index(rng, types.size())]));
    } else if (kind == 1 && !out.empty()) {
      const Fact& f = facts[out[uniform_index(rng, out.size())]];
      q.patterns.push_back(TriplePattern::po(
          "x", f.predicate, f.object_is_literal ? Term::literal(f.object) : Term::item(f.object)));
    } else if (!in.empty()) {
      const Fact& f = facts[in[uniform_index(rng, in.size())]];
      q.patterns.push_back(TriplePattern::sp(f.subject, f.predicate, "x"));
    } else {
      const auto& t = kg.types()[uniform_index(rng, kg.types().size())];
      q.patterns.push_back(TriplePattern::type_of("x", t));
    }
  }
  return q;
}

fs::path test_data_dir() { return KGQ_TEST_DATA_DIR; }

fs::path make_temp_dir(const std::string& tag) {
  static std::size_t counter = 0;
  fs::path dir = fs::temp_directory_path() /
                 ("kgquiz_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace kgq::testing
