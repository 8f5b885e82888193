#include "kgquiz/stats_features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kgquiz/error.hpp"
#include "kgquiz/text.hpp"

namespace kgq {
namespace {

const std::vector<EntityId> kNoLinks;

struct Stats {
  double min = 0.0, max = 0.0, sum = 0.0, mean = 0.0;
};

Stats summarize(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  for (double x : v) s.sum += x;
  s.mean = s.sum / static_cast<double>(v.size());
  return s;
}

FeatureGroup slot_group(std::size_t slot) {
  if (slot < 6) return FeatureGroup::SAL;
  if (slot < 22) return FeatureGroup::TYPE;
  if (slot < 26) return FeatureGroup::COH;
  return FeatureGroup::TYPE;
}

}  // namespace

// ---------------------------------------------------------------------------
// LinkGraph / salience

LinkGraph::LinkGraph(std::vector<std::pair<EntityId, EntityId>> edges) {
  std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
  for (const auto& [src, dst] : edges_) in_links_[dst].push_back(src);
  for (auto& [dst, srcs] : in_links_) std::sort(srcs.begin(), srcs.end());
}

LinkGraph LinkGraph::load(const std::filesystem::path& path) {
  std::vector<std::pair<EntityId, EntityId>> edges;
  text::for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    if (text::trim(line).empty() || line.front() == '#') return;
    auto cols = text::split(line, '\t');
    if (cols.size() != 2 || cols[0].empty() || cols[1].empty()) {
      fail(ErrorKind::MalformedLine, "line " + std::to_string(line_no) + ": expected source<TAB>target");
    }
    edges.emplace_back(std::string(cols[0]), std::string(cols[1]));
  });
  return LinkGraph(std::move(edges));
}

const std::vector<EntityId>& LinkGraph::in_links(std::string_view e) const {
  auto it = in_links_.find(std::string(e));
  return it == in_links_.end() ? kNoLinks : it->second;
}

double SalienceTable::operator()(std::string_view e) const {
  auto it = phi_.find(std::string(e));
  return it == phi_.end() ? 0.0 : it->second;
}

std::string SalienceTable::to_tsv() const {
  std::vector<std::pair<std::string, double>> rows(phi_.begin(), phi_.end());
  std::sort(rows.begin(), rows.end());
  std::ostringstream out;
  for (const auto& [e, v] : rows) out << e << '\t' << text::format_double(v) << '\n';
  return out.str();
}

SalienceTable build_salience(const LinkGraph& links) {
  if (links.total_edges() == 0) fail(ErrorKind::EmptyGraph, "link graph has no edges");
  std::unordered_map<std::string, std::size_t> indegree;
  for (const auto& [src, dst] : links.edges()) ++indegree[dst];
  std::unordered_map<std::string, double> phi;
  const double total = static_cast<double>(links.total_edges());
  for (const auto& [e, n] : indegree) phi[e] = static_cast<double>(n) / total;
  return SalienceTable(std::move(phi));
}

double coherence(std::string_view e1, std::string_view e2, const LinkGraph& links) {
  const auto& a = links.in_links(e1);
  const auto& b = links.in_links(e2);
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

// ---------------------------------------------------------------------------
// Feature groups

FeatureGroups FeatureGroups::of(bool sal, bool coh, bool type) {
  FeatureGroups g;
  if (sal) g.bits |= static_cast<std::uint8_t>(FeatureGroup::SAL);
  if (coh) g.bits |= static_cast<std::uint8_t>(FeatureGroup::COH);
  if (type) g.bits |= static_cast<std::uint8_t>(FeatureGroup::TYPE);
  return g;
}

std::size_t FeatureGroups::width() const {
  return (has(FeatureGroup::SAL) ? 6 : 0) + (has(FeatureGroup::COH) ? 4 : 0) +
         (has(FeatureGroup::TYPE) ? 20 : 0);
}

std::string FeatureGroups::to_string() const {
  std::vector<std::string> names;
  if (has(FeatureGroup::SAL)) names.emplace_back("SAL");
  if (has(FeatureGroup::COH)) names.emplace_back("COH");
  if (has(FeatureGroup::TYPE)) names.emplace_back("TYPE");
  return text::join(names, ",");
}

FeatureGroups FeatureGroups::parse(std::string_view s) {
  FeatureGroups g;
  if (text::trim(s).empty()) return g;
  for (auto part : text::split(s, ',')) {
    std::string name = text::to_lower(text::trim(part));
    if (name == "sal") {
      g.bits |= static_cast<std::uint8_t>(FeatureGroup::SAL);
    } else if (name == "coh") {
      g.bits |= static_cast<std::uint8_t>(FeatureGroup::COH);
    } else if (name == "type") {
      g.bits |= static_cast<std::uint8_t>(FeatureGroup::TYPE);
    } else {
      fail(ErrorKind::InvalidArgument, "unknown feature group '" + std::string(part) + "'");
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Instances and extraction

QuestionInstance::QuestionInstance(std::vector<EntityId> question, EntityId ans)
    : answer(std::move(ans)) {
  for (auto& e : question) {
    if (std::find(question_entities.begin(), question_entities.end(), e) == question_entities.end()) {
      question_entities.push_back(std::move(e));
    }
  }
  if (question_entities.empty()) {
    fail(ErrorKind::EmptyQuestionEntities, "question for " + answer + " has no entities");
  }
  if (std::find(question_entities.begin(), question_entities.end(), answer) != question_entities.end()) {
    fail(ErrorKind::InvalidInstance, "answer " + answer + " appears among the question entities");
  }
}

const std::array<std::string, kFullFeatureWidth>& feature_slot_names() {
  static const std::array<std::string, kFullFeatureWidth> names = [] {
    std::array<std::string, kFullFeatureWidth> n;
    const char* sal[] = {"sal_target", "sal_min", "sal_max", "sal_sum", "sal_mean", "sal_qmean"};
    std::size_t i = 0;
    for (const char* s : sal) n[i++] = s;
    for (CoarseType c : kAllCoarseTypes) {
      for (const char* stat : {"min", "max", "sum", "mean"}) {
        n[i++] = std::string(to_string(c)) + "_sal_" + stat;
      }
    }
    for (const char* s : {"coh_min", "coh_sum", "coh_mean", "coh_answer_mean"}) n[i++] = s;
    for (CoarseType c : kAllCoarseTypes) n[i++] = "answer_is_" + std::string(to_string(c));
    return n;
  }();
  return names;
}

std::vector<std::string> feature_slot_names(FeatureGroups groups) {
  std::vector<std::string> out;
  const auto& all = feature_slot_names();
  for (std::size_t i = 0; i < kFullFeatureWidth; ++i) {
    if (groups.has(slot_group(i))) out.push_back(all[i]);
  }
  return out;
}

FeatureVector extract_all_features(const QuestionInstance& inst, const FeatureContext& ctx) {
  // Canonical order makes every floating-point reduction independent of the
  // caller's ordering of question entities.
  std::vector<EntityId> question = inst.question_entities;
  std::sort(question.begin(), question.end());
  std::vector<EntityId> everyone = question;
  everyone.push_back(inst.answer);

  FeatureVector fv;
  fv.reserve(kFullFeatureWidth);

  std::vector<double> q_phi;
  for (const auto& e : question) q_phi.push_back(ctx.salience(e));
  std::vector<double> all_phi = q_phi;
  all_phi.push_back(ctx.salience(inst.answer));
  const Stats q_stats = summarize(q_phi);
  const Stats all_stats = summarize(all_phi);
  for (double v : {all_phi.back(), q_stats.min, q_stats.max, all_stats.sum, all_stats.mean,
                   q_stats.mean}) {
    fv.push_back(std::log(v + kLogFloor));
  }

  std::vector<CoarseType> coarse;
  for (const auto& e : everyone) coarse.push_back(coarse_type(ctx.kg, e, ctx.roots));
  for (CoarseType c : kAllCoarseTypes) {
    std::vector<double> group;
    for (std::size_t i = 0; i < everyone.size(); ++i) {
      if (coarse[i] == c) group.push_back(all_phi[i]);
    }
    const Stats s = summarize(group);
    fv.insert(fv.end(), {s.min, s.max, s.sum, s.mean});
  }

  std::vector<double> pairs;
  std::vector<double> answer_pairs;
  for (std::size_t i = 0; i < everyone.size(); ++i) {
    for (std::size_t j = i + 1; j < everyone.size(); ++j) {
      double c = coherence(everyone[i], everyone[j], ctx.links);
      pairs.push_back(c);
      if (j + 1 == everyone.size()) answer_pairs.push_back(c);
    }
  }
  const Stats pair_stats = summarize(pairs);
  fv.insert(fv.end(), {pair_stats.min, pair_stats.sum, pair_stats.mean, summarize(answer_pairs).mean});

  for (CoarseType c : kAllCoarseTypes) fv.push_back(coarse.back() == c ? 1.0 : 0.0);
  return fv;
}

FeatureVector project_features(const FeatureVector& full, FeatureGroups groups) {
  if (full.size() != kFullFeatureWidth) {
    fail(ErrorKind::DimensionMismatch, "expected a full " + std::to_string(kFullFeatureWidth) +
                                           "-slot vector, got " + std::to_string(full.size()));
  }
  FeatureVector out;
  out.reserve(groups.width());
  for (std::size_t i = 0; i < kFullFeatureWidth; ++i) {
    if (groups.has(slot_group(i))) out.push_back(full[i]);
  }
  return out;
}

FeatureVector extract_features(const QuestionInstance& inst, const FeatureContext& ctx,
                               FeatureGroups groups) {
  return project_features(extract_all_features(inst, ctx), groups);
}

}  // namespace kgq
