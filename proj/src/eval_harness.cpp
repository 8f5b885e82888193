#include "kgquiz/eval_harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "kgquiz/error.hpp"
#include "kgquiz/random.hpp"
#include "kgquiz/text.hpp"

namespace kgq {
namespace {

Difficulty majority(std::span<const LabeledVector> rows) {
  std::size_t easy = 0;
  for (const auto& r : rows) easy += r.label == Difficulty::Easy ? 1 : 0;
  return 2 * easy > rows.size() ? Difficulty::Easy : Difficulty::Hard;
}

// Sorts `v` and returns the number of inversions it had.
std::uint64_t sort_counting_inversions(std::vector<double>& v) {
  std::vector<double> buf(v.size());
  std::uint64_t inversions = 0;
  for (std::size_t width = 1; width < v.size(); width *= 2) {
    for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, v.size());
      const std::size_t hi = std::min(lo + 2 * width, v.size());
      std::size_t i = lo, j = mid, out = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          inversions += mid - i;
          buf[out++] = v[j++];
        } else {
          buf[out++] = v[i++];
        }
      }
      while (i < mid) buf[out++] = v[i++];
      while (j < hi) buf[out++] = v[j++];
    }
    v.swap(buf);
  }
  return inversions;
}

// Number of tied pairs in a sorted sequence, grouping by `same`.
template <typename It, typename Eq>
std::uint64_t tied_pairs(It begin, It end, Eq same) {
  std::uint64_t pairs = 0;
  for (It run = begin; run != end;) {
    It next = run;
    std::uint64_t len = 0;
    while (next != end && same(*run, *next)) {
      ++next;
      ++len;
    }
    pairs += len * (len - 1) / 2;
    run = next;
  }
  return pairs;
}

}  // namespace

std::vector<std::size_t> assign_folds(std::span<const Difficulty> labels, std::size_t k,
                                      std::uint64_t seed) {
  if (k < 2 || labels.size() < k) {
    fail(ErrorKind::TooFewExamples, "need k >= 2 and at least k examples (k=" + std::to_string(k) +
                                        ", n=" + std::to_string(labels.size()) + ")");
  }
  Rng rng(seed);
  std::vector<std::size_t> easy;
  std::vector<std::size_t> hard;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == Difficulty::Easy ? easy : hard).push_back(i);
  }
  shuffle(std::span<std::size_t>(easy), rng);
  shuffle(std::span<std::size_t>(hard), rng);
  std::vector<std::size_t> fold(labels.size());
  std::size_t next = 0;
  for (const auto* group : {&easy, &hard}) {
    for (std::size_t idx : *group) fold[idx] = next++ % k;
  }
  return fold;
}

CvResult kfold_cv(std::span<const LabeledVector> data, std::size_t k, std::uint64_t seed,
                  FeatureGroups groups, const TrainConfig& config) {
  std::vector<Difficulty> labels;
  for (const auto& row : data) labels.push_back(row.label);
  const auto folds = assign_folds(labels, k, seed);
  if (std::all_of(labels.begin(), labels.end(), [&](Difficulty d) { return d == labels.front(); })) {
    fail(ErrorKind::SingleClassData, "cross-validation data has a single class");
  }

  CvResult result;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<LabeledVector> train_rows;
    std::vector<LabeledVector> test_rows;
    for (std::size_t i = 0; i < data.size(); ++i) {
      LabeledVector row{project_features(data[i].features, groups), data[i].label};
      (folds[i] == f ? test_rows : train_rows).push_back(std::move(row));
    }
    const bool single_class =
        std::all_of(train_rows.begin(), train_rows.end(),
                    [&](const LabeledVector& r) { return r.label == train_rows.front().label; });

    std::size_t correct = 0;
    if (groups.width() == 0 || single_class) {
      const Difficulty guess = majority(train_rows);
      for (const auto& r : test_rows) correct += r.label == guess ? 1 : 0;
    } else {
      const DifficultyModel model = train(train_rows, config, groups);
      for (const auto& r : test_rows) {
        correct += classify_probability(model.predict_p_easy(r.features)) == r.label ? 1 : 0;
      }
    }
    result.fold_accuracy.push_back(static_cast<double>(correct) /
                                   static_cast<double>(test_rows.size()));
  }
  result.mean_accuracy =
      std::accumulate(result.fold_accuracy.begin(), result.fold_accuracy.end(), 0.0) /
      static_cast<double>(k);
  return result;
}

std::vector<AblationRow> ablation(std::span<const LabeledVector> data, std::size_t k,
                                  std::uint64_t seed, const TrainConfig& config) {
  std::vector<AblationRow> rows;
  for (int mask = 7; mask >= 0; --mask) {
    AblationRow row;
    row.sal = (mask & 4) != 0;
    row.coh = (mask & 2) != 0;
    row.type = (mask & 1) != 0;
    row.accuracy =
        kfold_cv(data, k, seed, FeatureGroups::of(row.sal, row.coh, row.type), config).mean_accuracy;
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const AblationRow& a, const AblationRow& b) {
    return a.accuracy > b.accuracy;
  });
  return rows;
}

std::string ablation_tsv(const std::vector<AblationRow>& rows) {
  std::ostringstream out;
  out << "SAL\tCOH\tTYPE\tAccuracy\n";
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  for (const auto& r : rows) {
    out << yn(r.sal) << '\t' << yn(r.coh) << '\t' << yn(r.type) << '\t'
        << text::format_double(r.accuracy) << '\n';
  }
  return out.str();
}

double kendall_tau(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorKind::LengthMismatch, "rankings differ in length");
  if (a.size() < 2) fail(ErrorKind::LengthMismatch, "need at least two ranked items");
  const std::size_t n = a.size();

  std::vector<std::pair<double, double>> pairs(n);
  for (std::size_t i = 0; i < n; ++i) pairs[i] = {a[i], b[i]};
  std::sort(pairs.begin(), pairs.end());

  const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t ties_a =
      tied_pairs(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) { return x.first == y.first; });
  const std::uint64_t ties_joint = tied_pairs(pairs.begin(), pairs.end(),
                                              [](const auto& x, const auto& y) { return x == y; });

  std::vector<double> bs(n);
  for (std::size_t i = 0; i < n; ++i) bs[i] = pairs[i].second;
  const std::uint64_t discordant = sort_counting_inversions(bs);
  const std::uint64_t ties_b =
      tied_pairs(bs.begin(), bs.end(), [](double x, double y) { return x == y; });

  const double concordant = static_cast<double>(n0 - ties_a - ties_b + ties_joint - discordant);
  const double denom = std::sqrt(static_cast<double>(n0 - ties_a) * static_cast<double>(n0 - ties_b));
  if (denom == 0.0) fail(ErrorKind::AllTied, "one ranking is constant; tau-b is undefined");
  return (concordant - static_cast<double>(discordant)) / denom;
}

double weighted_mean(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) fail(ErrorKind::LengthMismatch, "values and weights differ in length");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] < 0.0) fail(ErrorKind::InvalidArgument, "weights must be non-negative");
    num += values[i] * weights[i];
    den += weights[i];
  }
  if (!(den > 0.0)) fail(ErrorKind::InvalidArgument, "weights sum to zero");
  return num / den;
}

double fleiss_kappa(const std::vector<std::vector<std::size_t>>& counts) {
  if (counts.empty() || counts.front().empty()) fail(ErrorKind::RaggedMatrix, "empty count matrix");
  const std::size_t categories = counts.front().size();
  const std::size_t raters = std::accumulate(counts.front().begin(), counts.front().end(), std::size_t{0});
  if (raters < 2) fail(ErrorKind::RaggedMatrix, "need at least two raters per item");

  std::vector<double> column(categories, 0.0);
  double agreement = 0.0;
  for (const auto& row : counts) {
    if (row.size() != categories ||
        std::accumulate(row.begin(), row.end(), std::size_t{0}) != raters) {
      fail(ErrorKind::RaggedMatrix, "rows must share category count and rater total");
    }
    double sq = 0.0;
    for (std::size_t j = 0; j < categories; ++j) {
      sq += static_cast<double>(row[j]) * static_cast<double>(row[j]);
      column[j] += static_cast<double>(row[j]);
    }
    const double n = static_cast<double>(raters);
    agreement += (sq - n) / (n * (n - 1.0));
  }
  const double items = static_cast<double>(counts.size());
  const double p_bar = agreement / items;
  const std::size_t used = static_cast<std::size_t>(
      std::count_if(column.begin(), column.end(), [](double c) { return c > 0.0; }));
  if (used <= 1) fail(ErrorKind::PerfectExpectedAgreement, "all ratings fall in one category");
  double p_e = 0.0;
  for (double c : column) {
    const double p = c / (items * static_cast<double>(raters));
    p_e += p * p;
  }
  return (p_bar - p_e) / (1.0 - p_e);
}

double cohen_kappa(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() != b.size() || a.empty()) {
    fail(ErrorKind::LengthMismatch, "label vectors must be non-empty and of equal length");
  }
  std::map<std::string, std::size_t> ma;
  std::map<std::string, std::size_t> mb;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++ma[a[i]];
    ++mb[b[i]];
    agree += a[i] == b[i] ? 1 : 0;
  }
  if (ma.size() == 1 && mb.size() == 1 && ma.begin()->first == mb.begin()->first) {
    fail(ErrorKind::PerfectExpectedAgreement, "both raters use one identical label");
  }
  const double n = static_cast<double>(a.size());
  double p_e = 0.0;
  for (const auto& [label, count] : ma) {
    auto it = mb.find(label);
    if (it != mb.end()) p_e += (static_cast<double>(count) / n) * (static_cast<double>(it->second) / n);
  }
  const double p_o = static_cast<double>(agree) / n;
  return (p_o - p_e) / (1.0 - p_e);
}

}  // namespace kgq
