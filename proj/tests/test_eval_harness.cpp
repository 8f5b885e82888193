#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "kgquiz/eval_harness.hpp"
#include "kgquiz/random.hpp"
#include "support/check.hpp"
#include "support/fixture.hpp"
#include "support/oracles.hpp"

using namespace kgq;
using namespace kgq::testing;

namespace {

FeatureVector noise(Rng& rng) {
  FeatureVector v(kFullFeatureWidth);
  for (auto& x : v) x = 2.0 * uniform_unit(rng) - 1.0;
  return v;
}

// Balanced rows; the label is the sign of a planted score over slots
// [first, last). Rows closer than `margin` to the hyperplane are resampled.
std::vector<LabeledVector> planted(std::uint64_t seed, std::size_t n, std::size_t first, std::size_t last,
                                   double margin = 0.05) {
  Rng rng(seed);
  std::vector<double> w(kFullFeatureWidth, 0.0);
  for (std::size_t i = first; i < last; ++i) w[i] = 2.0 * uniform_unit(rng) - 1.0;
  std::vector<LabeledVector> out;
  std::size_t easy = 0, hard = 0;
  while (out.size() < n) {
    auto x = noise(rng);
    double z = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) z += w[i] * x[i];
    if (std::abs(z) < margin) continue;
    const auto label = z > 0 ? Difficulty::Easy : Difficulty::Hard;
    auto& count = label == Difficulty::Easy ? easy : hard;
    if (count >= (n + 1) / 2) continue;
    ++count;
    out.push_back({std::move(x), label});
  }
  return out;
}

std::vector<Difficulty> labels_of(const std::vector<LabeledVector>& data) {
  std::vector<Difficulty> out;
  for (const auto& r : data) out.push_back(r.label);
  return out;
}

}  // namespace

TEST_CASE("folds partition the data and keep classes balanced") {
  const auto data = planted(1, 103, 0, 30);
  const auto labels = labels_of(data);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto folds = assign_folds(labels, 10, seed);
    REQUIRE(folds.size() == data.size());
    std::vector<std::size_t> size(10, 0), easy(10, 0);
    for (std::size_t i = 0; i < folds.size(); ++i) {
      REQUIRE(folds[i] < 10);
      ++size[folds[i]];
      easy[folds[i]] += labels[i] == Difficulty::Easy;
    }
    CHECK(std::accumulate(size.begin(), size.end(), std::size_t{0}) == data.size());
    CHECK(*std::max_element(size.begin(), size.end()) - *std::min_element(size.begin(), size.end()) <= 2);
    CHECK(*std::max_element(easy.begin(), easy.end()) - *std::min_element(easy.begin(), easy.end()) <= 1);
  }
  CHECK(assign_folds(labels, 10, 3) == assign_folds(labels, 10, 3));
  CHECK_ERROR_KIND(assign_folds(std::vector<Difficulty>(5, Difficulty::Easy), 10, 0), ErrorKind::TooFewExamples);
  CHECK_ERROR_KIND(assign_folds(labels, 1, 0), ErrorKind::TooFewExamples);
}

TEST_CASE("cross validation on separable data") {
  const auto data = planted(2, 300, 0, 30, 0.5);
  const auto cv = kfold_cv(data, 10, 42, FeatureGroups::all());
  CHECK(cv.fold_accuracy.size() == 10);
  CHECK(cv.mean_accuracy >= 0.95);
  const double mean = std::accumulate(cv.fold_accuracy.begin(), cv.fold_accuracy.end(), 0.0) / 10.0;
  CHECK(cv.mean_accuracy == doctest::Approx(mean));
}

TEST_CASE("cross validation on coin-flip labels is near chance") {
  Rng rng(3);
  std::vector<LabeledVector> data;
  for (int i = 0; i < 500; ++i) data.push_back({noise(rng), uniform_unit(rng) < 0.5 ? Difficulty::Easy : Difficulty::Hard});
  const auto cv = kfold_cv(data, 10, 42, FeatureGroups::all());
  CHECK(std::abs(cv.mean_accuracy - 0.5) <= 0.08);
}

TEST_CASE("cross validation errors") {
  const auto data = planted(4, 8, 0, 30);
  CHECK_ERROR_KIND(kfold_cv(data, 10, 1, FeatureGroups::all()), ErrorKind::TooFewExamples);
  std::vector<LabeledVector> one(20, {FeatureVector(30, 0.0), Difficulty::Hard});
  CHECK_ERROR_KIND(kfold_cv(one, 5, 1, FeatureGroups::all()), ErrorKind::SingleClassData);
}

TEST_CASE("ablation structure and the all-off baseline") {
  const auto data = planted(5, 200, 0, 30);
  const auto rows = ablation(data, 10, 42);
  REQUIRE(rows.size() == 8);
  std::set<std::tuple<bool, bool, bool>> combos;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    combos.insert({rows[i].sal, rows[i].coh, rows[i].type});
    if (i > 0) CHECK(rows[i - 1].accuracy >= rows[i].accuracy);
  }
  CHECK(combos.size() == 8);
  const auto off = std::find_if(rows.begin(), rows.end(), [](const AblationRow& r) { return !r.sal && !r.coh && !r.type; });
  CHECK(std::abs(off->accuracy - 0.5) <= 0.05);

  const auto tsv = ablation_tsv(rows);
  CHECK(tsv.starts_with("SAL\tCOH\tTYPE\tAccuracy\n"));
  CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 9);
}

TEST_CASE("ablation on the fixture training set") {
  const auto& l = shared_loaded();
  std::vector<LabeledVector> data;
  for (const auto& r : l.training) data.push_back({extract_all_features(r.instance, l.context()), r.label});
  const auto rows = ablation(data, 10, 42);
  const auto off = std::find_if(rows.begin(), rows.end(), [](const AblationRow& r) { return !r.sal && !r.coh && !r.type; });
  CHECK(std::abs(off->accuracy - 0.5) <= 0.05);
}

TEST_CASE("planted SAL signal: SAL-on rows beat SAL-off rows") {
  const auto data = planted(6, 300, 0, 6);
  const auto rows = ablation(data, 10, 42);
  double min_on = 1.0, max_off = 0.0;
  for (const auto& r : rows) {
    if (r.sal) min_on = std::min(min_on, r.accuracy);
    else max_off = std::max(max_off, r.accuracy);
  }
  CHECK(min_on > max_off);
}

TEST_CASE("kendall tau examples and errors") {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  const std::vector<double> r = {5, 4, 3, 2, 1};
  CHECK(kendall_tau(a, a) == 1.0);
  CHECK(kendall_tau(a, r) == -1.0);
  CHECK(kendall_tau(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}) == doctest::Approx(1.0 / 3.0));
  CHECK_ERROR_KIND(kendall_tau(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), ErrorKind::LengthMismatch);
  CHECK_ERROR_KIND(kendall_tau(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}), ErrorKind::AllTied);
}

TEST_CASE("kendall tau matches pair counting exhaustively for n <= 5") {
  std::size_t compared = 0;
  for (std::size_t n = 2; n <= 5; ++n) {
    std::vector<double> p(n);
    std::iota(p.begin(), p.end(), 1.0);
    std::vector<std::vector<double>> perms;
    do perms.push_back(p); while (std::next_permutation(p.begin(), p.end()));
    for (const auto& x : perms) {
      for (const auto& y : perms) {
        CHECK(std::abs(kendall_tau(x, y) - kendall_tau_naive(x, y)) <= 1e-12);
        CHECK(kendall_tau(x, y) == kendall_tau(y, x));
        ++compared;
      }
    }
    // Ties: every vector over {0, 1, 2}^n against every other.
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 3;
    auto decode = [n](std::size_t code) {
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i, code /= 3) v[i] = static_cast<double>(code % 3);
      return v;
    };
    for (std::size_t ca = 0; ca < total; ++ca) {
      const auto x = decode(ca);
      if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) continue;
      for (std::size_t cb = 0; cb < total; ++cb) {
        const auto y = decode(cb);
        if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) continue;
        if (std::abs(kendall_tau(x, y) - kendall_tau_naive(x, y)) > 1e-12) {
          FAIL_CHECK("tie mismatch at n=" << n);
        }
        ++compared;
      }
    }
  }
  CHECK(compared > 14000);
}

TEST_CASE("kendall tau on larger random inputs") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 200);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(uniform_index(rng, 10));
      b[i] = static_cast<double>(uniform_index(rng, 10));
    }
    a[0] = 0;
    a[1] = 1;
    b[0] = 0;
    b[1] = 1;
    CHECK(std::abs(kendall_tau(a, b) - kendall_tau_naive(a, b)) <= 1e-12);
  }
}

TEST_CASE("weighted mean") {
  CHECK(weighted_mean(std::vector<double>{0.5, 0.7}, std::vector<double>{1, 3}) == doctest::Approx(0.65));
  CHECK(weighted_mean(std::vector<double>{0.2}, std::vector<double>{4}) == doctest::Approx(0.2));
  CHECK_ERROR_KIND(weighted_mean(std::vector<double>{0.5}, std::vector<double>{1, 2}), ErrorKind::LengthMismatch);
  CHECK_THROWS_AS(weighted_mean(std::vector<double>{0.5, 0.1}, std::vector<double>{0, 0}), kgq::Error);
  CHECK_THROWS_AS(weighted_mean(std::vector<double>{0.5, 0.1}, std::vector<double>{-1, 2}), kgq::Error);
}

TEST_CASE("fleiss kappa examples, oracle and errors") {
  CHECK(fleiss_kappa({{2, 0}, {0, 2}}) == 1.0);
  CHECK(fleiss_kappa({{3, 0, 0}, {0, 3, 0}, {0, 0, 3}, {3, 0, 0}}) == 1.0);
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t items = 5 + uniform_index(rng, 30);
    const std::size_t cats = 2 + uniform_index(rng, 4);
    const std::size_t raters = 2 + uniform_index(rng, 6);
    std::vector<std::vector<std::size_t>> m(items, std::vector<std::size_t>(cats, 0));
    for (auto& row : m) {
      for (std::size_t r = 0; r < raters; ++r) ++row[uniform_index(rng, cats)];
    }
    const double k = fleiss_kappa(m);
    CHECK(std::abs(k - fleiss_kappa_naive(m)) < 1e-12);
    // Relabel categories by reversing columns.
    auto relabeled = m;
    for (auto& row : relabeled) std::reverse(row.begin(), row.end());
    CHECK(std::abs(fleiss_kappa(relabeled) - k) < 1e-12);
  }
  CHECK_ERROR_KIND(fleiss_kappa({{2, 0}, {1, 2}}), ErrorKind::RaggedMatrix);
  CHECK_ERROR_KIND(fleiss_kappa({{2, 0}, {2, 0}}), ErrorKind::PerfectExpectedAgreement);
}

TEST_CASE("cohen kappa examples, oracle and errors") {
  const std::vector<std::string> a = {"easy", "hard", "easy", "hard"};
  CHECK(cohen_kappa(a, a) == 1.0);
  const std::vector<std::string> constant(4, "hard");
  CHECK(cohen_kappa(a, constant) == 0.0);
  Rng rng(9);
  const std::vector<std::string> labels = {"a", "b", "c", "d"};
  const std::vector<std::string> renamed = {"w", "x", "y", "z"};
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + uniform_index(rng, 40);
    const std::size_t cats = 2 + uniform_index(rng, 3);
    std::vector<std::string> x(n), y(n), xr(n), yr(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto ix = uniform_index(rng, cats);
      const auto iy = uniform_index(rng, cats);
      x[i] = labels[ix];
      y[i] = labels[iy];
      xr[i] = renamed[cats - 1 - ix];
      yr[i] = renamed[cats - 1 - iy];
    }
    if (std::all_of(x.begin(), x.end(), [&](const std::string& s) { return s == x[0]; }) &&
        std::all_of(y.begin(), y.end(), [&](const std::string& s) { return s == x[0]; })) {
      continue;
    }
    const double k = cohen_kappa(x, y);
    CHECK(std::abs(k - cohen_kappa_naive(x, y)) < 1e-12);
    CHECK(std::abs(cohen_kappa(xr, yr) - k) < 1e-12);
  }
  CHECK_ERROR_KIND(cohen_kappa(a, std::vector<std::string>{"easy"}), ErrorKind::LengthMismatch);
  CHECK_ERROR_KIND(cohen_kappa(constant, constant), ErrorKind::PerfectExpectedAgreement);
}
