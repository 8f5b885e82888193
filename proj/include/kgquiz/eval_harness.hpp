#pragma once

// Evaluation machinery: cross-validated accuracy of the difficulty model,
// the feature-group ablation table, Kendall's tau-b and Fleiss'/Cohen's kappa.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kgquiz/difficulty_model.hpp"
#include "kgquiz/stats_features.hpp"

namespace kgq {

// Stratified fold assignment: each class is shuffled separately and dealt
// round-robin, so folds are near-equal in size and class balance. Returns
// the fold index of every row. Throws TooFewExamples.
std::vector<std::size_t> assign_folds(std::span<const Difficulty> labels, std::size_t k,
                                      std::uint64_t seed);

struct CvResult {
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
};

// `data` holds full 30-slot vectors; each fold trains on the projection to
// `groups`. With no groups enabled, or a single-class training fold, the
// fold predicts the training majority (ties: hard). Throws TooFewExamples or
// SingleClassData.
CvResult kfold_cv(std::span<const LabeledVector> data, std::size_t k, std::uint64_t seed,
                  FeatureGroups groups, const TrainConfig& config = {});

struct AblationRow {
  bool sal = false;
  bool coh = false;
  bool type = false;
  double accuracy = 0.0;
};

// One kfold_cv per group subset, sorted by accuracy descending (ties keep
// the all-on to all-off enumeration order).
std::vector<AblationRow> ablation(std::span<const LabeledVector> data, std::size_t k,
                                  std::uint64_t seed, const TrainConfig& config = {});

// `SAL<TAB>COH<TAB>TYPE<TAB>Accuracy` with yes/no flags.
std::string ablation_tsv(const std::vector<AblationRow>& rows);

// Tau-b over paired scores, O(n log n). Throws LengthMismatch or AllTied.
double kendall_tau(std::span<const double> a, std::span<const double> b);

// Sum of values weighted by non-negative weights, divided by the weight sum.
double weighted_mean(std::span<const double> values, std::span<const double> weights);

// counts[i][j] = number of raters assigning item i to category j. Throws
// RaggedMatrix or PerfectExpectedAgreement.
double fleiss_kappa(const std::vector<std::vector<std::size_t>>& counts);

// Throws LengthMismatch or PerfectExpectedAgreement.
double cohen_kappa(std::span<const std::string> a, std::span<const std::string> b);

}  // namespace kgq
