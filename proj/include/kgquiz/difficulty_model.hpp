#pragma once

// Binary logistic-regression difficulty classifier: P(easy | features).
//
// Training is full-batch gradient descent on the L2-regularized mean
// negative log-likelihood over z-scored features. Weights start at zero and
// the bias is not regularized. If a step would increase the loss, the step
// size is halved and the step retried.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "kgquiz/stats_features.hpp"

namespace kgq {

enum class Difficulty { Easy, Hard };

std::string_view to_string(Difficulty d);
Difficulty parse_difficulty(std::string_view s);  // throws InvalidArgument

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 1000;
  double l2 = 0.01;
  double tolerance = 1e-6;
  std::uint64_t seed = 42;

  void validate() const;  // throws InvalidArgument
};

struct LabeledVector {
  FeatureVector features;
  Difficulty label;
};

struct Standardization {
  std::vector<double> mean;
  std::vector<double> stddev;

  // Population statistics; zero-variance slots get stddev 1.
  static Standardization fit(std::span<const LabeledVector> data);
  FeatureVector apply(const FeatureVector& fv) const;
};

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> weight_grad;
  double bias_grad = 0.0;
};

// Mean NLL of labels (easy = 1) plus (l2 / 2) * |w|^2 over already
// standardized rows.
LossAndGradient loss_and_gradient(std::span<const FeatureVector> rows, std::span<const double> targets,
                                  std::span<const double> weights, double bias, double l2);

double sigmoid(double z);

struct DifficultyModel {
  std::vector<double> weights;
  double bias = 0.0;
  FeatureGroups groups = FeatureGroups::all();
  Standardization standardization;
  TrainConfig config;

  // Throws DimensionMismatch.
  double predict_p_easy(const FeatureVector& fv) const;

  std::string to_json() const;
  static DifficultyModel from_json(std::string_view json);  // throws MalformedModel
  static DifficultyModel load(const std::filesystem::path& path);
};

struct TrainReport {
  std::vector<double> loss_history;  // loss after each accepted step, starting with the initial loss
  std::size_t epochs_run = 0;
  std::size_t step_halvings = 0;
  bool converged = false;
};

// Throws SingleClassData or DimensionMismatch.
DifficultyModel train(std::span<const LabeledVector> data, const TrainConfig& config,
                      FeatureGroups groups = FeatureGroups::all(), TrainReport* report = nullptr);

// Easy iff P(easy) > 0.5.
Difficulty classify_probability(double p_easy);

Difficulty classify(const DifficultyModel& model, const QuestionInstance& inst,
                    const FeatureContext& ctx);

// P(easy) for an instance, extracting exactly the model's feature groups.
double predict_instance(const DifficultyModel& model, const QuestionInstance& inst,
                        const FeatureContext& ctx);

// Training rows: `label<TAB>answer<TAB>q1,q2,...`.
struct LabeledInstance {
  QuestionInstance instance;
  Difficulty label;
};
std::vector<LabeledInstance> load_training_data(const std::filesystem::path& path);

}  // namespace kgq
