#include "kgquiz/difficulty_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "kgquiz/error.hpp"
#include "kgquiz/text.hpp"

namespace kgq {
namespace {

// log(1 + e^z) without overflow.
double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs_gradient(const LossAndGradient& g) {
  double m = std::abs(g.bias_grad);
  for (double v : g.weight_grad) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

std::string_view to_string(Difficulty d) { return d == Difficulty::Easy ? "easy" : "hard"; }

Difficulty parse_difficulty(std::string_view s) {
  if (s == "easy") return Difficulty::Easy;
  if (s == "hard") return Difficulty::Hard;
  fail(ErrorKind::InvalidArgument, "difficulty must be easy or hard, got '" + std::string(s) + "'");
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || epochs == 0 || !(l2 > 0.0) || !(tolerance > 0.0)) {
    fail(ErrorKind::InvalidArgument, "learning_rate, epochs, l2 and tolerance must be positive");
  }
}

Standardization Standardization::fit(std::span<const LabeledVector> data) {
  Standardization s;
  if (data.empty()) return s;
  const std::size_t dim = data.front().features.size();
  const double n = static_cast<double>(data.size());
  s.mean.assign(dim, 0.0);
  s.stddev.assign(dim, 0.0);
  for (const auto& row : data) {
    for (std::size_t j = 0; j < dim; ++j) s.mean[j] += row.features[j];
  }
  for (double& m : s.mean) m /= n;
  for (const auto& row : data) {
    for (std::size_t j = 0; j < dim; ++j) {
      double d = row.features[j] - s.mean[j];
      s.stddev[j] += d * d;
    }
  }
  for (double& v : s.stddev) {
    v = std::sqrt(v / n);
    if (!(v > 0.0)) v = 1.0;
  }
  return s;
}

FeatureVector Standardization::apply(const FeatureVector& fv) const {
  FeatureVector out(fv.size());
  for (std::size_t j = 0; j < fv.size(); ++j) out[j] = (fv[j] - mean[j]) / stddev[j];
  return out;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LossAndGradient loss_and_gradient(std::span<const FeatureVector> rows, std::span<const double> targets,
                                  std::span<const double> weights, double bias, double l2) {
  LossAndGradient out;
  out.weight_grad.assign(weights.size(), 0.0);
  const double n = static_cast<double>(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double z = dot(weights, rows[i]) + bias;
    out.loss += softplus(z) - targets[i] * z;
    const double err = sigmoid(z) - targets[i];
    for (std::size_t j = 0; j < weights.size(); ++j) out.weight_grad[j] += err * rows[i][j];
    out.bias_grad += err;
  }
  out.loss /= n;
  out.bias_grad /= n;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    out.weight_grad[j] = out.weight_grad[j] / n + l2 * weights[j];
    out.loss += 0.5 * l2 * weights[j] * weights[j];
  }
  return out;
}

double DifficultyModel::predict_p_easy(const FeatureVector& fv) const {
  if (fv.size() != weights.size()) {
    fail(ErrorKind::DimensionMismatch, "model expects " + std::to_string(weights.size()) +
                                           " features, got " + std::to_string(fv.size()));
  }
  return sigmoid(dot(weights, standardization.apply(fv)) + bias);
}

std::string DifficultyModel::to_json() const {
  nlohmann::json groups_json = nlohmann::json::array();
  if (groups.has(FeatureGroup::SAL)) groups_json.push_back("SAL");
  if (groups.has(FeatureGroup::COH)) groups_json.push_back("COH");
  if (groups.has(FeatureGroup::TYPE)) groups_json.push_back("TYPE");
  nlohmann::json j = {
      {"weights", weights},
      {"bias", bias},
      {"groups", groups_json},
      {"standardization", {{"mean", standardization.mean}, {"stddev", standardization.stddev}}},
      {"config",
       {{"learning_rate", config.learning_rate},
        {"epochs", config.epochs},
        {"l2", config.l2},
        {"tolerance", config.tolerance},
        {"seed", config.seed}}},
  };
  return j.dump(2) + "\n";
}

DifficultyModel DifficultyModel::from_json(std::string_view text) {
  DifficultyModel m;
  try {
    auto j = nlohmann::json::parse(text);
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    std::vector<std::string> names;
    for (const auto& g : j.at("groups")) names.push_back(g.get<std::string>());
    m.groups = FeatureGroups::parse(text::join(names, ","));
    m.standardization.mean = j.at("standardization").at("mean").get<std::vector<double>>();
    m.standardization.stddev = j.at("standardization").at("stddev").get<std::vector<double>>();
    const auto& c = j.at("config");
    m.config.learning_rate = c.at("learning_rate").get<double>();
    m.config.epochs = c.at("epochs").get<std::size_t>();
    m.config.l2 = c.at("l2").get<double>();
    m.config.tolerance = c.at("tolerance").get<double>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::MalformedModel, e.what());
  } catch (const Error& e) {
    fail(ErrorKind::MalformedModel, e.what());
  }
  const std::size_t dim = m.groups.width();
  if (m.weights.size() != dim || m.standardization.mean.size() != dim ||
      m.standardization.stddev.size() != dim) {
    fail(ErrorKind::MalformedModel, "weights/standardization length does not match groups");
  }
  for (double s : m.standardization.stddev) {
    if (!(s > 0.0)) fail(ErrorKind::MalformedModel, "stddev entries must be positive");
  }
  return m;
}

DifficultyModel DifficultyModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

DifficultyModel train(std::span<const LabeledVector> data, const TrainConfig& config,
                      FeatureGroups groups, TrainReport* report) {
  config.validate();
  if (data.size() < 2) fail(ErrorKind::SingleClassData, "need at least two examples");
  const std::size_t dim = data.front().features.size();
  bool has_easy = false;
  bool has_hard = false;
  for (const auto& row : data) {
    if (row.features.size() != dim) {
      fail(ErrorKind::DimensionMismatch, "training vectors have differing lengths");
    }
    (row.label == Difficulty::Easy ? has_easy : has_hard) = true;
  }
  if (!has_easy || !has_hard) fail(ErrorKind::SingleClassData, "training data has a single class");
  if (dim != groups.width()) {
    fail(ErrorKind::DimensionMismatch, "vector length " + std::to_string(dim) +
                                           " does not match groups " + groups.to_string());
  }

  DifficultyModel model;
  model.groups = groups;
  model.config = config;
  model.standardization = Standardization::fit(data);
  model.weights.assign(dim, 0.0);

  std::vector<FeatureVector> rows;
  std::vector<double> targets;
  rows.reserve(data.size());
  for (const auto& row : data) {
    rows.push_back(model.standardization.apply(row.features));
    targets.push_back(row.label == Difficulty::Easy ? 1.0 : 0.0);
  }

  TrainReport local;
  TrainReport& rep = report ? *report : local;
  rep = {};

  double step = config.learning_rate;
  LossAndGradient current = loss_and_gradient(rows, targets, model.weights, model.bias, config.l2);
  rep.loss_history.push_back(current.loss);

  std::vector<double> next_w(dim);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (max_abs_gradient(current) < config.tolerance) {
      rep.converged = true;
      break;
    }
    LossAndGradient next;
    double next_b = 0.0;
    bool accepted = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      for (std::size_t j = 0; j < dim; ++j) next_w[j] = model.weights[j] - step * current.weight_grad[j];
      next_b = model.bias - step * current.bias_grad;
      next = loss_and_gradient(rows, targets, next_w, next_b, config.l2);
      if (next.loss <= current.loss) {
        accepted = true;
        break;
      }
      step *= 0.5;
      ++rep.step_halvings;
    }
    if (!accepted) {
      // No descent step exists at floating-point resolution.
      rep.converged = true;
      break;
    }
    model.weights = next_w;
    model.bias = next_b;
    current = std::move(next);
    rep.loss_history.push_back(current.loss);
    rep.epochs_run = epoch + 1;
  }
  return model;
}

Difficulty classify_probability(double p_easy) {
  return p_easy > 0.5 ? Difficulty::Easy : Difficulty::Hard;
}

double predict_instance(const DifficultyModel& model, const QuestionInstance& inst,
                        const FeatureContext& ctx) {
  return model.predict_p_easy(extract_features(inst, ctx, model.groups));
}

Difficulty classify(const DifficultyModel& model, const QuestionInstance& inst,
                    const FeatureContext& ctx) {
  return classify_probability(predict_instance(model, inst, ctx));
}

std::vector<LabeledInstance> load_training_data(const std::filesystem::path& path) {
  std::vector<LabeledInstance> out;
  text::for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    if (text::trim(line).empty() || line.front() == '#') return;
    auto cols = text::split(line, '\t');
    if (cols.size() != 3) {
      fail(ErrorKind::MalformedLine, "line " + std::to_string(line_no) +
                                         ": expected label<TAB>answer<TAB>question entities");
    }
    std::vector<EntityId> question;
    for (auto q : text::split(cols[2], ',')) {
      q = text::trim(q);
      if (!q.empty()) question.emplace_back(q);
    }
    try {
      out.push_back({QuestionInstance(std::move(question), std::string(text::trim(cols[1]))),
                     parse_difficulty(text::trim(cols[0]))});
    } catch (const Error& e) {
      fail(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  });
  return out;
}

}  // namespace kgq
