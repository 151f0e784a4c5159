/*
 * Copyright 2026 The Handbrain Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HANDBRAIN_LEARNER_LEARNER_HPP_
#define HANDBRAIN_LEARNER_LEARNER_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "handbrain/features/features.hpp"
#include "json.hpp"

namespace handbrain::learner {

using features::Dataset;
using features::FeatureVector;

struct LossParams {
  double gamma = 2.0;
  double alpha = 0.25;
  double beta = 1.0;

  // Throws UsageError outside gamma >= 0, 0 < alpha <= 1, beta >= 0.
  void validate() const;
  bool operator==(const LossParams&) const = default;
};

inline constexpr double kHessianFloor = 1e-16;

struct FocalTerms {
  double loss = 0.0;
  double gradient = 0.0;
  double hessian = 0.0;      // floored at kHessianFloor
  double raw_hessian = 0.0;  // exact; negative where the loss is locally concave
};

// Focal loss -alpha (1 - p_t)^gamma log p_t of the logistic margin, with its
// first and second derivatives in the margin.
FocalTerms focal_terms(double margin, int y, const LossParams& lp);

double logistic(double margin);

// exp(beta * elapsed_norm).
double time_weight(double elapsed_norm, double beta);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  bool missing_left = false;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output before the learning rate
  double gain = 0.0;
  double cover = 0.0;  // hessian sum

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // root at 0

  double predict(const FeatureVector& x) const;
  bool operator==(const Tree&) const = default;
};

struct TrainParams {
  int trees = 200;
  int depth = 4;
  double learning_rate = 0.1;
  int min_leaf = 5;
  double lambda = 1.0;
  double subsample = 1.0;
  LossParams loss;
  std::uint64_t seed = 0;

  void validate() const;
};

void to_json(nlohmann::json& j, const TrainParams& p);
void from_json(const nlohmann::json& j, TrainParams& p);

struct BoostedModel {
  static constexpr int kFormatVersion = 1;

  std::vector<std::string> feature_names;
  double base_score = 0.0;
  double learning_rate = 0.1;
  LossParams loss;
  std::vector<Tree> trees;
  std::pair<double, double> elapsed_range{0.0, 0.0};
  nlohmann::json params = nlohmann::json::object();

  // Raw log-odds.
  double margin(const FeatureVector& x) const;
  // Throws DataError when x has the wrong width.
  double predict_proba(const FeatureVector& x) const;
  std::vector<double> predict_proba(const Dataset& data) const;
  // Hex digest of the serialized model.
  std::string digest() const;

  bool operator==(const BoostedModel&) const = default;
};

nlohmann::json to_json(const BoostedModel& m);
// Throws DataError on an unknown version or malformed content.
BoostedModel model_from_json(const nlohmann::json& j);
void save_model(const std::filesystem::path& path, const BoostedModel& m);
BoostedModel load_model(const std::filesystem::path& path);

// Column layout of `data` rearranged to the model's feature table. Throws
// DataError when a model feature is missing from the data.
Dataset align(const Dataset& data, const BoostedModel& m);

// Per-sample gradient statistics at a constant margin, weighted by time.
struct GradientStats {
  double g = 0.0;
  double h = 0.0;
};
GradientStats root_statistics(const Dataset& data, const LossParams& lp, double base_score);

// Newton boosting with exact greedy splits. Throws DataError on empty or
// single-class data. `loss_history` receives the weighted mean training loss
// before the first tree and after each one.
BoostedModel train(const Dataset& data, const TrainParams& params, std::vector<double>* loss_history = nullptr);

struct Metrics {
  double accuracy = 0.0;
  double f1 = 0.0;
  long tp = 0, fp = 0, tn = 0, fn = 0;
  std::vector<std::pair<std::string, double>> importance;  // descending gain
};

Metrics confusion_metrics(const std::vector<bool>& predicted, const std::vector<bool>& actual);
std::vector<std::pair<std::string, double>> feature_importance(const BoostedModel& m);
// Throws DataError on an empty test set.
Metrics evaluate_metrics(const BoostedModel& m, const Dataset& test, double threshold = 0.5);
nlohmann::json to_json(const Metrics& m);

// Holds out the trailing run of consecutive turns (up to five) of every
// session as validation data.
std::pair<Dataset, Dataset> validation_split(const Dataset& train);

struct TuneResult {
  TrainParams best;
  double best_f1 = 0.0;
  std::vector<std::pair<TrainParams, double>> trials;
};

// Small grid over depth, gamma and beta scored by validation F1.
TuneResult tune(const Dataset& train, const TrainParams& base);

}  // namespace handbrain::learner

#endif  // HANDBRAIN_LEARNER_LEARNER_HPP_
