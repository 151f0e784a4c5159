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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "handbrain/learner/learner.hpp"
#include "handbrain/util/hash.hpp"
#include "handbrain/util/json_fields.hpp"

namespace handbrain::learner {

double Tree::predict(const FeatureVector& x) const {
  int id = 0;
  while (!nodes[id].is_leaf()) {
    const auto& n = nodes[id];
    const auto& v = x[n.feature];
    id = (v ? *v < n.threshold : n.missing_left) ? n.left : n.right;
  }
  return nodes[id].value;
}

double BoostedModel::margin(const FeatureVector& x) const {
  if (x.size() != feature_names.size()) {
    throw DataError("row has " + std::to_string(x.size()) + " features, model expects " +
                    std::to_string(feature_names.size()));
  }
  double sum = 0.0;
  for (const auto& t : trees) sum += t.predict(x);
  return base_score + learning_rate * sum;
}

double BoostedModel::predict_proba(const FeatureVector& x) const { return logistic(margin(x)); }

std::vector<double> BoostedModel::predict_proba(const Dataset& data) const {
  if (data.feature_names != feature_names) throw DataError("dataset columns do not match the model's features");
  std::vector<double> out;
  out.reserve(data.rows.size());
  for (const auto& r : data.rows) out.push_back(predict_proba(r.values));
  return out;
}

namespace {

nlohmann::json tree_json(const Tree& t) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : t.nodes) {
    if (n.is_leaf()) {
      nodes.push_back({{"leaf", n.value}, {"cover", n.cover}});
    } else {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"missing", n.missing_left ? "left" : "right"},
                       {"left", n.left},
                       {"right", n.right},
                       {"gain", n.gain},
                       {"cover", n.cover}});
    }
  }
  return nodes;
}

nlohmann::json body_json(const BoostedModel& m) {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : m.trees) trees.push_back(tree_json(t));
  return {{"format", "handbrain-gbdt"},
          {"version", BoostedModel::kFormatVersion},
          {"features", m.feature_names},
          {"base_score", m.base_score},
          {"learning_rate", m.learning_rate},
          {"loss", {{"gamma", m.loss.gamma}, {"alpha", m.loss.alpha}, {"beta", m.loss.beta}}},
          {"elapsed_range", {m.elapsed_range.first, m.elapsed_range.second}},
          {"params", m.params},
          {"trees", trees}};
}

}  // namespace

std::string BoostedModel::digest() const { return util::hex_digest(body_json(*this).dump()); }

nlohmann::json to_json(const BoostedModel& m) {
  auto j = body_json(m);
  j["digest"] = m.digest();
  return j;
}

BoostedModel model_from_json(const nlohmann::json& j) {
  using util::require_field;
  try {
    if (!j.is_object() || j.value("format", "") != "handbrain-gbdt") throw DataError("not a handbrain model file");
    const int version = util::require_int(j, "version", "");
    if (version != BoostedModel::kFormatVersion) {
      throw DataError("unsupported model version " + std::to_string(version));
    }
    BoostedModel m;
    m.feature_names = require_field(j, "features", "").get<std::vector<std::string>>();
    m.base_score = util::require_number(j, "base_score", "");
    m.learning_rate = util::require_number(j, "learning_rate", "");
    const auto& loss = require_field(j, "loss", "");
    m.loss = LossParams{util::require_number(loss, "gamma", "/loss"), util::require_number(loss, "alpha", "/loss"),
                        util::require_number(loss, "beta", "/loss")};
    const auto& range = require_field(j, "elapsed_range", "");
    m.elapsed_range = {range.at(0).get<double>(), range.at(1).get<double>()};
    if (j.contains("params")) m.params = j["params"];
    const int width = static_cast<int>(m.feature_names.size());
    for (const auto& tj : require_field(j, "trees", "")) {
      Tree t;
      for (const auto& nj : tj) {
        TreeNode n;
        n.cover = nj.value("cover", 0.0);
        if (nj.contains("leaf")) {
          n.value = nj.at("leaf").get<double>();
        } else {
          n.feature = nj.at("feature").get<int>();
          n.threshold = nj.at("threshold").get<double>();
          n.missing_left = nj.at("missing").get<std::string>() == "left";
          n.left = nj.at("left").get<int>();
          n.right = nj.at("right").get<int>();
          n.gain = nj.value("gain", 0.0);
          if (n.feature < 0 || n.feature >= width) throw DataError("split on unknown feature " + std::to_string(n.feature));
        }
        t.nodes.push_back(n);
      }
      const int size = static_cast<int>(t.nodes.size());
      if (size == 0) throw DataError("empty tree");
      for (int i = 0; i < size; ++i) {
        const auto& n = t.nodes[i];
        if (!n.is_leaf() && (n.left <= i || n.right <= i || n.left >= size || n.right >= size)) {
          throw DataError("tree child index out of range");
        }
      }
      m.trees.push_back(std::move(t));
    }
    if (j.contains("digest") && j["digest"] != m.digest()) throw DataError("model digest mismatch");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const BoostedModel& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << to_json(m).dump(1) << '\n';
}

BoostedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

Dataset align(const Dataset& data, const BoostedModel& m) { return data.select(m.feature_names); }

// ---------------------------------------------------------------------------

Metrics confusion_metrics(const std::vector<bool>& predicted, const std::vector<bool>& actual) {
  if (predicted.size() != actual.size()) throw UsageError("prediction and label counts differ");
  Metrics m;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i]) (actual[i] ? m.tp : m.fp)++;
    else (actual[i] ? m.fn : m.tn)++;
  }
  const long total = m.tp + m.fp + m.tn + m.fn;
  m.accuracy = total ? static_cast<double>(m.tp + m.tn) / total : 0.0;
  const long den = 2 * m.tp + m.fp + m.fn;
  m.f1 = den ? 2.0 * m.tp / den : 0.0;
  return m;
}

std::vector<std::pair<std::string, double>> feature_importance(const BoostedModel& m) {
  std::vector<double> gain(m.feature_names.size(), 0.0);
  for (const auto& t : m.trees) {
    for (const auto& n : t.nodes) {
      if (!n.is_leaf()) gain[n.feature] += n.gain;
    }
  }
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < gain.size(); ++i) out.emplace_back(m.feature_names[i], gain[i]);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

Metrics evaluate_metrics(const BoostedModel& m, const Dataset& test, double threshold) {
  if (test.rows.empty()) throw DataError("cannot evaluate on an empty test set");
  const auto aligned = align(test, m);
  std::vector<bool> predicted, actual;
  for (const auto& r : aligned.rows) {
    predicted.push_back(m.predict_proba(r.values) >= threshold);
    actual.push_back(r.label_switch);
  }
  auto metrics = confusion_metrics(predicted, actual);
  metrics.importance = feature_importance(m);
  return metrics;
}

nlohmann::json to_json(const Metrics& m) {
  nlohmann::json imp = nlohmann::json::array();
  for (const auto& [name, gain] : m.importance) imp.push_back({{"feature", name}, {"gain", gain}});
  return {{"accuracy", m.accuracy},
          {"f1", m.f1},
          {"confusion", {{"tp", m.tp}, {"fp", m.fp}, {"tn", m.tn}, {"fn", m.fn}}},
          {"importance", imp}};
}

// ---------------------------------------------------------------------------

std::pair<Dataset, Dataset> validation_split(const Dataset& train) {
  std::map<std::string, std::set<int>> turns;
  for (const auto& r : train.rows) turns[r.session_id].insert(r.turn);
  std::set<std::pair<std::string, int>> held;
  for (const auto& [id, ts] : turns) {
    int prev = *ts.rbegin();
    int count = 0;
    for (auto it = ts.rbegin(); it != ts.rend() && count < 5 && (count == 0 || *it == prev - 1); ++it, ++count) {
      prev = *it;
      held.emplace(id, prev);
    }
  }
  Dataset fit{train.feature_names, {}}, val{train.feature_names, {}};
  for (const auto& r : train.rows) (held.count({r.session_id, r.turn}) ? val : fit).rows.push_back(r);
  return {fit, val};
}

TuneResult tune(const Dataset& train, const TrainParams& base) {
  auto [fit, val] = validation_split(train);
  auto both_classes = [](const Dataset& d) {
    bool pos = false, neg = false;
    for (const auto& r : d.rows) (r.label_switch ? pos : neg) = true;
    return pos && neg;
  };
  if (val.rows.empty() || !both_classes(fit)) throw DataError("too little training data to tune");
  TuneResult result;
  result.best = base;
  result.best_f1 = -1.0;
  for (int depth : {3, 4}) {
    for (double gamma : {0.0, 2.0}) {
      for (double beta : {0.0, 1.0}) {
        TrainParams p = base;
        p.depth = depth;
        p.loss.gamma = gamma;
        p.loss.beta = beta;
        const double f1 = evaluate_metrics(learner::train(fit, p), val).f1;
        result.trials.emplace_back(p, f1);
        if (f1 > result.best_f1) {
          result.best_f1 = f1;
          result.best = p;
        }
      }
    }
  }
  return result;
}

}  // namespace handbrain::learner
