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
#include <numeric>
#include <random>

#include "handbrain/learner/learner.hpp"

namespace handbrain::learner {

void TrainParams::validate() const {
  if (trees < 0) throw UsageError("trees must be >= 0");
  if (depth < 1) throw UsageError("depth must be >= 1");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw UsageError("learning rate must be in (0, 1]");
  if (min_leaf < 1) throw UsageError("min leaf count must be >= 1");
  if (!(lambda >= 0.0)) throw UsageError("lambda must be >= 0");
  if (!(subsample > 0.0 && subsample <= 1.0)) throw UsageError("subsample must be in (0, 1]");
  loss.validate();
}

void to_json(nlohmann::json& j, const TrainParams& p) {
  j = nlohmann::json{{"trees", p.trees},
                     {"depth", p.depth},
                     {"learning_rate", p.learning_rate},
                     {"min_leaf", p.min_leaf},
                     {"lambda", p.lambda},
                     {"subsample", p.subsample},
                     {"gamma", p.loss.gamma},
                     {"alpha", p.loss.alpha},
                     {"beta", p.loss.beta},
                     {"seed", p.seed}};
}

void from_json(const nlohmann::json& j, TrainParams& p) {
  if (!j.is_object()) throw UsageError("training parameters must be a JSON object");
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("trees", p.trees);
  get("depth", p.depth);
  get("learning_rate", p.learning_rate);
  get("min_leaf", p.min_leaf);
  get("lambda", p.lambda);
  get("subsample", p.subsample);
  get("gamma", p.loss.gamma);
  get("alpha", p.loss.alpha);
  get("beta", p.loss.beta);
  get("seed", p.seed);
  p.validate();
}

namespace {

struct Problem {
  std::size_t n = 0;
  std::size_t f = 0;
  std::vector<std::vector<double>> x;  // [feature][row], NaN for missing
  std::vector<int> y;
  std::vector<double> w;
  // Row indices with a value, sorted by value, per feature.
  std::vector<std::vector<std::uint32_t>> sorted;
  std::vector<std::vector<std::uint32_t>> missing;
};

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::pair<double, double> elapsed_range(const Dataset& data) {
  double lo = data.rows.front().sample_s, hi = lo;
  for (const auto& r : data.rows) {
    lo = std::min(lo, r.sample_s);
    hi = std::max(hi, r.sample_s);
  }
  return {lo, hi};
}

std::vector<double> sample_weights(const Dataset& data, std::pair<double, double> range, double beta) {
  const double span = range.second - range.first;
  std::vector<double> w;
  w.reserve(data.rows.size());
  for (const auto& r : data.rows) {
    const double norm = span > 0.0 ? (r.sample_s - range.first) / span : 0.0;
    w.push_back(time_weight(norm, beta));
  }
  return w;
}

Problem make_problem(const Dataset& data, double beta, std::pair<double, double> range) {
  Problem p;
  p.n = data.rows.size();
  p.f = data.feature_names.size();
  p.x.assign(p.f, std::vector<double>(p.n, kMissing));
  for (std::size_t i = 0; i < p.n; ++i) {
    const auto& r = data.rows[i];
    if (r.values.size() != p.f) throw DataError("row " + std::to_string(i) + " has the wrong width");
    for (std::size_t j = 0; j < p.f; ++j) {
      if (r.values[j]) p.x[j][i] = *r.values[j];
    }
    p.y.push_back(r.label_switch ? 1 : 0);
  }
  p.w = sample_weights(data, range, beta);
  p.sorted.resize(p.f);
  p.missing.resize(p.f);
  for (std::size_t j = 0; j < p.f; ++j) {
    for (std::uint32_t i = 0; i < p.n; ++i) {
      (std::isnan(p.x[j][i]) ? p.missing[j] : p.sorted[j]).push_back(i);
    }
    const auto& col = p.x[j];
    std::stable_sort(p.sorted[j].begin(), p.sorted[j].end(),
                     [&](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
  }
  return p;
}

double mean_loss(const Problem& p, const std::vector<double>& margin, const LossParams& lp) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) {
    num += p.w[i] * focal_terms(margin[i], p.y[i], lp).loss;
    den += p.w[i];
  }
  return num / den;
}

struct Stats {
  double g = 0.0, h = 0.0;
  long n = 0;
  void add(double gi, double hi) {
    g += gi;
    h += hi;
    ++n;
  }
};

struct Split {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
  bool missing_left = false;
};

class TreeBuilder {
 public:
  TreeBuilder(const Problem& p, const TrainParams& params, const std::vector<double>& g,
              const std::vector<double>& h, const std::vector<char>& in_bag)
      : p_(p), params_(params), g_(g), h_(h), in_bag_(in_bag) {}

  Tree build() {
    Tree tree;
    tree.nodes.emplace_back();
    node_of_.assign(p_.n, -1);
    for (std::size_t i = 0; i < p_.n; ++i) {
      if (in_bag_[i]) node_of_[i] = 0;
    }
    std::vector<int> frontier{0};
    for (int level = 0; level <= params_.depth && !frontier.empty(); ++level) {
      const auto totals = node_totals(tree.nodes.size());
      std::vector<Split> best(tree.nodes.size());
      if (level < params_.depth) find_splits(frontier, totals, best);
      std::vector<int> next;
      for (int id : frontier) {
        const Stats& s = totals[id];
        TreeNode& node = tree.nodes[id];
        node.cover = s.h;
        if (best[id].feature < 0) {
          node.value = leaf_value(s);
          continue;
        }
        node.feature = best[id].feature;
        node.threshold = best[id].threshold;
        node.missing_left = best[id].missing_left;
        node.gain = best[id].gain;
        node.left = static_cast<int>(tree.nodes.size());
        node.right = node.left + 1;
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        next.push_back(tree.nodes[id].left);
        next.push_back(tree.nodes[id].right);
      }
      for (std::size_t i = 0; i < p_.n; ++i) {
        const int id = node_of_[i];
        if (id < 0) continue;
        const TreeNode& node = tree.nodes[id];
        if (node.is_leaf()) continue;
        const double v = p_.x[node.feature][i];
        const bool left = std::isnan(v) ? node.missing_left : v < node.threshold;
        node_of_[i] = left ? node.left : node.right;
      }
      frontier = std::move(next);
    }
    return tree;
  }

 private:
  std::vector<Stats> node_totals(std::size_t count) const {
    std::vector<Stats> t(count);
    for (std::size_t i = 0; i < p_.n; ++i) {
      if (node_of_[i] >= 0) t[node_of_[i]].add(g_[i], h_[i]);
    }
    return t;
  }

  double score(const Stats& s) const { return s.g * s.g / (s.h + params_.lambda); }
  double leaf_value(const Stats& s) const { return -s.g / (s.h + params_.lambda); }

  void consider(Split& best, const Stats& total, const Stats& left_nm, const Stats& missing, int feature,
                double threshold) const {
    const double parent = score(total);
    for (bool miss_left : {true, false}) {
      Stats left = left_nm;
      if (miss_left) {
        left.g += missing.g;
        left.h += missing.h;
        left.n += missing.n;
      }
      const Stats right{total.g - left.g, total.h - left.h, total.n - left.n};
      if (left.n < params_.min_leaf || right.n < params_.min_leaf) continue;
      const double gain = 0.5 * (score(left) + score(right) - parent);
      if (gain > best.gain + 1e-12) best = Split{gain, feature, threshold, miss_left};
    }
  }

  void find_splits(const std::vector<int>& frontier, const std::vector<Stats>& totals, std::vector<Split>& best) {
    std::vector<char> active(totals.size(), 0);
    for (int id : frontier) active[id] = 1;
    std::vector<Stats> missing(totals.size()), left(totals.size());
    std::vector<double> last(totals.size());
    std::vector<char> seen(totals.size());
    for (std::size_t j = 0; j < p_.f; ++j) {
      std::fill(missing.begin(), missing.end(), Stats{});
      std::fill(left.begin(), left.end(), Stats{});
      std::fill(seen.begin(), seen.end(), 0);
      for (auto i : p_.missing[j]) {
        if (node_of_[i] >= 0) missing[node_of_[i]].add(g_[i], h_[i]);
      }
      const auto& col = p_.x[j];
      for (auto i : p_.sorted[j]) {
        const int id = node_of_[i];
        if (id < 0 || !active[id]) continue;
        const double v = col[i];
        if (seen[id] && v > last[id]) {
          double thr = last[id] + (v - last[id]) / 2.0;
          if (!(thr > last[id])) thr = v;
          consider(best[id], totals[id], left[id], missing[id], static_cast<int>(j), thr);
        }
        left[id].add(g_[i], h_[i]);
        last[id] = v;
        seen[id] = 1;
      }
    }
  }

  const Problem& p_;
  const TrainParams& params_;
  const std::vector<double>& g_;
  const std::vector<double>& h_;
  const std::vector<char>& in_bag_;
  std::vector<int> node_of_;
};

void scale_leaves(Tree& tree, double factor) {
  for (auto& n : tree.nodes) {
    if (n.is_leaf()) n.value *= factor;
  }
}

void check_labels(const Dataset& data) {
  if (data.rows.empty()) throw DataError("cannot train on an empty dataset");
  bool pos = false, neg = false;
  for (const auto& r : data.rows) (r.label_switch ? pos : neg) = true;
  if (!pos || !neg) throw DataError("training data must contain both switch and non-switch rows");
}

}  // namespace

GradientStats root_statistics(const Dataset& data, const LossParams& lp, double base_score) {
  if (data.rows.empty()) return {};
  const auto w = sample_weights(data, elapsed_range(data), lp.beta);
  GradientStats s;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const auto t = focal_terms(base_score, data.rows[i].label_switch ? 1 : 0, lp);
    s.g += w[i] * t.gradient;
    s.h += w[i] * t.hessian;
  }
  return s;
}

BoostedModel train(const Dataset& data, const TrainParams& params, std::vector<double>* loss_history) {
  params.validate();
  check_labels(data);
  const auto range = elapsed_range(data);
  const Problem p = make_problem(data, params.loss.beta, range);

  BoostedModel model;
  model.feature_names = data.feature_names;
  model.learning_rate = params.learning_rate;
  model.loss = params.loss;
  model.elapsed_range = range;
  model.params = params;
  const double pos = static_cast<double>(std::count(p.y.begin(), p.y.end(), 1));
  model.base_score = std::log(pos / (static_cast<double>(p.n) - pos));

  std::vector<double> margin(p.n, model.base_score);
  double loss = mean_loss(p, margin, params.loss);
  if (loss_history) loss_history->assign(1, loss);

  std::mt19937_64 rng(params.seed);
  std::vector<double> g(p.n), h(p.n);
  std::vector<char> in_bag(p.n, 1);
  for (int round = 0; round < params.trees; ++round) {
    for (std::size_t i = 0; i < p.n; ++i) {
      const auto t = focal_terms(margin[i], p.y[i], params.loss);
      g[i] = p.w[i] * t.gradient;
      h[i] = p.w[i] * t.hessian;
    }
    if (params.subsample < 1.0) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (auto& b : in_bag) b = u(rng) < params.subsample;
    }
    Tree tree = TreeBuilder(p, params, g, h, in_bag).build();
    if (tree.nodes.size() == 1 && std::abs(tree.nodes[0].value) < 1e-15) break;

    // Halve the step until the training loss does not go up.
    bool accepted = false;
    for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
      std::vector<double> trial(p.n);
      for (std::size_t i = 0; i < p.n; ++i) {
        int id = 0;
        while (!tree.nodes[id].is_leaf()) {
          const auto& nd = tree.nodes[id];
          const double v = p.x[nd.feature][i];
          id = (std::isnan(v) ? nd.missing_left : v < nd.threshold) ? nd.left : nd.right;
        }
        trial[i] = margin[i] + params.learning_rate * tree.nodes[id].value;
      }
      const double next = mean_loss(p, trial, params.loss);
      if (next <= loss) {
        accepted = true;
        margin = std::move(trial);
        loss = next;
      } else {
        scale_leaves(tree, 0.5);
      }
    }
    if (!accepted) break;
    model.trees.push_back(std::move(tree));
    if (loss_history) loss_history->push_back(loss);
  }
  return model;
}

}  // namespace handbrain::learner
