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

#include <cmath>
#include <random>

#include "doctest.h"
#include "handbrain/learner/learner.hpp"
#include "oracles/focal_oracle.hpp"

using namespace handbrain;
using namespace handbrain::learner;
using features::FeatureRow;

namespace {

FeatureRow make_row(std::vector<std::optional<double>> values, bool label, double elapsed = 1.0,
                    const std::string& session = "s", int turn = 2) {
  FeatureRow r;
  r.session_id = session;
  r.turn = turn;
  r.sample_s = elapsed;
  r.label_switch = label;
  r.values = std::move(values);
  return r;
}

Dataset separable(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Dataset d{{"x"}, {}};
  for (int i = 0; i < n; ++i) {
    const double x = u(rng);
    d.rows.push_back(make_row({x}, x > 0.0, 1.0 + i % 6));
  }
  return d;
}

TrainParams logistic_params() {
  TrainParams p;
  p.loss = LossParams{0.0, 1.0, 0.0};
  return p;
}

}  // namespace

TEST_CASE("focal loss closed forms") {
  const LossParams ce{0.0, 1.0, 0.0};
  CHECK(focal_terms(0.0, 1, ce).loss == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  const double m09 = std::log(0.9 / 0.1);
  CHECK(focal_terms(m09, 1, LossParams{2.0, 1.0, 0.0}).loss == doctest::Approx(0.01 * -std::log(0.9)).epsilon(1e-12));
  CHECK(focal_terms(m09, 1, LossParams{2.0, 1.0, 0.0}).loss == doctest::Approx(1.0536e-3).epsilon(1e-4));
  // Alpha scales every term.
  const auto a = focal_terms(0.7, 0, LossParams{1.5, 1.0, 0.0});
  const auto b = focal_terms(0.7, 0, LossParams{1.5, 0.25, 0.0});
  CHECK(b.loss == doctest::Approx(0.25 * a.loss));
  CHECK(b.gradient == doctest::Approx(0.25 * a.gradient));
  // Saturated margins stay finite.
  for (double m : {-1e6, -800.0, 800.0, 1e6}) {
    for (int y : {0, 1}) {
      const auto t = focal_terms(m, y, LossParams{});
      CHECK(std::isfinite(t.loss));
      CHECK(std::isfinite(t.gradient));
      CHECK(t.hessian >= kHessianFloor);
    }
  }
}

TEST_CASE("focal derivatives match finite differences") {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_g = 0.0, worst_h = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const LossParams lp{5.0 * u(rng), 1.0 - u(rng) * 0.999, 3.0 * u(rng)};
    const double margin = -6.0 + 12.0 * u(rng);
    const int y = static_cast<int>(rng() % 2);
    const double w = time_weight(u(rng), lp.beta);
    const auto fd = oracle::central_differences(margin, y, lp, w);
    const auto t = focal_terms(margin, y, lp);
    worst_g = std::max(worst_g, oracle::relative_error(w * t.gradient, fd.gradient));
    worst_h = std::max(worst_h, oracle::relative_error(w * t.raw_hessian, fd.hessian));
    CHECK(t.hessian == std::max(t.raw_hessian, kHessianFloor));
  }
  CHECK(worst_g < 1e-4);
  CHECK(worst_h < 1e-4);
}

TEST_CASE("gamma 0, alpha 1 is cross-entropy") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  for (int i = 0; i < 1000; ++i) {
    const double m = u(rng);
    const int y = static_cast<int>(rng() % 2);
    CHECK(std::abs(focal_terms(m, y, LossParams{0.0, 1.0, 0.0}).loss - oracle::cross_entropy(m, y)) < 1e-9);
  }
}

TEST_CASE("time weights") {
  CHECK(time_weight(0.0, 1.7) == 1.0);
  CHECK(time_weight(1.0, 1.0) == doctest::Approx(2.718281828459045));
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double w = time_weight(i / 100.0, 0.5);
    CHECK(w > prev);
    prev = w;
  }
}

TEST_CASE("boosting fits a separable toy problem") {
  const auto d = separable(500, 1);
  TrainParams p;
  p.trees = 50;
  std::vector<double> history;
  const auto m = train(d, p, &history);
  CHECK(m.trees.size() <= 50);
  const auto metrics = evaluate_metrics(m, d);
  CHECK(metrics.f1 == 1.0);
  CHECK(metrics.accuracy == 1.0);
  CHECK(m.predict_proba(FeatureVector{-1.0}) < 0.5);
  CHECK(m.predict_proba(FeatureVector{1.0}) > 0.5);
  for (std::size_t i = 1; i < history.size(); ++i) CHECK(history[i] <= history[i - 1]);

  // Batch and single-row prediction agree.
  const auto batch = m.predict_proba(d);
  for (std::size_t i = 0; i < d.rows.size(); ++i) CHECK(batch[i] == m.predict_proba(d.rows[i].values));
  CHECK(feature_importance(m).front().first == "x");
  CHECK(feature_importance(m).front().second > 0.0);
}

TEST_CASE("constant features converge to the base rate") {
  Dataset d{{"a", "b"}, {}};
  for (int i = 0; i < 1000; ++i) d.rows.push_back(make_row({1.0, 2.0}, i % 10 < 3));
  const auto m = train(d, logistic_params());
  for (const auto& r : d.rows) CHECK(m.predict_proba(r.values) == doctest::Approx(0.30).epsilon(0.02 / 0.30));
}

TEST_CASE("logistic settings reproduce cross-entropy boosting") {
  const auto d = separable(300, 4);
  std::vector<double> history;
  auto p = logistic_params();
  p.trees = 20;
  const auto m = train(d, p, &history);
  double ce = 0.0;
  for (const auto& r : d.rows) ce += oracle::cross_entropy(m.margin(r.values), r.label_switch ? 1 : 0);
  ce /= static_cast<double>(d.rows.size());
  CHECK(std::abs(history.back() - ce) < 1e-9);
}

TEST_CASE("training loss never increases") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0.0, 1.0);
  Dataset d{{"a", "b", "c"}, {}};
  for (int i = 0; i < 600; ++i) {
    const double a = n(rng), b = n(rng), c = n(rng);
    const bool y = a + 0.5 * b + 0.8 * n(rng) > 0.3;
    d.rows.push_back(make_row({a, i % 7 == 0 ? std::nullopt : std::optional(b), c}, y, 1.0 + i % 9));
  }
  for (double lr : {0.05, 0.1, 0.3}) {
    for (double gamma : {0.0, 2.0, 5.0}) {
      TrainParams p;
      p.trees = 60;
      p.learning_rate = lr;
      p.loss.gamma = gamma;
      std::vector<double> history;
      train(d, p, &history);
      for (std::size_t i = 1; i < history.size(); ++i) CHECK(history[i] <= history[i - 1]);
      CHECK(history.back() < history.front());
    }
  }
}

TEST_CASE("missing values follow the better branch") {
  // Positives never report the feature; negatives always do.
  Dataset d{{"x"}, {}};
  for (int i = 0; i < 200; ++i) {
    const bool y = i % 3 == 0;
    d.rows.push_back(make_row({y ? std::nullopt : std::optional<double>(i * 0.01)}, y));
  }
  const auto m = train(d, logistic_params());
  CHECK(m.predict_proba(FeatureVector{std::nullopt}) > 0.9);
  CHECK(m.predict_proba(FeatureVector{0.5}) < 0.1);
}

TEST_CASE("training is deterministic and rejects bad data") {
  const auto d = separable(200, 8);
  TrainParams p;
  p.trees = 30;
  p.subsample = 0.8;
  p.seed = 5;
  CHECK(train(d, p).digest() == train(d, p).digest());
  p.seed = 6;
  CHECK(train(d, p).digest() != train(d, [&] { auto q = p; q.seed = 5; return q; }()).digest());

  Dataset one{{"x"}, {make_row({1.0}, true), make_row({2.0}, true)}};
  CHECK_THROWS_AS(train(one, TrainParams{}), DataError);
  CHECK_THROWS_AS(train(Dataset{{"x"}, {}}, TrainParams{}), DataError);
  TrainParams bad;
  bad.loss.alpha = 0.0;
  CHECK_THROWS_AS(train(d, bad), UsageError);
}

TEST_CASE("prediction contract") {
  BoostedModel empty;
  empty.feature_names = {"x"};
  CHECK(empty.predict_proba(FeatureVector{3.0}) == 0.5);
  CHECK_THROWS_AS(empty.predict_proba(FeatureVector{1.0, 2.0}), DataError);

  Dataset other{{"y"}, {make_row({1.0}, true)}};
  CHECK_THROWS_AS(align(other, empty), DataError);
  CHECK_THROWS_AS(empty.predict_proba(other), DataError);
}

TEST_CASE("metrics") {
  auto m = confusion_metrics({true, false, true}, {true, false, true});
  CHECK(m.accuracy == 1.0);
  CHECK(m.f1 == 1.0);
  m = confusion_metrics({false, false, false, false}, {true, false, true, false});
  CHECK(m.f1 == 0.0);
  CHECK(m.accuracy == 0.5);
  m = confusion_metrics({true, true, true, false, false}, {true, true, false, true, false});
  CHECK(m.tp == 2);
  CHECK(m.fp == 1);
  CHECK(m.fn == 1);
  CHECK(m.tn == 1);
  CHECK(m.f1 == doctest::Approx(2.0 * 2 / (2.0 * 2 + 1 + 1)));
  CHECK(m.f1 == doctest::Approx(0.6667).epsilon(1e-4));
  CHECK(m.accuracy == doctest::Approx(3.0 / 5.0));
  CHECK(confusion_metrics({false, false}, {false, false}).f1 == 0.0);

  BoostedModel dummy;
  dummy.feature_names = {"x"};
  CHECK_THROWS_AS(evaluate_metrics(dummy, Dataset{{"x"}, {}}), DataError);
}

TEST_CASE("model serialization") {
  Dataset d{{"a", "b"}, {}};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double a = u(rng), b = u(rng);
    d.rows.push_back(make_row({a, i % 5 ? std::optional(b) : std::nullopt}, a * b > 0.2, 1.0 + i % 4));
  }
  TrainParams p;
  p.trees = 40;
  const auto m = train(d, p);
  const auto j = to_json(m);
  CHECK(j["version"] == 1);
  const auto back = model_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back == m);
  CHECK(back.digest() == m.digest());
  for (const auto& r : d.rows) CHECK(back.predict_proba(r.values) == m.predict_proba(r.values));

  auto tampered = j;
  tampered["base_score"] = 0.123;
  CHECK_THROWS_AS(model_from_json(tampered), DataError);
  auto future = j;
  future["version"] = 99;
  CHECK_THROWS_AS(model_from_json(future), DataError);
  auto bad_feature = j;
  bad_feature.erase("digest");
  bad_feature["trees"][0][0]["feature"] = 7;
  CHECK_THROWS_AS(model_from_json(bad_feature), DataError);
  CHECK_THROWS_AS(model_from_json(nlohmann::json::array()), DataError);
}

TEST_CASE("later samples carry more weight") {
  Dataset d{{"x"}, {}};
  for (int i = 0; i < 50; ++i) d.rows.push_back(make_row({i * 0.1}, i % 2 == 0, 1.0 + i % 10));
  const LossParams lp{2.0, 0.25, 1.5};
  const auto base = root_statistics(d, lp, 0.0);
  auto with_dup = [&](double elapsed) {
    auto e = d;
    e.rows.push_back(make_row({0.0}, true, elapsed));
    return root_statistics(e, lp, 0.0);
  };
  const auto late = with_dup(10.0), early = with_dup(1.0);
  CHECK(std::abs(late.g - base.g) >= std::abs(early.g - base.g));
  CHECK(std::abs(late.h - base.h) >= std::abs(early.h - base.h));
  CHECK(std::abs(late.g - base.g) > std::abs(early.g - base.g));
}

TEST_CASE("validation split and tuning") {
  Dataset d{{"x"}, {}};
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s < 6; ++s) {
    for (int t : {2, 3, 4, 5, 9, 10, 11, 12, 13, 14, 15}) {
      for (int k = 1; k <= 3; ++k) {
        const double x = u(rng);
        d.rows.push_back(make_row({x}, x > 0.1, k, "g" + std::to_string(s), t));
      }
    }
  }
  const auto [fit, val] = validation_split(d);
  CHECK(fit.rows.size() + val.rows.size() == d.rows.size());
  for (const auto& r : val.rows) CHECK(r.turn >= 11);
  CHECK(val.rows.size() == 6 * 5 * 3);

  TrainParams base;
  base.trees = 20;
  const auto result = tune(d, base);
  CHECK(result.trials.size() == 8);
  CHECK(result.best_f1 > 0.8);
  CHECK(result.best.trees == 20);
}
