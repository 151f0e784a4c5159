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
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "handbrain/engine/builtin.hpp"
#include "handbrain/features/features.hpp"
#include "handbrain/fragility/fragility.hpp"
#include "support/session_builder.hpp"

using namespace handbrain;
using namespace handbrain::features;
using session::ControlMode;
using session::GazeSample;
using session::Millis;

namespace {

std::vector<GazeSample> at_points(const std::vector<std::pair<double, double>>& xy, Millis step = 33) {
  std::vector<GazeSample> out;
  Millis t = 0;
  for (auto [x, y] : xy) {
    out.push_back({t, x, y, true});
    t += step;
  }
  return out;
}

// Centre of board cell (row, col) on the default 800 px board at (100, 100).
std::pair<double, double> cell_centre(int row, int col) { return {150.0 + 100.0 * col, 150.0 + 100.0 * row}; }

// Percentile trim written out independently: nearest ranks and their blend.
double trimmed_range_oracle(std::vector<double> ys) {
  std::sort(ys.begin(), ys.end());
  const double n1 = static_cast<double>(ys.size() - 1);
  auto pct = [&](double q) {
    const double r = q * n1;
    const double below = ys[static_cast<std::size_t>(r)];
    const double above = ys[std::min(ys.size() - 1, static_cast<std::size_t>(r) + 1)];
    return below + (r - std::floor(r)) * (above - below);
  };
  const double lo = pct(0.025), hi = pct(0.975);
  std::vector<double> kept;
  for (double y : ys) {
    if (y >= lo && y <= hi) kept.push_back(y);
  }
  return kept.back() - kept.front();
}

PositionInfoFn fragility_only() {
  return [](const std::string& fen) {
    PositionInfo info;
    info.fragility = fragility::fragility_score(chess::Position::from_fen(fen));
    return info;
  };
}

testing::SessionBuilder scripted(const std::vector<std::pair<ControlMode, Millis>>& turns, const std::string& id = "s1") {
  testing::SessionBuilder b(id);
  for (auto [mode, ms] : turns) {
    if (!b.turn(mode, ms)) break;
  }
  b.finish();
  return b;
}

}  // namespace

TEST_CASE("vertical dispersion") {
  CHECK(*vertical_dispersion(at_points({{200, 100}, {200, 700}})) == 600.0);
  CHECK(*vertical_dispersion(at_points({{200, 333}})) == 0.0);
  CHECK_FALSE(vertical_dispersion({}).has_value());

  std::vector<GazeSample> w;
  std::vector<double> ys;
  for (int i = 0; i < 100; ++i) ys.push_back(1000.0 * i / 99.0);
  ys.push_back(10000.0);
  for (std::size_t i = 0; i < ys.size(); ++i) w.push_back({static_cast<Millis>(i * 33), 300.0, ys[i], true});
  const double d = *vertical_dispersion(w);
  CHECK(d < 1000.0);
  CHECK(d == doctest::Approx(trimmed_range_oracle(ys)).epsilon(1e-12));

  // Dropouts are ignored entirely.
  w.push_back({5000, 300.0, -90000.0, false});
  CHECK(*vertical_dispersion(w) == d);
  CHECK_FALSE(vertical_dispersion(std::vector<GazeSample>{{0, 1, 1, false}}).has_value());

  std::mt19937_64 rng(3);
  std::normal_distribution<double> ny(500.0, 200.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 40 + static_cast<int>(rng() % 200);
    std::vector<double> yy;
    std::vector<GazeSample> ww;
    for (int i = 0; i < n; ++i) {
      yy.push_back(ny(rng));
      ww.push_back({i * 33, 400.0, yy.back(), true});
    }
    const double got = *vertical_dispersion(ww);
    CHECK(got >= 0.0);
    CHECK(got == doctest::Approx(trimmed_range_oracle(yy)).epsilon(1e-12));
  }
}

TEST_CASE("gaze entropy") {
  CHECK(*gaze_entropy(at_points({cell_centre(3, 4), cell_centre(3, 4), cell_centre(3, 4)})) == 0.0);

  std::vector<std::pair<double, double>> all;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) all.push_back(cell_centre(r, c));
  CHECK(*gaze_entropy(at_points(all)) == doctest::Approx(6.0).epsilon(1e-12));

  CHECK(*gaze_entropy(at_points({cell_centre(0, 0), cell_centre(7, 7), cell_centre(0, 0), cell_centre(7, 7)})) ==
        doctest::Approx(1.0));
  // Off-board points share one cell.
  CHECK(*gaze_entropy(at_points({{10, 10}, {950, 950}, {10, 990}, {5, 5}})) == 0.0);
  CHECK_FALSE(gaze_entropy({}).has_value());

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0, n = 1 + static_cast<int>(rng() % 300); i < n; ++i) pts.emplace_back(u(rng), u(rng));
    const double h = *gaze_entropy(at_points(pts));
    CHECK(h >= 0.0);
    CHECK(h <= std::log2(65.0) + 1e-12);
  }
}

TEST_CASE("dwell ratio") {
  const BoardRect board;
  std::vector<GazeSample> on, off, half;
  for (int i = 0; i < 30; ++i) {
    const Millis t = i * 100;
    on.push_back({t, 500, 500, true});
    off.push_back({t, 20, 500, true});
    half.push_back({t, i % 2 ? 20.0 : 500.0, 500, true});
  }
  CHECK(dwell_ratio(on, board, 3.0) == doctest::Approx(1.0));
  CHECK(dwell_ratio(off, board, 3.0) == 0.0);
  CHECK(dwell_ratio(half, board, 3.0) == doctest::Approx(0.5));
  // More gaze than thinking time clamps.
  CHECK(dwell_ratio(on, board, 1.0) == 1.0);
  // Dropouts count as off-board time.
  on[10].valid = false;
  CHECK(dwell_ratio(on, board, 3.0) == doctest::Approx(29.0 / 30.0));
  CHECK(dwell_ratio({}, board, 1.0) == 0.0);
  CHECK_THROWS_AS(dwell_ratio(on, board, 0.0), UsageError);
  CHECK_THROWS_AS(dwell_ratio(on, board, -1.0), UsageError);
}

TEST_CASE("fixation count") {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 10; ++i) pts.emplace_back(300.0 + i % 3, 300.0);  // 297 ms steady
  CHECK(count_fixations(at_points(pts)) == 1);
  for (int i = 0; i < 10; ++i) pts.emplace_back(700.0, 700.0 + i % 2);
  CHECK(count_fixations(at_points(pts)) == 2);

  // Every sample jumps far away: no fixation.
  std::vector<std::pair<double, double>> saccade;
  for (int i = 0; i < 30; ++i) saccade.emplace_back(100.0 + 120.0 * (i % 7), 100.0 + 200.0 * (i % 4));
  CHECK(count_fixations(at_points(saccade)) == 0);

  // Too short: three samples cover 66 ms.
  CHECK(count_fixations(at_points({{300, 300}, {300, 300}, {300, 300}})) == 0);
}

TEST_CASE("mean surprise") {
  auto emo = [](Millis t, double s) {
    session::EmotionSample e{t, {}};
    e.p.fill((1.0 - s) / 6.0);
    e.p[session::kSurpriseIndex] = s;
    return e;
  };
  std::vector<session::EmotionSample> constant;
  for (int i = 0; i < 20; ++i) constant.push_back(emo(i * 100, 0.3));
  CHECK(*mean_surprise(constant, 0, 2000) == doctest::Approx(0.3));
  CHECK_FALSE(mean_surprise(constant, 5000, 6000).has_value());
  CHECK(*mean_surprise(std::vector{emo(100, 0.2), emo(200, 0.4), emo(900, 0.9)}, 100, 500) ==
        doctest::Approx(0.3));
  CHECK_THROWS_AS(mean_surprise(constant, 10, 10), UsageError);
  CHECK_THROWS_AS(mean_surprise(constant, 20, 10), UsageError);
}

TEST_CASE("rows per turn follow the thinking time") {
  // Turn 1 (2.5 s) is skipped; turn 2 thinks 4.2 s, turn 3 0.6 s.
  auto b = scripted({{ControlMode::kBrain, 2500},
                     {ControlMode::kHand, 4200},
                     {ControlMode::kHand, 600},
                     {ControlMode::kBrain, 3000},
                     {ControlMode::kBrain, 1000}});
  const auto rows = build_feature_rows(b.log, "s1", fragility_only());

  std::map<int, std::vector<FeatureRow>> by_turn;
  for (const auto& r : rows) by_turn[r.turn].push_back(r);
  CHECK_FALSE(by_turn.count(1));
  REQUIRE(by_turn[2].size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(by_turn[2][i].sample_s == i + 1);
    CHECK(by_turn[2][i].label_switch);
    CHECK(by_turn[2][i].label_mode == ControlMode::kHand);
    CHECK(by_turn[2][i].thinking_time_s == doctest::Approx(4.2));
  }
  REQUIRE(by_turn[3].size() == 1);
  CHECK(by_turn[3][0].sample_s == doctest::Approx(0.6));
  CHECK_FALSE(by_turn[3][0].label_switch);
  CHECK(by_turn[4].size() == 3);
  CHECK(by_turn[4][0].label_switch);
  CHECK(by_turn[5].size() == 1);
  CHECK_FALSE(by_turn[5][0].label_switch);

  // Row-count identity and full coverage with clean streams.
  const auto state = session::replay_session(b.log);
  std::size_t expected = 0;
  for (const auto& t : state.turns) {
    if (t.turn > 1) expected += std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(t.thinking_time_s())));
  }
  CHECK(rows.size() == expected);
  for (const auto& r : rows) {
    REQUIRE(r.values.size() == kFeatureNames.size());
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      INFO("turn " << r.turn << " column " << kFeatureNames[i]);
      CHECK(r.values[i].has_value());
    }
  }
  // elapsed_s mirrors the sample point.
  const auto col = std::find(kFeatureNames.begin(), kFeatureNames.end(), "elapsed_s") - kFeatureNames.begin();
  for (const auto& r : rows) CHECK(*r.values[col] == r.sample_s);
}

TEST_CASE("decisive positions are skipped") {
  auto b = scripted({{ControlMode::kBrain, 2000},
                     {ControlMode::kBrain, 2000},
                     {ControlMode::kHand, 2000},
                     {ControlMode::kBrain, 2000}});
  const auto state = session::replay_session(b.log);
  const std::string decisive_fen = state.turns[2].fen_before;
  auto info = [&](const std::string& fen) {
    PositionInfo i;
    i.eval_cp = fen == decisive_fen ? 1200 : 30;
    i.decisive = std::abs(i.eval_cp) >= kDecisiveEvalCp;
    return i;
  };
  std::set<int> turns;
  for (const auto& r : build_feature_rows(b.log, "s1", info)) turns.insert(r.turn);
  CHECK(turns == std::set<int>{2, 4});

  // The annotator flags big evaluations and bare-king material.
  engine::BuiltinEngine evaluator(engine::EngineConfig::evaluator());
  PositionAnnotator annotate(evaluator);
  CHECK_FALSE(annotate(chess::Position::start().fen()).decisive);
  CHECK(annotate(chess::Position::start().fen()).fragility == 0.0);
  CHECK(annotate("4k3/8/8/8/8/8/8/3QK3 w - - 0 1").decisive);
  CHECK(annotate("4k3/8/8/8/8/8/8/3QK3 w - - 0 1").eval_cp >= 1000);
}

TEST_CASE("rows only use data available at the sample instant") {
  testing::SessionBuilder b("causal");
  std::mt19937_64 rng(5);
  // Gaze drifts over time so later samples would change every feature.
  b.gaze = [](Millis t) {
    return GazeSample{t, 120.0 + static_cast<double>((t * 7) % 780), 110.0 + static_cast<double>((t * 13) % 790),
                      t % 500 != 0};
  };
  b.surprise = [](Millis t) { return 0.05 + 0.9 * static_cast<double>(t % 4000) / 4000.0; };
  for (int i = 0; i < 14; ++i) {
    const auto mode = rng() % 2 ? ControlMode::kHand : ControlMode::kBrain;
    if (!b.turn(mode, 500 + static_cast<Millis>(rng() % 6000))) break;
  }
  b.finish();

  const auto info = fragility_only();
  for (int k : {3, 5}) {
    ExtractParams params;
    params.k = k;
    const auto rows = build_feature_rows(b.log, "causal", info, params);
    const auto state = session::replay_session(b.log);
    int checked = 0;
    for (const auto& r : rows) {
      const auto& rec = state.turns[r.turn - 1];
      if (r.sample_s < 1.0) continue;
      const Millis cutoff = rec.start_t + static_cast<Millis>(r.sample_s) * 1000;
      if (cutoff >= rec.mode_t) continue;
      session::SessionLog prefix;
      for (const auto& e : b.log) {
        if (e.t <= cutoff) prefix.push_back(e);
      }
      const auto live = live_features(prefix, cutoff, info, params);
      REQUIRE(live.has_value());
      CHECK(*live == r.values);
      // A later clock inside the same second samples the same instant.
      CHECK(*live_features(prefix, cutoff + 999, info, params) == r.values);
      ++checked;
    }
    CHECK(checked > 10);
  }
}

TEST_CASE("window size") {
  std::vector<std::pair<ControlMode, Millis>> plan;
  for (int i = 0; i < 10; ++i) plan.emplace_back(i % 3 ? ControlMode::kBrain : ControlMode::kHand, 1500 + 300 * i);
  auto b = scripted(plan);
  CHECK_THROWS_AS(build_feature_rows(b.log, "s1", fragility_only(), ExtractParams{4}), UsageError);
  const auto k3 = build_feature_rows(b.log, "s1", fragility_only(), ExtractParams{3});
  const auto k5 = build_feature_rows(b.log, "s1", fragility_only(), ExtractParams{5});
  REQUIRE(k3.size() == k5.size());
  bool differs = false;
  for (std::size_t i = 0; i < k3.size(); ++i) differs |= k3[i].values != k5[i].values;
  CHECK(differs);
  // Current-move columns do not depend on k.
  const std::size_t cur = 7;
  for (std::size_t i = 0; i < k3.size(); ++i) {
    CHECK(std::vector(k3[i].values.begin() + cur, k3[i].values.end()) ==
          std::vector(k5[i].values.begin() + cur, k5[i].values.end()));
  }
}

TEST_CASE("missing streams give missing values, not zeros") {
  auto b = testing::SessionBuilder("dropout");
  b.gaze = [](Millis t) { return GazeSample{t, 0, 0, false}; };
  b.turn(ControlMode::kBrain, 2000);
  b.turn(ControlMode::kHand, 2000);
  b.finish();
  const auto rows = build_feature_rows(b.log, "dropout", fragility_only());
  REQUIRE(rows.size() == 2);
  const auto names = default_feature_names();
  Dataset d{names, rows};
  for (const auto& r : d.rows) {
    CHECK_FALSE(r.values[*d.column("cur_dispersion")].has_value());
    CHECK_FALSE(r.values[*d.column("cur_gaze_entropy")].has_value());
    CHECK(r.values[*d.column("cur_dwell_ratio")] == 0.0);
    CHECK(r.values[*d.column("cur_surprise_mean")].has_value());
  }
}

TEST_CASE("split keeps turns whole and lands near 70/30") {
  auto row = [](const std::string& id, int turn, int rows_per_turn) {
    std::vector<FeatureRow> out;
    for (int i = 0; i < rows_per_turn; ++i) {
      FeatureRow r;
      r.session_id = id;
      r.turn = turn;
      r.sample_s = i + 1;
      r.values = {static_cast<double>(turn)};
      out.push_back(r);
    }
    return out;
  };

  Dataset ten{{"x"}, {}};
  for (int t = 2; t <= 11; ++t) {
    auto rs = row("g", t, 1 + t % 4);
    ten.rows.insert(ten.rows.end(), rs.begin(), rs.end());
  }
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto split = split_dataset(ten, seed);
    CHECK(split.train.rows.size() + split.test.rows.size() == ten.rows.size());
    std::set<int> train, test;
    for (const auto& r : split.train.rows) train.insert(r.turn);
    for (const auto& r : split.test.rows) test.insert(r.turn);
    for (int t : train) CHECK_FALSE(test.count(t));
    CHECK(train.size() + test.size() == 10);
    std::vector<int> covered;
    for (const auto& s : split.segments) {
      CHECK(s.turns.size() <= 5);
      for (std::size_t i = 1; i < s.turns.size(); ++i) CHECK(s.turns[i] == s.turns[i - 1] + 1);
      covered.insert(covered.end(), s.turns.begin(), s.turns.end());
    }
    for (std::size_t i = 0; i + 1 < split.segments.size(); ++i) CHECK(split.segments[i].turns.size() >= 3);
    CHECK(covered.size() == 10);
  }
  const auto a = split_dataset(ten, 9), b = split_dataset(ten, 9);
  CHECK(a.train == b.train);
  CHECK(a.segments == b.segments);
  CHECK(manifest_json(a) == manifest_json(b));

  Dataset big{{"x"}, {}};
  for (int g = 0; g < 40; ++g) {
    for (int t = 2; t < 27; ++t) {
      auto rs = row("game" + std::to_string(g), t, 1 + (g + t) % 5);
      big.rows.insert(big.rows.end(), rs.begin(), rs.end());
    }
  }
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const auto split = split_dataset(big, seed);
    const auto m = manifest_json(split);
    const double train_turns = m["train_turns"].get<double>();
    const double frac = train_turns / 1000.0;
    CHECK(frac >= 0.65);
    CHECK(frac <= 0.75);
    CHECK(train_turns >= 700.0);
    CHECK(train_turns < 705.0);
  }
  CHECK_THROWS_AS(split_dataset(Dataset{{"x"}, {}}, 1), DataError);
}

TEST_CASE("CSV round trip and errors") {
  auto b = scripted({{ControlMode::kBrain, 1500}, {ControlMode::kHand, 3300}, {ControlMode::kHand, 700}});
  Dataset d{default_feature_names(), build_feature_rows(b.log, "s1", fragility_only())};
  d.rows[0].values[0].reset();
  d.rows[1].values[3] = 1.0 / 3.0;
  std::stringstream ss;
  write_csv(ss, d);
  const std::string text = ss.str();
  CHECK(text.rfind("session_id,turn,sample_s,thinking_time_s,turn_eval_delta_cp,label_switch,label_mode,", 0) == 0);
  CHECK(read_csv(ss) == d);

  std::stringstream bad(text.substr(0, text.find('\n') + 1) + "s1,2,1,1.5,0,1,hand,abc" +
                        std::string(d.feature_names.size() - 1, ',') + "\n");
  try {
    read_csv(bad, "data.csv");
    FAIL("expected a data error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("data.csv:2") != std::string::npos);
  }
  std::stringstream mode(text.substr(0, text.find('\n') + 1) + "s1,2,1,1.5,0,1,feet" +
                         std::string(d.feature_names.size(), ',') + "\n");
  CHECK_THROWS_AS(read_csv(mode), DataError);
  std::stringstream header("a,b,c\n");
  CHECK_THROWS_AS(read_csv(header), DataError);
  CHECK_THROWS_AS(read_csv(std::filesystem::path("/nonexistent/data.csv")), DataError);
}

TEST_CASE("task columns and selection") {
  std::vector<std::string> task, behaviour;
  for (auto n : kFeatureNames) (is_task_feature(n) ? task : behaviour).emplace_back(n);
  CHECK(task == std::vector<std::string>{"loc_eval_delta_mean", "loc_eval_delta_last", "loc_fragility_mean",
                                         "loc_fragility_max", "elapsed_s", "cur_eval_cp", "cur_fragility"});
  CHECK(behaviour.size() == 8);

  Dataset d{{"a", "b", "c"}, {}};
  FeatureRow r;
  r.values = {1.0, std::nullopt, 3.0};
  d.rows.push_back(r);
  const auto s = d.select({"c", "a"});
  CHECK(s.feature_names == std::vector<std::string>{"c", "a"});
  CHECK(s.rows[0].values == FeatureVector{3.0, 1.0});
  CHECK_THROWS_AS(d.select({"zzz"}), DataError);
}
