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
#include <sstream>

#include "doctest.h"
#include "handbrain/engine/builtin.hpp"
#include "handbrain/fragility/fragility.hpp"
#include "handbrain/session/log.hpp"
#include "handbrain/session/machine.hpp"
#include "handbrain/sim/simulator.hpp"

using namespace handbrain;
using namespace handbrain::sim;

namespace {

std::string dump(const session::SessionLog& log) {
  std::string out;
  for (const auto& e : log) out += session::to_jsonl_line(e) + "\n";
  return out;
}

SimConfig config(std::uint64_t seed, int turns, TruthPolicy policy = {}) {
  SimConfig c;
  c.seed = seed;
  c.turns = turns;
  c.policy = policy;
  return c;
}

}  // namespace

TEST_CASE("policy link and noise") {
  TruthPolicy p;
  p.fragility = 10.0;
  p.bias = -0.2;
  TurnInputs in;
  in.fragility = 0.02;
  CHECK(switch_logit(p, in) == doctest::Approx(0.0));
  CHECK(switch_probability(p, in) == doctest::Approx(0.5));

  in.fragility = 0.05;
  p.eval = 0.5;
  p.entropy = 1.0;
  p.elapsed = -0.1;
  p.prev_brain = 2.0;
  in.eval_cp = -200;
  in.entropy_target = 0.5;
  in.thinking_s = 3.0;
  in.prev_brain = true;
  const double z = -0.2 + 0.5 - 1.0 + 0.5 - 0.3 + 2.0;
  CHECK(switch_logit(p, in) == doctest::Approx(z));
  CHECK(switch_probability(p, in) == doctest::Approx(1.0 / (1.0 + std::exp(-z))));

  auto t = TruthPolicy::fragility_driven(0.03);
  in = {};
  in.fragility = 0.031;
  CHECK(switch_probability(t, in) == 1.0);
  in.fragility = 0.03;
  CHECK(switch_probability(t, in) == 0.0);
  t.noise = 0.2;
  CHECK(switch_probability(t, in) == doctest::Approx(0.2));
  in.fragility = 0.5;
  CHECK(switch_probability(t, in) == doctest::Approx(0.8));

  nlohmann::json j = t;
  CHECK(j.get<TruthPolicy>() == t);
  CHECK_THROWS_AS(nlohmann::json({{"noise", 0.5}}).get<TruthPolicy>(), UsageError);
  CHECK_THROWS_AS(nlohmann::json({{"wobble", 1.0}}).get<TruthPolicy>(), UsageError);
  CHECK_THROWS_AS(nlohmann::json({{"link", "probit"}}).get<TruthPolicy>(), UsageError);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(generate_session(config(1, 1)), UsageError);
  auto c = config(1, 5);
  c.dropout = 1.0;
  CHECK_THROWS_AS(generate_session(c), UsageError);
  c = config(1, 5);
  c.thinking_min_s = 0.0;
  CHECK_THROWS_AS(generate_session(c), UsageError);
  CHECK(session_seed(3, 0) != session_seed(3, 1));
  CHECK(session_seed(3, 0) != session_seed(4, 0));
  CHECK(session_seed(3, 7) == session_seed(3, 7));
}

TEST_CASE("sessions are deterministic and replay cleanly") {
  const auto a = generate_session(config(11, 12, TruthPolicy::fragility_driven()));
  const auto b = generate_session(config(11, 12, TruthPolicy::fragility_driven()));
  CHECK(dump(a) == dump(b));
  CHECK(dump(a) != dump(generate_session(config(12, 12, TruthPolicy::fragility_driven()))));

  const auto state = session::replay_session(a);
  CHECK(state.finished());
  CHECK(state.turns.size() <= 12);
  CHECK(state.turns.size() >= 2);

  // The log survives a JSONL round trip.
  std::istringstream in(dump(a));
  CHECK(dump(session::read_jsonl(in)) == dump(a));

  const auto& start = std::get<session::SessionStart>(a.front().payload);
  CHECK(start.meta["session_id"] == "sim-11");
  CHECK(start.meta["simulator"]["seed"] == 11);
  CHECK(start.meta["simulator"]["policy"].get<TruthPolicy>() == TruthPolicy::fragility_driven());

  // Event times never go backwards.
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i].t >= a[i - 1].t);
}

TEST_CASE("zero-noise threshold policy is followed exactly") {
  const auto policy = TruthPolicy::fragility_driven();
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto log = generate_session(config(session_seed(5, static_cast<int>(seed)), 20, policy));
    const auto truth = truth_labels(log, policy);
    const auto state = session::replay_session(log);
    REQUIRE(truth.size() + 1 == state.turns.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const auto& t = truth[i];
      CHECK((t.p_switch == 0.0 || t.p_switch == 1.0));
      CHECK(t.switched == (t.p_switch == 1.0));
      const auto pos = chess::Position::from_fen(state.turns[i + 1].fen_before);
      CHECK(t.inputs.fragility == fragility::fragility_score(pos));
      CHECK(t.inputs.entropy_target >= 0.0);
      CHECK(t.inputs.entropy_target <= 1.0);
      CHECK(t.inputs.thinking_s >= 0.5);
      CHECK(t.inputs.thinking_s <= 60.0);
    }
  }
}

TEST_CASE("label noise flips at the configured rate") {
  auto policy = TruthPolicy::fragility_driven();
  policy.noise = 0.2;
  std::size_t turns = 0, flips = 0;
  for (int i = 0; i < 16; ++i) {
    const auto log = generate_session(config(session_seed(9, i), 40, policy));
    for (const auto& t : truth_labels(log, policy)) {
      ++turns;
      // The noiseless rule would switch exactly when the logit is positive.
      const bool clean = switch_logit(policy, t.inputs) > 0.0;
      flips += t.switched != clean ? 1 : 0;
    }
  }
  REQUIRE(turns >= 400);
  const double rate = static_cast<double>(flips) / static_cast<double>(turns);
  INFO("turns " << turns << " rate " << rate);
  CHECK(rate > 0.2 - 0.06);
  CHECK(rate < 0.2 + 0.06);
}

TEST_CASE("fragility coefficient drives switching") {
  TruthPolicy p;
  p.fragility = 400.0;
  p.bias = -400.0 * 0.02;
  std::vector<TurnTruth> all;
  for (int i = 0; i < 8; ++i) {
    const auto log = generate_session(config(session_seed(21, i), 30, p));
    const auto t = truth_labels(log, p);
    all.insert(all.end(), t.begin(), t.end());
  }
  std::vector<double> frag;
  for (const auto& t : all) frag.push_back(t.inputs.fragility);
  std::nth_element(frag.begin(), frag.begin() + frag.size() / 2, frag.end());
  const double median = frag[frag.size() / 2];
  double hi = 0, hi_n = 0, lo = 0, lo_n = 0;
  for (const auto& t : all) {
    if (t.inputs.fragility > median) {
      hi += t.switched;
      ++hi_n;
    } else {
      lo += t.switched;
      ++lo_n;
    }
  }
  CHECK(hi / hi_n > lo / lo_n + 0.2);
}

TEST_CASE("simulated logs feed the feature pipeline") {
  auto c = config(77, 15, TruthPolicy::fragility_driven());
  c.dropout = 0.1;
  const auto log = generate_session(c);
  auto ev = engine::make_engine(engine::EngineConfig::evaluator());
  features::PositionAnnotator ann(*ev);
  const auto rows = features::build_feature_rows(log, features::session_id_of(log, "x"), ann.fn());
  REQUIRE_FALSE(rows.empty());
  const auto state = session::replay_session(log);
  const auto truth = truth_labels(log, c.policy);
  for (const auto& r : rows) {
    CHECK(r.session_id == "sim-77");
    CHECK(r.turn >= 2);
    const auto& rec = state.turns[static_cast<std::size_t>(r.turn - 1)];
    CHECK(r.thinking_time_s == doctest::Approx(rec.thinking_time_s()));
    CHECK(r.label_switch == truth[static_cast<std::size_t>(r.turn - 2)].switched);
    // Gaze and emotion arrive every second, so no feature is missing.
    for (const auto& v : r.values) CHECK(v.has_value());
  }

  session::SessionLog foreign = {log.front()};
  std::get<session::SessionStart>(foreign.front().payload).meta = nlohmann::json::object();
  CHECK_THROWS_AS(truth_labels(foreign, c.policy), DataError);
  CHECK_THROWS_AS(truth_labels({}, c.policy), DataError);
}
