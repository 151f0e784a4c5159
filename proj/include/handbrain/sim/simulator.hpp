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

#ifndef HANDBRAIN_SIM_SIMULATOR_HPP_
#define HANDBRAIN_SIM_SIMULATOR_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "handbrain/engine/engine.hpp"
#include "handbrain/features/features.hpp"
#include "handbrain/session/events.hpp"
#include "json.hpp"

namespace handbrain::sim {

enum class Link { kLogistic, kThreshold };

// Ground-truth switching rule. The switch logit is
//   bias + fragility * frag + eval * (cp / 100) + entropy * h
//        + elapsed * thinking_s + prev_brain * [previous mode was brain]
// where h in [0, 1] is the turn's gaze entropy target. With the threshold
// link the switch probability is 1 when the logit is positive, else 0.
// `noise` flips the decision with that probability.
struct TruthPolicy {
  double bias = 0.0;
  double fragility = 0.0;
  double eval = 0.0;
  double entropy = 0.0;
  double elapsed = 0.0;
  double prev_brain = 0.0;
  double noise = 0.0;
  Link link = Link::kLogistic;

  void validate() const;
  bool operator==(const TruthPolicy&) const = default;

  // Threshold policy that switches exactly when fragility exceeds `cut`.
  static TruthPolicy fragility_driven(double cut = 0.02);
  // Logistic policy on fragility and evaluation, no gaze term.
  static TruthPolicy fragility_and_eval();
};

// Named policies: "fragility" and "mixed". Throws UsageError otherwise.
TruthPolicy policy_preset(const std::string& name);

void to_json(nlohmann::json& j, const TruthPolicy& p);
void from_json(const nlohmann::json& j, TruthPolicy& p);

// Latent per-turn inputs of the policy.
struct TurnInputs {
  double fragility = 0.0;
  int eval_cp = 0;
  double entropy_target = 0.0;
  double thinking_s = 0.0;
  bool prev_brain = false;
};

double switch_logit(const TruthPolicy& p, const TurnInputs& in);
// Probability of a switch after label noise.
double switch_probability(const TruthPolicy& p, const TurnInputs& in);

// Humanlike builtin opponent, so synthetic games stay balanced for longer.
engine::EngineConfig default_opponent();

struct SimConfig {
  TruthPolicy policy;
  engine::EngineConfig teammate = engine::EngineConfig::teammate();
  engine::EngineConfig opponent = default_opponent();
  engine::EngineConfig evaluator = engine::EngineConfig::evaluator();
  int turns = 30;
  std::uint64_t seed = 0;
  std::string session_id;  // default "sim-<seed>"
  double thinking_median_s = 4.0;
  double thinking_sigma = 0.6;
  double thinking_min_s = 0.5;
  double thinking_max_s = 60.0;
  double gaze_period_ms = 33.0;
  session::Millis emotion_period_ms = 100;
  double dropout = 0.0;  // fraction of invalid gaze samples
  features::BoardRect board;

  void validate() const;
};

// Plays one seeded session through the session protocol. Throws UsageError
// when turns < 2; engine failures propagate.
session::SessionLog generate_session(const SimConfig& cfg);

// Seed of session `index` in a corpus generated from `seed`.
std::uint64_t session_seed(std::uint64_t seed, int index);

struct TurnTruth {
  int turn = 0;
  double p_switch = 0.0;
  bool switched = false;
  TurnInputs inputs;
};

// Recomputes the policy's switch probability for turns 2.. from the logged
// state and the latent values stored by the simulator. Throws DataError for
// logs the simulator did not write.
std::vector<TurnTruth> truth_labels(const session::SessionLog& log, const TruthPolicy& policy);

}  // namespace handbrain::sim

#endif  // HANDBRAIN_SIM_SIMULATOR_HPP_
