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

#include "handbrain/engine/engine.hpp"

#include "handbrain/engine/builtin.hpp"
#include "handbrain/engine/uci.hpp"

namespace handbrain::engine {

std::string_view to_string(EngineRole role) {
  switch (role) {
    case EngineRole::kTeammate: return "teammate";
    case EngineRole::kOpponent: return "opponent";
    case EngineRole::kEvaluator: return "evaluator";
  }
  return "evaluator";
}

void EngineConfig::validate() const {
  if (depth.has_value() == movetime_ms.has_value()) {
    throw UsageError("engine config: set exactly one of depth / movetime_ms");
  }
  if (depth && *depth < 1) throw UsageError("engine config: depth must be >= 1");
  if (movetime_ms && *movetime_ms < 1) throw UsageError("engine config: movetime_ms must be >= 1");
  if (path.empty()) throw UsageError("engine config: empty path");
}

EngineConfig EngineConfig::teammate() {
  EngineConfig cfg;
  cfg.role = EngineRole::kTeammate;
  cfg.elo = 1500;
  cfg.humanlike = true;
  return cfg;
}

EngineConfig EngineConfig::opponent() {
  EngineConfig cfg;
  cfg.role = EngineRole::kOpponent;
  cfg.depth = 2;
  return cfg;
}

EngineConfig EngineConfig::evaluator() {
  EngineConfig cfg;
  cfg.role = EngineRole::kEvaluator;
  cfg.depth = 2;
  return cfg;
}

void to_json(nlohmann::json& j, const EngineConfig& cfg) {
  j = nlohmann::json{{"role", to_string(cfg.role)}, {"path", cfg.path}};
  if (cfg.depth) j["depth"] = *cfg.depth;
  if (cfg.movetime_ms) j["movetime_ms"] = *cfg.movetime_ms;
  if (cfg.elo) j["elo"] = *cfg.elo;
  j["seed"] = cfg.seed;
  if (cfg.humanlike) j["humanlike"] = true;
}

void from_json(const nlohmann::json& j, EngineConfig& cfg) {
  if (!j.is_object()) throw UsageError("engine config must be a JSON object");
  cfg = EngineConfig{};
  if (j.contains("role")) {
    const std::string role = j.at("role").get<std::string>();
    if (role == "teammate") cfg.role = EngineRole::kTeammate;
    else if (role == "opponent") cfg.role = EngineRole::kOpponent;
    else if (role == "evaluator") cfg.role = EngineRole::kEvaluator;
    else throw UsageError("engine config: unknown role '" + role + "'");
  }
  if (j.contains("path")) cfg.path = j.at("path").get<std::string>();
  if (j.contains("movetime_ms")) {
    cfg.movetime_ms = j.at("movetime_ms").get<int>();
    cfg.depth.reset();
  }
  if (j.contains("depth")) cfg.depth = j.at("depth").get<int>();
  if (j.contains("elo")) cfg.elo = j.at("elo").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("humanlike")) cfg.humanlike = j.at("humanlike").get<bool>();
  if (j.contains("handshake_timeout_ms")) cfg.handshake_timeout_ms = j.at("handshake_timeout_ms").get<int>();
  if (j.contains("analysis_timeout_ms")) cfg.analysis_timeout_ms = j.at("analysis_timeout_ms").get<int>();
  cfg.validate();
}

int Evaluation::as_centipawns() const {
  if (!mate_) return value_;
  return value_ > 0 ? kMateScore - value_ : -(kMateScore + value_);
}

PieceType Engine::pick_piece_type(const Position& pos) {
  return best_move(pos, std::nullopt).piece;
}

std::unique_ptr<Engine> make_engine(const EngineConfig& cfg) {
  if (cfg.is_builtin()) return std::make_unique<BuiltinEngine>(cfg);
  return std::make_unique<UciEngine>(cfg);
}

Evaluation evaluate(const Position& pos, const EngineConfig& cfg) {
  if (cfg.role != EngineRole::kEvaluator) {
    throw UsageError("evaluate() needs an evaluator config, got " + std::string(to_string(cfg.role)));
  }
  return make_engine(cfg)->evaluate(pos);
}

Move constrained_best_move(const Position& pos, std::optional<PieceType> constraint,
                           const EngineConfig& cfg) {
  return make_engine(cfg)->best_move(pos, constraint);
}

PieceType pick_piece_type(const Position& pos, const EngineConfig& cfg) {
  return make_engine(cfg)->pick_piece_type(pos);
}

}  // namespace handbrain::engine
