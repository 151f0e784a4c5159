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

#ifndef HANDBRAIN_ENGINE_ENGINE_HPP_
#define HANDBRAIN_ENGINE_ENGINE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "handbrain/chess/position.hpp"
#include "json.hpp"

namespace handbrain::engine {

using chess::Move;
using chess::PieceType;
using chess::Position;

enum class EngineRole { kTeammate, kOpponent, kEvaluator };

std::string_view to_string(EngineRole role);

inline constexpr int kMateScore = 30000;
inline constexpr int kMateThreshold = kMateScore - 1000;

struct EngineConfig {
  EngineRole role = EngineRole::kEvaluator;
  // "builtin" or a path to a UCI executable.
  std::string path = "builtin";
  // Exactly one of the two limits is set.
  std::optional<int> depth = 2;
  std::optional<int> movetime_ms;
  std::optional<int> elo;
  std::uint64_t seed = 0;
  // Builtin only: sample from the softened 2-ply policy instead of searching.
  bool humanlike = false;
  int handshake_timeout_ms = 5000;
  int analysis_timeout_ms = 30000;

  bool is_builtin() const { return path == "builtin"; }
  // Throws UsageError when the limits are inconsistent.
  void validate() const;

  static EngineConfig teammate();
  static EngineConfig opponent();
  static EngineConfig evaluator();
};

void to_json(nlohmann::json& j, const EngineConfig& cfg);
void from_json(const nlohmann::json& j, EngineConfig& cfg);

// Score from White's point of view: either centipawns or a forced mate.
class Evaluation {
 public:
  static Evaluation centipawns(int cp, int depth) { return Evaluation(false, cp, depth); }
  // `plies` > 0: White mates; `plies` < 0: Black mates.
  static Evaluation mate(int plies, int depth) { return Evaluation(true, plies, depth); }

  bool is_mate() const { return mate_; }
  // Signed plies to mate; only meaningful when is_mate().
  int mate_plies() const { return mate_ ? value_ : 0; }
  // Mates collapse onto +-(30000 - plies).
  int as_centipawns() const;
  int depth() const { return depth_; }

  bool operator==(const Evaluation&) const = default;

 private:
  Evaluation(bool mate, int value, int depth) : mate_(mate), value_(value), depth_(depth) {}
  bool mate_;
  int value_;
  int depth_;
};

class NoMoveOfTypeError : public Error {
 public:
  explicit NoMoveOfTypeError(PieceType type)
      : Error(ErrorCategory::kData,
              "no move of type " + std::string(chess::to_string(type))),
        type_(type) {}
  PieceType type() const { return type_; }

 private:
  PieceType type_;
};

// One engine instance; not shareable between sessions. Implementations
// serialise their own calls.
class Engine {
 public:
  virtual ~Engine() = default;

  virtual Evaluation evaluate(const Position& pos) = 0;
  // Best move restricted to `constraint` at the root. Throws
  // NoMoveOfTypeError when the constrained set is empty.
  virtual Move best_move(const Position& pos, std::optional<PieceType> constraint) = 0;
  // Type of the unrestricted best move.
  virtual PieceType pick_piece_type(const Position& pos);

  virtual const EngineConfig& config() const = 0;
};

std::unique_ptr<Engine> make_engine(const EngineConfig& cfg);

// One-shot helpers that spin up an engine for a single call.
Evaluation evaluate(const Position& pos, const EngineConfig& cfg);
Move constrained_best_move(const Position& pos, std::optional<PieceType> constraint,
                           const EngineConfig& cfg);
PieceType pick_piece_type(const Position& pos, const EngineConfig& cfg);

}  // namespace handbrain::engine

#endif  // HANDBRAIN_ENGINE_ENGINE_HPP_
