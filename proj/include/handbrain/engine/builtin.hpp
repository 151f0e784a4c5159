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

#ifndef HANDBRAIN_ENGINE_BUILTIN_HPP_
#define HANDBRAIN_ENGINE_BUILTIN_HPP_

#include <cstdint>
#include <mutex>
#include <optional>

#include "handbrain/engine/engine.hpp"

namespace handbrain::engine {

// Material plus mobility, centipawns, White's point of view. Exactly
// antisymmetric under Position::mirrored().
int static_eval(const Position& pos);

struct SearchResult {
  int score = 0;  // side to move's point of view
  std::optional<Move> best;
  int depth = 0;
  std::uint64_t nodes = 0;
};

// Alpha-beta to `depth` plies plus a capture-only quiescence search.
// Iterates depth 1..`depth` and stops early once `node_budget` nodes are
// spent, returning the deepest completed iteration.
SearchResult search(const Position& pos, std::optional<PieceType> root_constraint, int depth,
                    std::uint64_t node_budget = UINT64_MAX);

// Offline teammate policy: scores each constrained move with a 2-ply
// material+mobility minimax, then samples among the top three with a
// temperature-1 softmax over pawn units. Deterministic in (pos, constraint,
// seed). Throws NoMoveOfTypeError on an empty constrained set.
Move fallback_move(const Position& pos, std::optional<PieceType> constraint, std::uint64_t seed);

class BuiltinEngine : public Engine {
 public:
  explicit BuiltinEngine(EngineConfig cfg);

  Evaluation evaluate(const Position& pos) override;
  Move best_move(const Position& pos, std::optional<PieceType> constraint) override;
  const EngineConfig& config() const override { return cfg_; }

 private:
  int depth_limit() const;
  std::uint64_t node_budget() const;

  EngineConfig cfg_;
  std::mutex mutex_;
};

}  // namespace handbrain::engine

#endif  // HANDBRAIN_ENGINE_BUILTIN_HPP_
