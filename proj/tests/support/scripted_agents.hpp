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

#ifndef HANDBRAIN_TESTS_SUPPORT_SCRIPTED_AGENTS_HPP_
#define HANDBRAIN_TESTS_SUPPORT_SCRIPTED_AGENTS_HPP_

#include "handbrain/engine/engine.hpp"
#include "handbrain/util/hash.hpp"

namespace testing {

// Cheap deterministic engine: picks a legal move by hashing the FEN. Lets
// protocol fuzzing run thousands of games without searching.
class HashEngine : public handbrain::engine::Engine {
 public:
  handbrain::engine::Evaluation evaluate(const handbrain::chess::Position&) override {
    return handbrain::engine::Evaluation::centipawns(0, 0);
  }

  handbrain::chess::Move best_move(const handbrain::chess::Position& pos,
                                   std::optional<handbrain::chess::PieceType> constraint) override {
    const auto moves = handbrain::chess::legal_moves_of_type(pos, constraint);
    if (moves.empty()) {
      if (constraint) throw handbrain::engine::NoMoveOfTypeError(*constraint);
      throw handbrain::DataError("no legal moves");
    }
    return moves[handbrain::util::fnv1a64(pos.fen()) % moves.size()];
  }

  const handbrain::engine::EngineConfig& config() const override { return cfg_; }

 private:
  handbrain::engine::EngineConfig cfg_;
};

}  // namespace testing

#endif  // HANDBRAIN_TESTS_SUPPORT_SCRIPTED_AGENTS_HPP_
