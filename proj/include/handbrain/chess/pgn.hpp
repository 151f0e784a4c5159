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

#ifndef HANDBRAIN_CHESS_PGN_HPP_
#define HANDBRAIN_CHESS_PGN_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "handbrain/chess/position.hpp"

namespace handbrain::chess {

// Standard algebraic notation for a legal move, with check/mate suffix.
std::string to_san(const Position& pos, const Move& move);

// Accepts SAN with or without check/annotation suffixes; throws DataError on
// unknown or ambiguous input.
Move parse_san(const Position& pos, std::string_view san);

struct PgnGame {
  std::vector<std::pair<std::string, std::string>> tags;
  Position start = Position::start();
  std::vector<Move> moves;
  std::string result = "*";

  std::string tag(std::string_view name) const;
};

std::string write_pgn(const PgnGame& game);

// Parses every game in `text`. Comments, NAGs and variations are skipped.
std::vector<PgnGame> read_pgn(std::string_view text);

}  // namespace handbrain::chess

#endif  // HANDBRAIN_CHESS_PGN_HPP_
