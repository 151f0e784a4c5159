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

#ifndef HANDBRAIN_CHESS_POSITION_HPP_
#define HANDBRAIN_CHESS_POSITION_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "handbrain/chess/types.hpp"

namespace handbrain::chess {

inline constexpr std::string_view kStartFen =
    "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

struct CastlingRights {
  bool white_king = false;
  bool white_queen = false;
  bool black_king = false;
  bool black_queen = false;

  bool operator==(const CastlingRights&) const = default;
};

// Immutable-by-convention chess position. All mutation goes through
// apply_move(), which returns a fresh value.
class Position {
 public:
  static Position start();
  // Throws FenError naming the offending field.
  static Position from_fen(std::string_view fen);

  std::string fen() const;
  // Placement, side, castling and en-passant fields; equal keys mean the
  // same position for repetition purposes.
  std::string repetition_key() const;

  std::optional<Piece> at(Square sq) const;
  Color side_to_move() const { return side_; }
  const CastlingRights& castling() const { return castling_; }
  std::optional<Square> en_passant() const { return ep_; }
  int halfmove_clock() const { return halfmove_; }
  int fullmove_number() const { return fullmove_; }

  Square king_square(Color color) const;
  bool is_attacked(Square sq, Color by) const;
  bool in_check() const { return is_attacked(king_square(side_), ~side_); }

  int count(Color color, PieceType type) const;
  int piece_count() const;

  // Ranks reflected and colours swapped; side to move flips too.
  Position mirrored() const;

  bool operator==(const Position&) const = default;

 private:
  friend class PositionEditor;

  // 0 = empty, otherwise 1 + color * 6 + type.
  std::array<std::uint8_t, 64> board_{};
  Color side_ = Color::kWhite;
  CastlingRights castling_;
  std::optional<Square> ep_;
  int halfmove_ = 0;
  int fullmove_ = 1;
};

// Legal moves, optionally restricted to one moving piece type. An empty list
// means no legal move of that type exists.
std::vector<Move> legal_moves_of_type(const Position& pos,
                                      std::optional<PieceType> constraint);
inline std::vector<Move> legal_moves(const Position& pos) {
  return legal_moves_of_type(pos, std::nullopt);
}

// Pseudo-legal moves for the side to move (own king may be left in check).
std::vector<Move> pseudo_legal_moves(const Position& pos);

// Resolves `move` (from/to/promotion) against the legal move list. A pawn move
// to the last rank without a promotion piece is treated as a queen promotion.
// Returns the fully annotated move, or nullopt when illegal.
std::optional<Move> find_legal_move(const Position& pos, const Move& move);

// Throws IllegalMoveError when `move` is not legal in `pos`.
Position apply_move(const Position& pos, const Move& move);

// Skips the legality lookup; `move` must come from the generator.
Position apply_generated_move(const Position& pos, const Move& move);

std::uint64_t perft(const Position& pos, int depth);

enum class GameStatus { kOngoing, kCheckmate, kStalemate };
GameStatus game_status(const Position& pos);

// One side has a bare king and the other at least a queen's worth of material.
bool is_bare_king_imbalance(const Position& pos);

// Conventional material values in centipawns (king = 0).
int material_value(PieceType type);

// Number of pseudo-legal destination squares for `color`'s pieces, ignoring
// castling and en passant. Cheap; used as an evaluation term.
int mobility(const Position& pos, Color color);

}  // namespace handbrain::chess

#endif  // HANDBRAIN_CHESS_POSITION_HPP_
