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

#ifndef HANDBRAIN_CHESS_TYPES_HPP_
#define HANDBRAIN_CHESS_TYPES_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "handbrain/error.hpp"

namespace handbrain::chess {

enum class Color : std::uint8_t { kWhite = 0, kBlack = 1 };

constexpr Color operator~(Color c) {
  return c == Color::kWhite ? Color::kBlack : Color::kWhite;
}

enum class PieceType : std::uint8_t {
  kPawn = 0,
  kKnight,
  kBishop,
  kRook,
  kQueen,
  kKing,
};

inline constexpr std::array<PieceType, 6> kAllPieceTypes = {
    PieceType::kPawn, PieceType::kKnight, PieceType::kBishop,
    PieceType::kRook, PieceType::kQueen,  PieceType::kKing};

// Lower-case names ("pawn", "knight", ...) as used on the wire and in logs.
std::string_view to_string(PieceType type);
std::string_view to_string(Color color);
std::optional<PieceType> piece_type_from_string(std::string_view name);
std::optional<Color> color_from_string(std::string_view name);

// 'P','N','B','R','Q','K' (upper-case).
char piece_letter(PieceType type);

struct Piece {
  Color color;
  PieceType type;

  bool operator==(const Piece&) const = default;
};

// Square index 0..63, a1 = 0, b1 = 1, ..., h8 = 63.
class Square {
 public:
  constexpr Square() = default;
  constexpr explicit Square(int index) : index_(static_cast<std::uint8_t>(index)) {}
  static constexpr Square at(int file, int rank) { return Square(rank * 8 + file); }

  constexpr int index() const { return index_; }
  constexpr int file() const { return index_ & 7; }
  constexpr int rank() const { return index_ >> 3; }
  // Same file, rank reflected (a1 <-> a8).
  constexpr Square flipped() const { return Square(index_ ^ 56); }

  std::string name() const;
  static std::optional<Square> parse(std::string_view text);

  constexpr bool operator==(const Square&) const = default;
  constexpr auto operator<=>(const Square&) const = default;

 private:
  std::uint8_t index_ = 0;
};

struct Move {
  Square from;
  Square to;
  std::optional<PieceType> promotion;

  // Filled in by the generator; ignored by equality.
  PieceType piece = PieceType::kPawn;
  std::optional<PieceType> captured;
  bool en_passant = false;
  bool castling = false;

  // "e2e4", "e7e8q".
  std::string uci() const;
  // Syntactic parse only; derived fields are left at their defaults.
  static std::optional<Move> parse_uci(std::string_view text);

  bool operator==(const Move& other) const {
    return from == other.from && to == other.to && promotion == other.promotion;
  }
};

class FenError : public DataError {
 public:
  FenError(std::string field, const std::string& what)
      : DataError("FEN " + field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IllegalMoveError : public DataError {
 public:
  IllegalMoveError(const Move& move, const std::string& fen)
      : DataError("illegal move " + move.uci() + " in " + fen), move_(move) {}
  const Move& move() const { return move_; }

 private:
  Move move_;
};

}  // namespace handbrain::chess

#endif  // HANDBRAIN_CHESS_TYPES_HPP_
