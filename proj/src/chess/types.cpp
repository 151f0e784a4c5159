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

#include "handbrain/chess/types.hpp"

namespace handbrain::chess {

namespace {
constexpr std::array<std::string_view, 6> kPieceNames = {
    "pawn", "knight", "bishop", "rook", "queen", "king"};
constexpr std::string_view kPieceLetters = "PNBRQK";
}  // namespace

std::string_view to_string(PieceType type) {
  return kPieceNames[static_cast<int>(type)];
}

std::string_view to_string(Color color) {
  return color == Color::kWhite ? "white" : "black";
}

std::optional<PieceType> piece_type_from_string(std::string_view name) {
  for (PieceType t : kAllPieceTypes) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

std::optional<Color> color_from_string(std::string_view name) {
  if (name == "white") return Color::kWhite;
  if (name == "black") return Color::kBlack;
  return std::nullopt;
}

char piece_letter(PieceType type) {
  return kPieceLetters[static_cast<int>(type)];
}

std::string Square::name() const {
  return {static_cast<char>('a' + file()), static_cast<char>('1' + rank())};
}

std::optional<Square> Square::parse(std::string_view text) {
  if (text.size() != 2) return std::nullopt;
  const int file = text[0] - 'a';
  const int rank = text[1] - '1';
  if (file < 0 || file > 7 || rank < 0 || rank > 7) return std::nullopt;
  return Square::at(file, rank);
}

std::string Move::uci() const {
  std::string out = from.name() + to.name();
  if (promotion) {
    out += static_cast<char>(piece_letter(*promotion) - 'A' + 'a');
  }
  return out;
}

std::optional<Move> Move::parse_uci(std::string_view text) {
  if (text.size() != 4 && text.size() != 5) return std::nullopt;
  auto from = Square::parse(text.substr(0, 2));
  auto to = Square::parse(text.substr(2, 2));
  if (!from || !to || *from == *to) return std::nullopt;
  Move move{*from, *to, std::nullopt};
  if (text.size() == 5) {
    switch (text[4]) {
      case 'q': move.promotion = PieceType::kQueen; break;
      case 'r': move.promotion = PieceType::kRook; break;
      case 'b': move.promotion = PieceType::kBishop; break;
      case 'n': move.promotion = PieceType::kKnight; break;
      default: return std::nullopt;
    }
  }
  return move;
}

}  // namespace handbrain::chess
