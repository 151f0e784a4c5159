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

#include "handbrain/chess/pgn.hpp"

#include <algorithm>
#include <cctype>

namespace handbrain::chess {

namespace {

std::string strip_suffixes(std::string_view san) {
  std::string out(san);
  while (!out.empty() && (out.back() == '+' || out.back() == '#' || out.back() == '!' ||
                          out.back() == '?')) {
    out.pop_back();
  }
  std::erase(out, '=');
  if (out == "0-0") out = "O-O";
  if (out == "0-0-0") out = "O-O-O";
  return out;
}

bool is_result_token(std::string_view tok) {
  return tok == "1-0" || tok == "0-1" || tok == "1/2-1/2" || tok == "*";
}

}  // namespace

std::string to_san(const Position& pos, const Move& move) {
  std::string out;
  if (move.castling) {
    out = move.to.file() > move.from.file() ? "O-O" : "O-O-O";
  } else {
    if (move.piece == PieceType::kPawn) {
      if (move.captured) {
        out += static_cast<char>('a' + move.from.file());
      }
    } else {
      out += piece_letter(move.piece);
      bool clash = false;
      bool same_file = false;
      bool same_rank = false;
      for (const Move& other : legal_moves_of_type(pos, move.piece)) {
        if (other.to != move.to || other.from == move.from) continue;
        clash = true;
        same_file |= other.from.file() == move.from.file();
        same_rank |= other.from.rank() == move.from.rank();
      }
      if (clash) {
        if (!same_file) {
          out += static_cast<char>('a' + move.from.file());
        } else if (!same_rank) {
          out += static_cast<char>('1' + move.from.rank());
        } else {
          out += move.from.name();
        }
      }
    }
    if (move.captured) out += 'x';
    out += move.to.name();
    if (move.promotion) {
      out += '=';
      out += piece_letter(*move.promotion);
    }
  }
  const Position next = apply_generated_move(pos, move);
  if (next.in_check()) {
    out += legal_moves(next).empty() ? '#' : '+';
  }
  return out;
}

Move parse_san(const Position& pos, std::string_view san) {
  const std::string wanted = strip_suffixes(san);
  std::optional<Move> found;
  for (const Move& m : legal_moves(pos)) {
    if (strip_suffixes(to_san(pos, m)) != wanted) continue;
    if (found) throw DataError("ambiguous SAN '" + std::string(san) + "'");
    found = m;
  }
  if (!found) {
    throw DataError("SAN '" + std::string(san) + "' is not legal in " + pos.fen());
  }
  return *found;
}

std::string PgnGame::tag(std::string_view name) const {
  for (const auto& [key, value] : tags) {
    if (key == name) return value;
  }
  return {};
}

std::string write_pgn(const PgnGame& game) {
  std::string out;
  bool has_result = false;
  for (const auto& [key, value] : game.tags) {
    if (key == "Result") has_result = true;
    out += "[" + key + " \"" + value + "\"]\n";
  }
  if (!has_result) out += "[Result \"" + game.result + "\"]\n";
  if (game.start != Position::start() && game.tag("FEN").empty()) {
    out += "[SetUp \"1\"]\n[FEN \"" + game.start.fen() + "\"]\n";
  }
  out += '\n';

  std::string line;
  auto emit = [&](const std::string& tok) {
    if (!line.empty() && line.size() + 1 + tok.size() > 79) {
      out += line + '\n';
      line.clear();
    }
    if (!line.empty()) line += ' ';
    line += tok;
  };

  Position pos = game.start;
  bool first = true;
  for (const Move& m : game.moves) {
    if (pos.side_to_move() == Color::kWhite) {
      emit(std::to_string(pos.fullmove_number()) + ".");
    } else if (first) {
      emit(std::to_string(pos.fullmove_number()) + "...");
    }
    first = false;
    emit(to_san(pos, m));
    pos = apply_generated_move(pos, m);
  }
  emit(game.result);
  out += line + "\n";
  return out;
}

std::vector<PgnGame> read_pgn(std::string_view text) {
  std::vector<PgnGame> games;
  PgnGame current;
  Position pos = Position::start();
  bool in_game = false;

  auto finish = [&](std::string result) {
    current.result = std::move(result);
    games.push_back(std::move(current));
    current = PgnGame{};
    pos = Position::start();
    in_game = false;
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    if (ch == '[') {
      const std::size_t end = text.find(']', i);
      if (end == std::string_view::npos) throw DataError("PGN: unterminated tag");
      const std::string_view body = text.substr(i + 1, end - i - 1);
      const std::size_t q1 = body.find('"');
      const std::size_t q2 = body.rfind('"');
      if (q1 == std::string_view::npos || q2 == q1) throw DataError("PGN: malformed tag");
      std::string key(body.substr(0, q1));
      while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
      std::string value(body.substr(q1 + 1, q2 - q1 - 1));
      if (key == "FEN") {
        current.start = Position::from_fen(value);
        pos = current.start;
      }
      current.tags.emplace_back(std::move(key), std::move(value));
      in_game = true;
      i = end + 1;
      continue;
    }
    if (ch == '{') {
      const std::size_t end = text.find('}', i);
      if (end == std::string_view::npos) throw DataError("PGN: unterminated comment");
      i = end + 1;
      continue;
    }
    if (ch == ';') {
      const std::size_t end = text.find('\n', i);
      i = end == std::string_view::npos ? text.size() : end + 1;
      continue;
    }
    if (ch == '(') {
      int depth = 0;
      for (; i < text.size(); ++i) {
        if (text[i] == '(') ++depth;
        if (text[i] == ')' && --depth == 0) break;
      }
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])) &&
           text[end] != '{' && text[end] != '(' && text[end] != '[') {
      ++end;
    }
    std::string_view tok = text.substr(i, end - i);
    i = end;
    if (tok.empty()) {
      ++i;
      continue;
    }
    if (tok[0] == '$') continue;
    if (is_result_token(tok)) {
      finish(std::string(tok));
      continue;
    }
    // Strip move numbers such as "12." or "12...e5".
    std::size_t k = 0;
    while (k < tok.size() && std::isdigit(static_cast<unsigned char>(tok[k]))) ++k;
    if (k > 0 && k < tok.size() && tok[k] == '.') {
      while (k < tok.size() && tok[k] == '.') ++k;
      tok = tok.substr(k);
    } else if (k == tok.size()) {
      continue;
    }
    if (tok.empty()) continue;
    const Move m = parse_san(pos, tok);
    current.moves.push_back(m);
    pos = apply_generated_move(pos, m);
    in_game = true;
  }
  if (in_game) finish(current.tag("Result").empty() ? "*" : current.tag("Result"));
  return games;
}

}  // namespace handbrain::chess
