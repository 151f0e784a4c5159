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

#include "handbrain/chess/position.hpp"

#include <charconv>
#include <sstream>

namespace handbrain::chess {

namespace {

constexpr std::uint8_t encode(Color c, PieceType t) {
  return static_cast<std::uint8_t>(1 + static_cast<int>(c) * 6 + static_cast<int>(t));
}

constexpr Color code_color(std::uint8_t code) {
  return (code - 1) >= 6 ? Color::kBlack : Color::kWhite;
}

constexpr PieceType code_type(std::uint8_t code) {
  return static_cast<PieceType>((code - 1) % 6);
}

struct Offset {
  int df;
  int dr;
};

constexpr std::array<Offset, 8> kKnightOffsets = {{
    {1, 2}, {2, 1}, {2, -1}, {1, -2}, {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}}};
constexpr std::array<Offset, 8> kKingOffsets = {{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
constexpr std::array<Offset, 4> kRookDirs = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
constexpr std::array<Offset, 4> kBishopDirs = {{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

constexpr bool on_board(int file, int rank) {
  return file >= 0 && file < 8 && rank >= 0 && rank < 8;
}

// Leaper target tables, filled once.
struct LeaperTables {
  std::array<std::array<std::int8_t, 9>, 64> knight{};
  std::array<std::array<std::int8_t, 9>, 64> king{};

  LeaperTables() {
    for (int sq = 0; sq < 64; ++sq) {
      fill(knight[sq], sq, kKnightOffsets);
      fill(king[sq], sq, kKingOffsets);
    }
  }

  static void fill(std::array<std::int8_t, 9>& out, int sq,
                   const std::array<Offset, 8>& offsets) {
    int n = 0;
    for (const Offset& o : offsets) {
      const int f = (sq & 7) + o.df;
      const int r = (sq >> 3) + o.dr;
      if (on_board(f, r)) out[n++] = static_cast<std::int8_t>(r * 8 + f);
    }
    out[n] = -1;
  }
};

const LeaperTables& leapers() {
  static const LeaperTables tables;
  return tables;
}

int parse_int(std::string_view text, const std::string& field) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw FenError(field, "not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

// Internal write access for parsing and move application.
class PositionEditor {
 public:
  static std::array<std::uint8_t, 64>& board(Position& p) { return p.board_; }
  static const std::array<std::uint8_t, 64>& board(const Position& p) { return p.board_; }
  static Color& side(Position& p) { return p.side_; }
  static CastlingRights& castling(Position& p) { return p.castling_; }
  static std::optional<Square>& ep(Position& p) { return p.ep_; }
  static int& halfmove(Position& p) { return p.halfmove_; }
  static int& fullmove(Position& p) { return p.fullmove_; }
};

Position Position::start() { return from_fen(kStartFen); }

Position Position::from_fen(std::string_view fen) {
  std::vector<std::string> fields;
  {
    std::istringstream in{std::string(fen)};
    std::string tok;
    while (in >> tok) fields.push_back(tok);
  }
  if (fields.size() != 6) {
    throw FenError("field count", "expected 8 ranks / 6 fields, got " +
                                      std::to_string(fields.size()) + " fields");
  }

  Position pos;
  auto& board = pos.board_;

  // Placement, rank 8 first.
  {
    const std::string& placement = fields[0];
    int rank = 7;
    int file = 0;
    int ranks_seen = 1;
    for (char ch : placement) {
      if (ch == '/') {
        if (file != 8) throw FenError("placement", "rank " + std::to_string(rank + 1) + " does not sum to 8 files");
        --rank;
        file = 0;
        ++ranks_seen;
        if (rank < 0) throw FenError("placement", "expected 8 ranks, got more");
        continue;
      }
      if (ch >= '1' && ch <= '8') {
        file += ch - '0';
        if (file > 8) throw FenError("placement", "rank " + std::to_string(rank + 1) + " exceeds 8 files");
        continue;
      }
      std::optional<PieceType> type;
      switch (ch | 0x20) {
        case 'p': type = PieceType::kPawn; break;
        case 'n': type = PieceType::kKnight; break;
        case 'b': type = PieceType::kBishop; break;
        case 'r': type = PieceType::kRook; break;
        case 'q': type = PieceType::kQueen; break;
        case 'k': type = PieceType::kKing; break;
        default: break;
      }
      if (!type) throw FenError("placement", std::string("unknown piece '") + ch + "'");
      if (file >= 8) throw FenError("placement", "rank " + std::to_string(rank + 1) + " exceeds 8 files");
      const Color color = (ch >= 'a') ? Color::kBlack : Color::kWhite;
      board[rank * 8 + file] = encode(color, *type);
      ++file;
    }
    if (ranks_seen != 8) {
      throw FenError("placement", "expected 8 ranks, got " + std::to_string(ranks_seen));
    }
    if (file != 8) throw FenError("placement", "rank 1 does not sum to 8 files");
  }

  if (fields[1] == "w") {
    pos.side_ = Color::kWhite;
  } else if (fields[1] == "b") {
    pos.side_ = Color::kBlack;
  } else {
    throw FenError("side to move", "expected 'w' or 'b', got '" + fields[1] + "'");
  }

  if (fields[2] != "-") {
    const std::string_view order = "KQkq";
    std::size_t next = 0;
    for (char ch : fields[2]) {
      const std::size_t idx = order.find(ch, next);
      if (idx == std::string_view::npos) {
        throw FenError("castling", "malformed rights '" + fields[2] + "'");
      }
      next = idx + 1;
      switch (ch) {
        case 'K': pos.castling_.white_king = true; break;
        case 'Q': pos.castling_.white_queen = true; break;
        case 'k': pos.castling_.black_king = true; break;
        case 'q': pos.castling_.black_queen = true; break;
      }
    }
    if (fields[2].empty()) throw FenError("castling", "empty field");
  }

  if (fields[3] != "-") {
    auto sq = Square::parse(fields[3]);
    const int expected_rank = pos.side_ == Color::kWhite ? 5 : 2;
    if (!sq || sq->rank() != expected_rank) {
      throw FenError("en passant", "invalid target '" + fields[3] + "'");
    }
    pos.ep_ = sq;
  }

  pos.halfmove_ = parse_int(fields[4], "halfmove clock");
  pos.fullmove_ = parse_int(fields[5], "fullmove number");
  if (pos.halfmove_ < 0) throw FenError("halfmove clock", "must be >= 0");
  if (pos.fullmove_ < 1) throw FenError("fullmove number", "must be >= 1");

  // Structural invariants.
  for (Color c : {Color::kWhite, Color::kBlack}) {
    const int kings = pos.count(c, PieceType::kKing);
    if (kings != 1) {
      throw FenError("placement", "expected exactly one " + std::string(to_string(c)) +
                                      " king, found " + std::to_string(kings));
    }
  }
  for (int f = 0; f < 8; ++f) {
    for (int r : {0, 7}) {
      const std::uint8_t code = board[r * 8 + f];
      if (code != 0 && code_type(code) == PieceType::kPawn) {
        throw FenError("placement", "pawn on rank " + std::to_string(r + 1));
      }
    }
  }
  auto has = [&](int sq, Color c, PieceType t) { return board[sq] == encode(c, t); };
  const CastlingRights& cr = pos.castling_;
  if ((cr.white_king || cr.white_queen) && !has(4, Color::kWhite, PieceType::kKing)) {
    throw FenError("castling", "white king not on e1");
  }
  if ((cr.black_king || cr.black_queen) && !has(60, Color::kBlack, PieceType::kKing)) {
    throw FenError("castling", "black king not on e8");
  }
  if ((cr.white_king && !has(7, Color::kWhite, PieceType::kRook)) ||
      (cr.white_queen && !has(0, Color::kWhite, PieceType::kRook)) ||
      (cr.black_king && !has(63, Color::kBlack, PieceType::kRook)) ||
      (cr.black_queen && !has(56, Color::kBlack, PieceType::kRook))) {
    throw FenError("castling", "rook missing from its home square");
  }
  if (pos.ep_) {
    // The side that just moved must have a pawn that double-pushed past ep.
    const Color mover = ~pos.side_;
    const int dir = mover == Color::kWhite ? 8 : -8;
    const int target = pos.ep_->index();
    if (!has(target + dir, mover, PieceType::kPawn) || board[target] != 0 ||
        board[target - dir] != 0) {
      throw FenError("en passant", "no double-pushed pawn behind '" + fields[3] + "'");
    }
  }
  if (pos.is_attacked(pos.king_square(~pos.side_), pos.side_)) {
    throw FenError("placement", "side not to move is in check");
  }
  return pos;
}

std::string Position::fen() const {
  std::string out = repetition_key();
  out += ' ';
  out += std::to_string(halfmove_);
  out += ' ';
  out += std::to_string(fullmove_);
  return out;
}

std::string Position::repetition_key() const {
  std::string out;
  out.reserve(80);
  for (int rank = 7; rank >= 0; --rank) {
    int empty = 0;
    for (int file = 0; file < 8; ++file) {
      const std::uint8_t code = board_[rank * 8 + file];
      if (code == 0) {
        ++empty;
        continue;
      }
      if (empty) out += static_cast<char>('0' + empty);
      empty = 0;
      char letter = piece_letter(code_type(code));
      if (code_color(code) == Color::kBlack) letter = static_cast<char>(letter - 'A' + 'a');
      out += letter;
    }
    if (empty) out += static_cast<char>('0' + empty);
    if (rank) out += '/';
  }
  out += side_ == Color::kWhite ? " w " : " b ";
  std::string rights;
  if (castling_.white_king) rights += 'K';
  if (castling_.white_queen) rights += 'Q';
  if (castling_.black_king) rights += 'k';
  if (castling_.black_queen) rights += 'q';
  out += rights.empty() ? "-" : rights;
  out += ' ';
  out += ep_ ? ep_->name() : "-";
  return out;
}

std::optional<Piece> Position::at(Square sq) const {
  const std::uint8_t code = board_[sq.index()];
  if (code == 0) return std::nullopt;
  return Piece{code_color(code), code_type(code)};
}

Square Position::king_square(Color color) const {
  const std::uint8_t king = encode(color, PieceType::kKing);
  for (int sq = 0; sq < 64; ++sq) {
    if (board_[sq] == king) return Square(sq);
  }
  return Square(0);  // unreachable for valid positions
}

bool Position::is_attacked(Square target, Color by) const {
  const int sq = target.index();
  const int file = target.file();
  const int rank = target.rank();

  // Pawns attack diagonally forward, so look one rank "behind" the target.
  const int pawn_rank = by == Color::kWhite ? rank - 1 : rank + 1;
  if (pawn_rank >= 0 && pawn_rank < 8) {
    const std::uint8_t pawn = encode(by, PieceType::kPawn);
    if (file > 0 && board_[pawn_rank * 8 + file - 1] == pawn) return true;
    if (file < 7 && board_[pawn_rank * 8 + file + 1] == pawn) return true;
  }

  const std::uint8_t knight = encode(by, PieceType::kKnight);
  for (const std::int8_t* t = leapers().knight[sq].data(); *t >= 0; ++t) {
    if (board_[*t] == knight) return true;
  }
  const std::uint8_t king = encode(by, PieceType::kKing);
  for (const std::int8_t* t = leapers().king[sq].data(); *t >= 0; ++t) {
    if (board_[*t] == king) return true;
  }

  const std::uint8_t queen = encode(by, PieceType::kQueen);
  const std::uint8_t rook = encode(by, PieceType::kRook);
  const std::uint8_t bishop = encode(by, PieceType::kBishop);
  for (const Offset& d : kRookDirs) {
    for (int f = file + d.df, r = rank + d.dr; on_board(f, r); f += d.df, r += d.dr) {
      const std::uint8_t code = board_[r * 8 + f];
      if (code == 0) continue;
      if (code == rook || code == queen) return true;
      break;
    }
  }
  for (const Offset& d : kBishopDirs) {
    for (int f = file + d.df, r = rank + d.dr; on_board(f, r); f += d.df, r += d.dr) {
      const std::uint8_t code = board_[r * 8 + f];
      if (code == 0) continue;
      if (code == bishop || code == queen) return true;
      break;
    }
  }
  return false;
}

int Position::count(Color color, PieceType type) const {
  const std::uint8_t code = encode(color, type);
  int n = 0;
  for (std::uint8_t c : board_) n += (c == code);
  return n;
}

int Position::piece_count() const {
  int n = 0;
  for (std::uint8_t c : board_) n += (c != 0);
  return n;
}

Position Position::mirrored() const {
  Position out;
  for (int sq = 0; sq < 64; ++sq) {
    const std::uint8_t code = board_[sq];
    if (code == 0) continue;
    out.board_[sq ^ 56] = encode(~code_color(code), code_type(code));
  }
  out.side_ = ~side_;
  out.castling_ = {castling_.black_king, castling_.black_queen,
                   castling_.white_king, castling_.white_queen};
  if (ep_) out.ep_ = ep_->flipped();
  out.halfmove_ = halfmove_;
  out.fullmove_ = fullmove_;
  return out;
}

namespace {

void add_pawn_move(std::vector<Move>& out, Square from, Square to,
                   std::optional<PieceType> captured, bool promotes) {
  if (promotes) {
    for (PieceType promo : {PieceType::kQueen, PieceType::kRook, PieceType::kBishop,
                            PieceType::kKnight}) {
      out.push_back(Move{from, to, promo, PieceType::kPawn, captured});
    }
  } else {
    out.push_back(Move{from, to, std::nullopt, PieceType::kPawn, captured});
  }
}

void generate(const Position& pos, std::optional<PieceType> only, std::vector<Move>& out) {
  const auto& board = PositionEditor::board(pos);
  const Color us = pos.side_to_move();
  const Color them = ~us;

  auto enemy_at = [&](int sq) -> std::optional<PieceType> {
    const std::uint8_t code = board[sq];
    if (code != 0 && code_color(code) == them) return code_type(code);
    return std::nullopt;
  };

  for (int sq = 0; sq < 64; ++sq) {
    const std::uint8_t code = board[sq];
    if (code == 0 || code_color(code) != us) continue;
    const PieceType type = code_type(code);
    if (only && *only != type) continue;
    const Square from(sq);
    const int file = sq & 7;
    const int rank = sq >> 3;

    switch (type) {
      case PieceType::kPawn: {
        const int dir = us == Color::kWhite ? 1 : -1;
        const int start_rank = us == Color::kWhite ? 1 : 6;
        const int last_rank = us == Color::kWhite ? 7 : 0;
        const int r1 = rank + dir;
        if (board[r1 * 8 + file] == 0) {
          add_pawn_move(out, from, Square::at(file, r1), std::nullopt, r1 == last_rank);
          const int r2 = rank + 2 * dir;
          if (rank == start_rank && board[r2 * 8 + file] == 0) {
            out.push_back(Move{from, Square::at(file, r2), std::nullopt, PieceType::kPawn});
          }
        }
        for (int df : {-1, 1}) {
          const int f = file + df;
          if (f < 0 || f > 7) continue;
          const int target = r1 * 8 + f;
          if (auto cap = enemy_at(target)) {
            add_pawn_move(out, from, Square(target), cap, r1 == last_rank);
          } else if (pos.en_passant() && pos.en_passant()->index() == target) {
            Move m{from, Square(target), std::nullopt, PieceType::kPawn, PieceType::kPawn};
            m.en_passant = true;
            out.push_back(m);
          }
        }
        break;
      }
      case PieceType::kKnight:
      case PieceType::kKing: {
        const auto& table = type == PieceType::kKnight ? leapers().knight[sq] : leapers().king[sq];
        for (const std::int8_t* t = table.data(); *t >= 0; ++t) {
          const std::uint8_t target = board[*t];
          if (target != 0 && code_color(target) == us) continue;
          out.push_back(Move{from, Square(*t), std::nullopt, type, enemy_at(*t)});
        }
        if (type == PieceType::kKing) {
          const CastlingRights& cr = pos.castling();
          const bool white = us == Color::kWhite;
          const int home = white ? 4 : 60;
          if (sq == home && !pos.is_attacked(from, them)) {
            const bool king_side = white ? cr.white_king : cr.black_king;
            const bool queen_side = white ? cr.white_queen : cr.black_queen;
            if (king_side && board[home + 1] == 0 && board[home + 2] == 0 &&
                !pos.is_attacked(Square(home + 1), them)) {
              Move m{from, Square(home + 2), std::nullopt, PieceType::kKing};
              m.castling = true;
              out.push_back(m);
            }
            if (queen_side && board[home - 1] == 0 && board[home - 2] == 0 &&
                board[home - 3] == 0 && !pos.is_attacked(Square(home - 1), them)) {
              Move m{from, Square(home - 2), std::nullopt, PieceType::kKing};
              m.castling = true;
              out.push_back(m);
            }
          }
        }
        break;
      }
      case PieceType::kBishop:
      case PieceType::kRook:
      case PieceType::kQueen: {
        auto slide = [&](const auto& dirs) {
          for (const Offset& d : dirs) {
            for (int f = file + d.df, r = rank + d.dr; on_board(f, r); f += d.df, r += d.dr) {
              const int target = r * 8 + f;
              const std::uint8_t t = board[target];
              if (t == 0) {
                out.push_back(Move{from, Square(target), std::nullopt, type});
                continue;
              }
              if (code_color(t) == them) {
                out.push_back(Move{from, Square(target), std::nullopt, type, code_type(t)});
              }
              break;
            }
          }
        };
        if (type != PieceType::kBishop) slide(kRookDirs);
        if (type != PieceType::kRook) slide(kBishopDirs);
        break;
      }
    }
  }
}

}  // namespace

std::vector<Move> pseudo_legal_moves(const Position& pos) {
  std::vector<Move> out;
  out.reserve(64);
  generate(pos, std::nullopt, out);
  return out;
}

std::vector<Move> legal_moves_of_type(const Position& pos,
                                      std::optional<PieceType> constraint) {
  std::vector<Move> pseudo;
  pseudo.reserve(64);
  generate(pos, constraint, pseudo);
  std::vector<Move> out;
  out.reserve(pseudo.size());
  const Color us = pos.side_to_move();
  for (const Move& m : pseudo) {
    const Position next = apply_generated_move(pos, m);
    if (!next.is_attacked(next.king_square(us), ~us)) out.push_back(m);
  }
  return out;
}

std::optional<Move> find_legal_move(const Position& pos, const Move& move) {
  Move wanted = move;
  const auto piece = pos.at(move.from);
  if (!wanted.promotion && piece && piece->type == PieceType::kPawn &&
      (move.to.rank() == 0 || move.to.rank() == 7)) {
    wanted.promotion = PieceType::kQueen;
  }
  for (const Move& m : legal_moves_of_type(pos, piece ? std::optional(piece->type) : std::nullopt)) {
    if (m == wanted) return m;
  }
  return std::nullopt;
}

Position apply_move(const Position& pos, const Move& move) {
  auto legal = find_legal_move(pos, move);
  if (!legal) throw IllegalMoveError(move, pos.fen());
  return apply_generated_move(pos, *legal);
}

Position apply_generated_move(const Position& pos, const Move& move) {
  Position next = pos;
  auto& board = PositionEditor::board(next);
  const Color us = pos.side_to_move();
  const int from = move.from.index();
  const int to = move.to.index();

  const std::uint8_t moving = board[from];
  board[from] = 0;
  if (move.en_passant) {
    board[move.to.file() + move.from.rank() * 8] = 0;
  }
  board[to] = move.promotion ? encode(us, *move.promotion) : moving;

  if (move.castling) {
    const bool king_side = to > from;
    const int rook_from = king_side ? from + 3 : from - 4;
    const int rook_to = king_side ? from + 1 : from - 1;
    board[rook_to] = board[rook_from];
    board[rook_from] = 0;
  }

  CastlingRights& cr = PositionEditor::castling(next);
  auto touch = [&cr](int sq) {
    switch (sq) {
      case 4: cr.white_king = cr.white_queen = false; break;
      case 60: cr.black_king = cr.black_queen = false; break;
      case 0: cr.white_queen = false; break;
      case 7: cr.white_king = false; break;
      case 56: cr.black_queen = false; break;
      case 63: cr.black_king = false; break;
      default: break;
    }
  };
  touch(from);
  touch(to);

  auto& ep = PositionEditor::ep(next);
  ep.reset();
  if (move.piece == PieceType::kPawn && (to - from == 16 || from - to == 16)) {
    ep = Square((from + to) / 2);
  }

  int& halfmove = PositionEditor::halfmove(next);
  if (move.piece == PieceType::kPawn || move.captured) {
    halfmove = 0;
  } else {
    ++halfmove;
  }
  if (us == Color::kBlack) ++PositionEditor::fullmove(next);
  PositionEditor::side(next) = ~us;
  return next;
}

std::uint64_t perft(const Position& pos, int depth) {
  if (depth <= 0) return 1;
  const auto moves = legal_moves(pos);
  if (depth == 1) return moves.size();
  std::uint64_t nodes = 0;
  for (const Move& m : moves) nodes += perft(apply_generated_move(pos, m), depth - 1);
  return nodes;
}

GameStatus game_status(const Position& pos) {
  if (!legal_moves(pos).empty()) return GameStatus::kOngoing;
  return pos.in_check() ? GameStatus::kCheckmate : GameStatus::kStalemate;
}

int material_value(PieceType type) {
  switch (type) {
    case PieceType::kPawn: return 100;
    case PieceType::kKnight: return 320;
    case PieceType::kBishop: return 330;
    case PieceType::kRook: return 500;
    case PieceType::kQueen: return 900;
    case PieceType::kKing: return 0;
  }
  return 0;
}

int mobility(const Position& pos, Color color) {
  const auto& board = PositionEditor::board(pos);
  int n = 0;
  for (int sq = 0; sq < 64; ++sq) {
    const std::uint8_t code = board[sq];
    if (code == 0 || code_color(code) != color) continue;
    const PieceType type = code_type(code);
    const int file = sq & 7;
    const int rank = sq >> 3;
    switch (type) {
      case PieceType::kPawn: {
        const int r1 = rank + (color == Color::kWhite ? 1 : -1);
        if (r1 < 0 || r1 > 7) break;
        if (board[r1 * 8 + file] == 0) ++n;
        for (int df : {-1, 1}) {
          const int f = file + df;
          if (f < 0 || f > 7) continue;
          const std::uint8_t t = board[r1 * 8 + f];
          if (t != 0 && code_color(t) != color) ++n;
        }
        break;
      }
      case PieceType::kKnight:
      case PieceType::kKing: {
        const auto& table = type == PieceType::kKnight ? leapers().knight[sq] : leapers().king[sq];
        for (const std::int8_t* t = table.data(); *t >= 0; ++t) {
          if (board[*t] == 0 || code_color(board[*t]) != color) ++n;
        }
        break;
      }
      default: {
        auto slide = [&](const auto& dirs) {
          for (const Offset& d : dirs) {
            for (int f = file + d.df, r = rank + d.dr; on_board(f, r); f += d.df, r += d.dr) {
              const std::uint8_t t = board[r * 8 + f];
              if (t == 0) {
                ++n;
                continue;
              }
              if (code_color(t) != color) ++n;
              break;
            }
          }
        };
        if (type != PieceType::kBishop) slide(kRookDirs);
        if (type != PieceType::kRook) slide(kBishopDirs);
        break;
      }
    }
  }
  return n;
}

bool is_bare_king_imbalance(const Position& pos) {
  int material[2] = {0, 0};
  int pieces[2] = {0, 0};
  for (int sq = 0; sq < 64; ++sq) {
    auto p = pos.at(Square(sq));
    if (!p || p->type == PieceType::kKing) continue;
    const int side = static_cast<int>(p->color);
    material[side] += material_value(p->type);
    ++pieces[side];
  }
  const int queen = material_value(PieceType::kQueen);
  return (pieces[0] == 0 && material[1] >= queen) ||
         (pieces[1] == 0 && material[0] >= queen);
}

}  // namespace handbrain::chess
