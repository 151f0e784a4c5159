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

#include "handbrain/engine/builtin.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "handbrain/util/hash.hpp"

namespace handbrain::engine {

using chess::Color;

namespace {

constexpr int kMobilityWeight = 4;
// Added when one side is down to a bare king facing at least a rook.
constexpr int kBareKingBonus = 500;
constexpr int kMaxQuiescencePlies = 6;
constexpr int kInfinity = 1'000'000;
// Builtin "movetime" is converted into a node budget so results stay
// reproducible.
constexpr std::uint64_t kNodesPerMs = 2000;

int side_eval(const Position& pos) {
  const int white = static_eval(pos);
  return pos.side_to_move() == Color::kWhite ? white : -white;
}

int order_key(const Move& m) {
  int key = 0;
  if (m.captured) key += 10 * chess::material_value(*m.captured) - chess::material_value(m.piece) / 10 + 1000;
  if (m.promotion) key += chess::material_value(*m.promotion);
  return key;
}

void order_moves(std::vector<Move>& moves) {
  std::stable_sort(moves.begin(), moves.end(),
                   [](const Move& a, const Move& b) { return order_key(a) > order_key(b); });
}

class Searcher {
 public:
  explicit Searcher(std::uint64_t budget) : budget_(budget) {}

  bool aborted() const { return aborted_; }
  std::uint64_t nodes() const { return nodes_; }

  int quiesce(const Position& pos, int alpha, int beta, int qply) {
    if (tick()) return 0;
    const int stand = side_eval(pos);
    if (stand >= beta || qply >= kMaxQuiescencePlies) return stand;
    alpha = std::max(alpha, stand);
    std::vector<Move> moves;
    for (const Move& m : chess::legal_moves(pos)) {
      if (m.captured || m.promotion) moves.push_back(m);
    }
    order_moves(moves);
    for (const Move& m : moves) {
      const int score = -quiesce(chess::apply_generated_move(pos, m), -beta, -alpha, qply + 1);
      if (aborted_) return 0;
      if (score >= beta) return score;
      alpha = std::max(alpha, score);
    }
    return alpha;
  }

  int negamax(const Position& pos, int depth, int alpha, int beta, int ply) {
    if (depth <= 0) return quiesce(pos, alpha, beta, 0);
    if (tick()) return 0;
    std::vector<Move> moves = chess::legal_moves(pos);
    if (moves.empty()) return pos.in_check() ? -(kMateScore - ply) : 0;
    order_moves(moves);
    int best = -kInfinity;
    for (const Move& m : moves) {
      const int score = -negamax(chess::apply_generated_move(pos, m), depth - 1, -beta, -alpha, ply + 1);
      if (aborted_) return 0;
      best = std::max(best, score);
      alpha = std::max(alpha, score);
      if (alpha >= beta) break;
    }
    return best;
  }

  SearchResult root(const Position& pos, std::vector<Move> moves, int depth) {
    order_moves(moves);
    SearchResult result;
    result.depth = depth;
    int alpha = -kInfinity;
    for (const Move& m : moves) {
      const int score = -negamax(chess::apply_generated_move(pos, m), depth - 1, -kInfinity, -alpha, 1);
      if (aborted_) return result;
      if (!result.best || score > alpha) {
        alpha = score;
        result.best = m;
      }
    }
    result.score = alpha;
    return result;
  }

 private:
  bool tick() {
    if (++nodes_ > budget_) aborted_ = true;
    return aborted_;
  }

  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

int static_eval(const Position& pos) {
  int score = 0;
  int material[2] = {0, 0};
  for (int sq = 0; sq < 64; ++sq) {
    const auto piece = pos.at(chess::Square(sq));
    if (!piece || piece->type == PieceType::kKing) continue;
    const int v = chess::material_value(piece->type);
    material[static_cast<int>(piece->color)] += v;
    score += piece->color == Color::kWhite ? v : -v;
  }
  const int rook = chess::material_value(PieceType::kRook);
  if (material[1] == 0 && material[0] >= rook) score += kBareKingBonus;
  if (material[0] == 0 && material[1] >= rook) score -= kBareKingBonus;
  score += kMobilityWeight * (chess::mobility(pos, Color::kWhite) - chess::mobility(pos, Color::kBlack));
  return score;
}

SearchResult search(const Position& pos, std::optional<PieceType> root_constraint, int depth,
                    std::uint64_t node_budget) {
  const auto moves = chess::legal_moves_of_type(pos, root_constraint);
  if (moves.empty()) {
    if (root_constraint && !chess::legal_moves(pos).empty()) {
      throw NoMoveOfTypeError(*root_constraint);
    }
    SearchResult terminal;
    terminal.score = pos.in_check() ? -kMateScore : 0;
    return terminal;
  }
  SearchResult best;
  std::uint64_t spent = 0;
  for (int d = 1; d <= std::max(1, depth); ++d) {
    Searcher searcher(node_budget - std::min(node_budget, spent));
    SearchResult r = searcher.root(pos, moves, d);
    spent += searcher.nodes();
    if (searcher.aborted()) break;
    r.nodes = spent;
    best = r;
  }
  if (!best.best) {
    // Budget too small for even one ply: fall back to move ordering.
    auto ordered = moves;
    order_moves(ordered);
    best.best = ordered.front();
    best.score = side_eval(pos);
    best.nodes = spent;
  }
  return best;
}

Move fallback_move(const Position& pos, std::optional<PieceType> constraint, std::uint64_t seed) {
  const auto moves = chess::legal_moves_of_type(pos, constraint);
  if (moves.empty()) {
    if (constraint) throw NoMoveOfTypeError(*constraint);
    throw DataError("no legal moves in " + pos.fen());
  }
  const int sign = pos.side_to_move() == Color::kWhite ? 1 : -1;

  struct Scored {
    int score;
    std::size_t index;
  };
  std::vector<Scored> scored;
  scored.reserve(moves.size());
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const Position after = chess::apply_generated_move(pos, moves[i]);
    const auto replies = chess::legal_moves(after);
    int score;
    if (replies.empty()) {
      score = after.in_check() ? kMateScore - 1 : 0;
    } else {
      score = kInfinity;
      for (const Move& r : replies) {
        score = std::min(score, sign * static_eval(chess::apply_generated_move(after, r)));
      }
    }
    scored.push_back({score, i});
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const Scored& a, const Scored& b) { return a.score > b.score; });
  const std::size_t top = std::min<std::size_t>(3, scored.size());

  constexpr double kTemperature = 1.0;
  std::vector<double> weights(top);
  for (std::size_t i = 0; i < top; ++i) {
    weights[i] = std::exp((scored[i].score - scored[0].score) / 100.0 / kTemperature);
  }

  std::string key = pos.fen();
  key += constraint ? chess::to_string(*constraint) : "any";
  std::mt19937_64 rng(seed ^ util::fnv1a64(key));
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  return moves[scored[pick(rng)].index];
}

BuiltinEngine::BuiltinEngine(EngineConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

int BuiltinEngine::depth_limit() const { return cfg_.depth ? *cfg_.depth : 64; }

std::uint64_t BuiltinEngine::node_budget() const {
  return cfg_.movetime_ms ? static_cast<std::uint64_t>(*cfg_.movetime_ms) * kNodesPerMs : UINT64_MAX;
}

Evaluation BuiltinEngine::evaluate(const Position& pos) {
  std::lock_guard lock(mutex_);
  const SearchResult r = search(pos, std::nullopt, depth_limit(), node_budget());
  const int white = pos.side_to_move() == Color::kWhite ? r.score : -r.score;
  if (std::abs(white) >= kMateThreshold) {
    const int plies = kMateScore - std::abs(white);
    return Evaluation::mate(white > 0 ? plies : -plies, r.depth);
  }
  return Evaluation::centipawns(white, r.depth);
}

Move BuiltinEngine::best_move(const Position& pos, std::optional<PieceType> constraint) {
  std::lock_guard lock(mutex_);
  if (cfg_.humanlike) return fallback_move(pos, constraint, cfg_.seed);
  const SearchResult r = search(pos, constraint, depth_limit(), node_budget());
  if (!r.best) throw DataError("no legal moves in " + pos.fen());
  return *r.best;
}

}  // namespace handbrain::engine
