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

#include "handbrain/fragility/fragility.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <numeric>

namespace handbrain::fragility {

using chess::Color;
using chess::PieceType;
using chess::Square;

namespace {

struct Step {
  int df;
  int dr;
};

constexpr std::array<Step, 8> kKnightSteps{{{1, 2}, {2, 1}, {2, -1}, {1, -2}, {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}}};
constexpr std::array<Step, 8> kKingSteps{{{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
constexpr std::array<Step, 4> kDiagonals{{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};
constexpr std::array<Step, 4> kLines{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

bool on_board(int f, int r) { return f >= 0 && f < 8 && r >= 0 && r < 8; }

// Occupied squares reached by the piece on `from`.
std::vector<int> reached(const chess::Position& pos, Square from, chess::Piece piece) {
  std::vector<int> out;
  const int f0 = from.file();
  const int r0 = from.rank();
  auto leap = [&](int df, int dr) {
    const int f = f0 + df;
    const int r = r0 + dr;
    if (on_board(f, r) && pos.at(Square(r * 8 + f))) out.push_back(r * 8 + f);
  };
  auto slide = [&](Step s) {
    for (int f = f0 + s.df, r = r0 + s.dr; on_board(f, r); f += s.df, r += s.dr) {
      if (pos.at(Square(r * 8 + f))) {
        out.push_back(r * 8 + f);
        break;
      }
    }
  };
  switch (piece.type) {
    case PieceType::kPawn: {
      const int dr = piece.color == Color::kWhite ? 1 : -1;
      leap(-1, dr);
      leap(1, dr);
      break;
    }
    case PieceType::kKnight:
      for (Step s : kKnightSteps) leap(s.df, s.dr);
      break;
    case PieceType::kKing:
      for (Step s : kKingSteps) leap(s.df, s.dr);
      break;
    case PieceType::kBishop:
      for (Step s : kDiagonals) slide(s);
      break;
    case PieceType::kRook:
      for (Step s : kLines) slide(s);
      break;
    case PieceType::kQueen:
      for (Step s : kDiagonals) slide(s);
      for (Step s : kLines) slide(s);
      break;
  }
  return out;
}

// Summation in sorted order makes the result independent of node numbering,
// which is what keeps colour-mirrored positions bit-identical.
double ordered_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

}  // namespace

std::size_t InteractionGraph::attack_edge_count() const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [](const Edge& e) { return e.kind == EdgeKind::kAttack; }));
}

std::size_t InteractionGraph::defense_edge_count() const { return edges.size() - attack_edge_count(); }

std::vector<bool> InteractionGraph::attacked() const {
  std::vector<bool> out(nodes.size(), false);
  for (const Edge& e : edges) {
    if (e.kind == EdgeKind::kAttack) out[e.to] = true;
  }
  return out;
}

InteractionGraph build_interaction_graph(const chess::Position& pos) {
  InteractionGraph g;
  std::array<int, 64> node_of;
  node_of.fill(-1);
  for (int sq = 0; sq < 64; ++sq) {
    if (auto p = pos.at(Square(sq))) {
      node_of[sq] = static_cast<int>(g.nodes.size());
      g.nodes.push_back({Square(sq), *p});
    }
  }
  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    const Node& n = g.nodes[u];
    for (int target : reached(pos, n.square, n.piece)) {
      const auto v = static_cast<std::size_t>(node_of[target]);
      const EdgeKind kind = g.nodes[v].piece.color == n.piece.color ? EdgeKind::kDefense : EdgeKind::kAttack;
      g.edges.push_back({u, v, kind});
    }
  }
  return g;
}

Adjacency undirected_projection(const InteractionGraph& g) {
  Adjacency adj(g.nodes.size());
  for (const Edge& e : g.edges) {
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

std::vector<double> betweenness_centrality(const Adjacency& adj) {
  const std::size_t n = adj.size();
  std::vector<double> bc(n, 0.0);
  if (n < 3) return bc;

  // contributions[v] collects delta_s(v) for every source s.
  std::vector<std::vector<double>> contributions(n);
  std::vector<std::size_t> order;
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<double> sigma(n);
  std::vector<int> dist(n);
  std::vector<double> delta(n);

  for (std::size_t s = 0; s < n; ++s) {
    order.clear();
    for (auto& p : preds) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    sigma[s] = 1.0;
    dist[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (std::size_t w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    // Brandes dependency accumulation; each delta is rebuilt from its
    // successors' terms in sorted order.
    std::vector<std::vector<double>> terms(n);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t w = *it;
      delta[w] = ordered_sum(terms[w]);
      for (std::size_t v : preds[w]) terms[v].push_back(sigma[v] / sigma[w] * (1.0 + delta[w]));
      if (w != s) contributions[w].push_back(delta[w]);
    }
  }
  // Each unordered pair is counted from both endpoints, hence the extra 2.
  const double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2);
  for (std::size_t v = 0; v < n; ++v) bc[v] = std::clamp(ordered_sum(contributions[v]) / norm, 0.0, 1.0);
  return bc;
}

FragilityReport analyze(InteractionGraph graph) {
  FragilityReport r;
  r.graph = std::move(graph);
  r.betweenness = betweenness_centrality(undirected_projection(r.graph));
  r.attacked = r.graph.attacked();
  std::vector<double> terms;
  for (std::size_t i = 0; i < r.attacked.size(); ++i) {
    if (r.attacked[i]) terms.push_back(r.betweenness[i]);
  }
  if (!r.graph.nodes.empty()) {
    r.score = std::clamp(ordered_sum(terms) / static_cast<double>(r.graph.nodes.size()), 0.0, 1.0);
  }
  return r;
}

FragilityReport analyze(const chess::Position& pos) { return analyze(build_interaction_graph(pos)); }

double fragility_score(const chess::Position& pos) { return analyze(pos).score; }

}  // namespace handbrain::fragility
