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

#ifndef HANDBRAIN_FRAGILITY_FRAGILITY_HPP_
#define HANDBRAIN_FRAGILITY_FRAGILITY_HPP_

#include <cstddef>
#include <vector>

#include "handbrain/chess/position.hpp"

namespace handbrain::fragility {

enum class EdgeKind { kAttack, kDefense };

struct Node {
  chess::Square square;
  chess::Piece piece;
};

struct Edge {
  std::size_t from;  // node index
  std::size_t to;
  EdgeKind kind;
};

// Nodes are the occupied squares in a1..h8 order. An edge u->v exists when
// the piece on u pseudo-legally reaches v (pawns by their capture diagonals,
// sliders up to the first blocker, kings included, pins ignored).
struct InteractionGraph {
  std::vector<Node> nodes;
  std::vector<Edge> edges;

  std::size_t attack_edge_count() const;
  std::size_t defense_edge_count() const;
  // Nodes that are the target of at least one attack edge.
  std::vector<bool> attacked() const;
};

InteractionGraph build_interaction_graph(const chess::Position& pos);

// Undirected simple graph as adjacency lists.
using Adjacency = std::vector<std::vector<std::size_t>>;

Adjacency undirected_projection(const InteractionGraph& g);

// Brandes betweenness on an unweighted undirected graph, normalised by
// (n-1)(n-2)/2. All zeros when n < 3.
std::vector<double> betweenness_centrality(const Adjacency& adj);

struct FragilityReport {
  InteractionGraph graph;
  std::vector<double> betweenness;
  std::vector<bool> attacked;
  double score = 0.0;
};

// Sum of betweenness over attacked nodes divided by the node count, clamped
// to [0, 1].
FragilityReport analyze(InteractionGraph graph);
FragilityReport analyze(const chess::Position& pos);
double fragility_score(const chess::Position& pos);

}  // namespace handbrain::fragility

#endif  // HANDBRAIN_FRAGILITY_FRAGILITY_HPP_
