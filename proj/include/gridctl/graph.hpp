// Copyright 2026 The gridctl Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Topology algorithms on undirected multigraphs: block (biconnected
// component) decomposition, forest and cactus recognition, and exact
// branch-and-bound searches for feedback sets, vertex covers and hitting sets.

#ifndef GRIDCTL_GRAPH_HPP_
#define GRIDCTL_GRAPH_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace gridctl {

// Undirected multigraph on vertices 0..n-1. Parallel edges are allowed and
// are told apart by edge index; self-loops are rejected.
class Multigraph {
 public:
  struct Edge {
    int u = 0;
    int v = 0;
    int other(int w) const { return w == u ? v : u; }
  };

  Multigraph() = default;
  explicit Multigraph(int num_vertices);
  Multigraph(int num_vertices, std::vector<Edge> edges);

  int AddEdge(int u, int v);

  int num_vertices() const { return static_cast<int>(incident_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& incident(int v) const { return incident_[v]; }
  int degree(int v) const { return static_cast<int>(incident_[v].size()); }

  struct Subgraph;

  // Induced subgraph on the remaining vertices. Vertex numbering is
  // preserved (removed vertices become isolated); edges are renumbered and
  // Subgraph::original_edge maps them back.
  Subgraph WithoutVertices(std::span<const int> removed_vertices) const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
};

struct Multigraph::Subgraph {
  Multigraph graph;
  std::vector<int> original_edge;
};

enum class BlockKind { kTrivial, kSingleEdge, kCycle, kComplex };

struct Block {
  std::vector<int> edges;     // sorted edge indices
  std::vector<int> vertices;  // sorted vertex indices
  BlockKind kind = BlockKind::kTrivial;
};

struct BlockDecomposition {
  std::vector<Block> blocks;
  std::vector<int> cutvertices;  // sorted
  // block_of_edge[e] is the index into `blocks` of the block containing e.
  std::vector<int> block_of_edge;
};

// Hopcroft-Tarjan block decomposition. Isolated vertices yield trivial
// blocks; two parallel edges between the same pair form a cycle block.
BlockDecomposition BiconnectedComponents(const Multigraph& graph);

bool IsForest(const Multigraph& graph);
bool IsCactus(const Multigraph& graph);

// Vertices lying on at least one cycle (members of cycle or complex blocks).
std::vector<int> CyclicVertices(const Multigraph& graph);

// Edge indices of one shortest cycle, in walk order, or nullopt for forests.
// Vertices flagged in `blocked` are ignored (treated as deleted).
std::optional<std::vector<int>> ShortestCycle(const Multigraph& graph,
                                              std::span<const char> blocked = {});

enum class FeedbackTarget { kForest, kCactus };

struct SearchLimits {
  // Exact search is attempted for graphs up to this many vertices; larger
  // graphs fall back to a greedy certificate with a lower bound.
  int exact_threshold = 150;
  std::int64_t node_limit = 50'000'000;
  std::optional<int> budget;  // maximum acceptable size
};

struct VertexSetResult {
  std::vector<int> vertices;  // sorted
  bool proven_optimal = false;
  int lower_bound = 0;
  std::int64_t nodes = 0;
};

// Minimum vertex set F such that graph - F is a forest (feedback vertex set)
// or a cactus. Every returned set is re-verified with IsForest / IsCactus.
// Throws kBudgetExceeded when limits.budget is set and no set within it
// exists (or none was found before the node limit).
VertexSetResult MinFeedbackSet(const Multigraph& graph, FeedbackTarget target,
                               const SearchLimits& limits = {});

// Minimum vertex cover by branch and bound (degree-0/1 reductions, branching
// on a maximum-degree vertex: take it, or take all of its neighbours).
VertexSetResult MinVertexCover(const Multigraph& graph,
                               const SearchLimits& limits = {});

// Minimum-cardinality set of elements from 0..universe-1 intersecting every
// set in `sets`. `upper_bound`, when given, is the size of a known solution;
// the search then only looks for strictly smaller ones; `elements` is nullopt
// when none exists (or none was found before the node limit).
struct HittingSetResult {
  std::optional<std::vector<int>> elements;
  bool proven_optimal = false;
  int lower_bound = 0;
  std::int64_t nodes = 0;
};
HittingSetResult MinHittingSet(int universe, std::span<const std::vector<int>> sets,
                               std::optional<int> upper_bound = std::nullopt,
                               std::int64_t node_limit = 50'000'000);

}  // namespace gridctl

#endif  // GRIDCTL_GRAPH_HPP_
