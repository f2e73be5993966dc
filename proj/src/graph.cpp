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

#include "gridctl/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

#include "gridctl/error.hpp"

namespace gridctl {

Multigraph::Multigraph(int num_vertices) {
  if (num_vertices < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative vertex count");
  }
  incident_.resize(num_vertices);
}

Multigraph::Multigraph(int num_vertices, std::vector<Edge> edges)
    : Multigraph(num_vertices) {
  for (const Edge& e : edges) AddEdge(e.u, e.v);
}

int Multigraph::AddEdge(int u, int v) {
  const int n = num_vertices();
  if (u < 0 || v < 0 || u >= n || v >= n) {
    throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
  }
  if (u == v) {
    throw Error(ErrorCode::kInvalidArgument, "self-loop at vertex " + std::to_string(u));
  }
  const int id = num_edges();
  edges_.push_back(Edge{u, v});
  incident_[u].push_back(id);
  incident_[v].push_back(id);
  return id;
}

Multigraph::Subgraph Multigraph::WithoutVertices(std::span<const int> removed_vertices) const {
  std::vector<char> removed(num_vertices(), 0);
  for (int v : removed_vertices) {
    if (v < 0 || v >= num_vertices()) {
      throw Error(ErrorCode::kInvalidArgument, "removed vertex out of range");
    }
    removed[v] = 1;
  }
  Subgraph out{Multigraph(num_vertices()), {}};
  for (int e = 0; e < num_edges(); ++e) {
    if (removed[edges_[e].u] || removed[edges_[e].v]) continue;
    out.graph.AddEdge(edges_[e].u, edges_[e].v);
    out.original_edge.push_back(e);
  }
  return out;
}

BlockDecomposition BiconnectedComponents(const Multigraph& graph) {
  const int n = graph.num_vertices();
  BlockDecomposition out;
  out.block_of_edge.assign(graph.num_edges(), -1);
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<char> is_cut(n, 0);
  std::vector<int> edge_stack;
  int time = 0;

  struct Frame {
    int vertex;
    int parent_edge;
    std::size_t next;
  };

  auto emit_block = [&](int stop_edge) {
    Block block;
    while (true) {
      const int e = edge_stack.back();
      edge_stack.pop_back();
      block.edges.push_back(e);
      if (e == stop_edge) break;
    }
    for (int e : block.edges) {
      block.vertices.push_back(graph.edge(e).u);
      block.vertices.push_back(graph.edge(e).v);
    }
    std::sort(block.edges.begin(), block.edges.end());
    std::sort(block.vertices.begin(), block.vertices.end());
    block.vertices.erase(std::unique(block.vertices.begin(), block.vertices.end()),
                         block.vertices.end());
    if (block.edges.size() == 1) {
      block.kind = BlockKind::kSingleEdge;
    } else if (block.edges.size() == block.vertices.size()) {
      // A biconnected block with as many edges as vertices is a cycle.
      block.kind = BlockKind::kCycle;
    } else {
      block.kind = BlockKind::kComplex;
    }
    const int id = static_cast<int>(out.blocks.size());
    for (int e : block.edges) out.block_of_edge[e] = id;
    out.blocks.push_back(std::move(block));
  };

  for (int root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    if (graph.degree(root) == 0) {
      disc[root] = time++;
      out.blocks.push_back(Block{{}, {root}, BlockKind::kTrivial});
      continue;
    }
    disc[root] = low[root] = time++;
    int root_children = 0;
    std::vector<Frame> stack{{root, -1, 0}};
    while (!stack.empty()) {
      Frame& frame = stack.back();
      const int v = frame.vertex;
      const auto& inc = graph.incident(v);
      if (frame.next < inc.size()) {
        const int e = inc[frame.next++];
        if (e == frame.parent_edge) continue;
        const int w = graph.edge(e).other(v);
        if (disc[w] < 0) {
          edge_stack.push_back(e);
          disc[w] = low[w] = time++;
          if (v == root) ++root_children;
          stack.push_back(Frame{w, e, 0});
        } else if (disc[w] < disc[v]) {
          edge_stack.push_back(e);
          low[v] = std::min(low[v], disc[w]);
        }
        continue;
      }
      const int parent_edge = frame.parent_edge;
      stack.pop_back();
      if (stack.empty()) break;
      const int parent = stack.back().vertex;
      low[parent] = std::min(low[parent], low[v]);
      if (low[v] >= disc[parent]) {
        if (parent != root) is_cut[parent] = 1;
        emit_block(parent_edge);
      }
    }
    if (root_children > 1) is_cut[root] = 1;
  }
  for (int v = 0; v < n; ++v) {
    if (is_cut[v]) out.cutvertices.push_back(v);
  }
  return out;
}

bool IsForest(const Multigraph& graph) {
  for (const Block& b : BiconnectedComponents(graph).blocks) {
    if (b.kind == BlockKind::kCycle || b.kind == BlockKind::kComplex) return false;
  }
  return true;
}

bool IsCactus(const Multigraph& graph) {
  for (const Block& b : BiconnectedComponents(graph).blocks) {
    if (b.kind == BlockKind::kComplex) return false;
  }
  return true;
}

std::vector<int> CyclicVertices(const Multigraph& graph) {
  std::vector<char> mark(graph.num_vertices(), 0);
  for (const Block& b : BiconnectedComponents(graph).blocks) {
    if (b.kind == BlockKind::kCycle || b.kind == BlockKind::kComplex) {
      for (int v : b.vertices) mark[v] = 1;
    }
  }
  std::vector<int> out;
  for (int v = 0; v < graph.num_vertices(); ++v) {
    if (mark[v]) out.push_back(v);
  }
  return out;
}

std::optional<std::vector<int>> ShortestCycle(const Multigraph& graph,
                                              std::span<const char> blocked) {
  const int n = graph.num_vertices();
  auto is_blocked = [&](int v) { return !blocked.empty() && blocked[v]; };
  auto edge_alive = [&](int e) {
    return !is_blocked(graph.edge(e).u) && !is_blocked(graph.edge(e).v);
  };

  // Two parallel edges are a cycle of length two.
  {
    std::vector<int> seen(n, -1);
    for (int v = 0; v < n; ++v) {
      if (is_blocked(v)) continue;
      for (int e : graph.incident(v)) {
        if (!edge_alive(e)) continue;
        const int w = graph.edge(e).other(v);
        if (w < v) continue;
        if (seen[w] >= 0 && seen[w] != e) {
          // seen[w] holds an earlier edge v-w.
          return std::vector<int>{seen[w], e};
        }
        seen[w] = e;
      }
      for (int e : graph.incident(v)) seen[graph.edge(e).other(v)] = -1;
    }
  }

  std::optional<std::vector<int>> best;
  std::vector<int> dist(n), parent_edge(n), parent(n);
  for (int root = 0; root < n; ++root) {
    if (is_blocked(root)) continue;
    std::fill(dist.begin(), dist.end(), -1);
    dist[root] = 0;
    parent_edge[root] = -1;
    parent[root] = -1;
    std::deque<int> queue{root};
    bool found = false;
    while (!queue.empty() && !found) {
      const int x = queue.front();
      queue.pop_front();
      if (best && 2 * dist[x] + 1 >= static_cast<int>(best->size())) break;
      for (int e : graph.incident(x)) {
        if (e == parent_edge[x] || !edge_alive(e)) continue;
        const int y = graph.edge(e).other(x);
        if (dist[y] < 0) {
          dist[y] = dist[x] + 1;
          parent_edge[y] = e;
          parent[y] = x;
          queue.push_back(y);
          continue;
        }
        // Non-tree edge closes a cycle through the lowest common ancestor.
        std::vector<int> left, right;
        int a = x, b = y;
        std::vector<int> path_a, path_b;
        while (dist[a] > dist[b]) { path_a.push_back(parent_edge[a]); a = parent[a]; }
        while (dist[b] > dist[a]) { path_b.push_back(parent_edge[b]); b = parent[b]; }
        while (a != b) {
          path_a.push_back(parent_edge[a]);
          a = parent[a];
          path_b.push_back(parent_edge[b]);
          b = parent[b];
        }
        std::vector<int> cycle(path_a.rbegin(), path_a.rend());
        // Walk: lca -> ... -> x, edge e, y -> ... -> lca.
        cycle.push_back(e);
        cycle.insert(cycle.end(), path_b.begin(), path_b.end());
        if (!best || cycle.size() < best->size()) best = std::move(cycle);
        found = true;
        break;
      }
    }
    if (best && best->size() == 3) break;
  }
  return best;
}

namespace {

std::vector<int> CycleVertices(const Multigraph& graph, const std::vector<int>& cycle) {
  std::vector<int> vs;
  for (int e : cycle) {
    vs.push_back(graph.edge(e).u);
    vs.push_back(graph.edge(e).v);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

// Marks every vertex that cannot lie on a cycle of the unblocked graph
// (iteratively strips degree <= 1 vertices).
std::vector<char> PruneAcyclicFringe(const Multigraph& graph, std::vector<char> blocked) {
  const int n = graph.num_vertices();
  std::vector<int> deg(n, 0);
  for (int e = 0; e < graph.num_edges(); ++e) {
    const auto& ed = graph.edge(e);
    if (blocked[ed.u] || blocked[ed.v]) continue;
    ++deg[ed.u];
    ++deg[ed.v];
  }
  std::vector<int> work;
  for (int v = 0; v < n; ++v) {
    if (!blocked[v] && deg[v] <= 1) work.push_back(v);
  }
  while (!work.empty()) {
    const int v = work.back();
    work.pop_back();
    if (blocked[v]) continue;
    blocked[v] = 1;
    for (int e : graph.incident(v)) {
      const int w = graph.edge(e).other(v);
      if (blocked[w]) continue;
      if (--deg[w] <= 1) work.push_back(w);
    }
  }
  return blocked;
}

// Vertex set of a theta subgraph (two vertices joined by three internally
// disjoint paths) inside a complex block, or nullopt if the unblocked graph
// is a cactus. Every cactus deletion set must intersect such a set.
std::optional<std::vector<int>> FindTheta(const Multigraph& graph,
                                          const std::vector<char>& blocked) {
  std::vector<int> removed;
  for (int v = 0; v < graph.num_vertices(); ++v) {
    if (blocked[v]) removed.push_back(v);
  }
  const Multigraph::Subgraph sub = graph.WithoutVertices(removed);
  const BlockDecomposition bd = BiconnectedComponents(sub.graph);
  const Block* complex = nullptr;
  for (const Block& b : bd.blocks) {
    if (b.kind == BlockKind::kComplex) {
      complex = &b;
      break;
    }
  }
  if (complex == nullptr) return std::nullopt;

  Multigraph block_graph(graph.num_vertices());
  for (int e : complex->edges) block_graph.AddEdge(sub.graph.edge(e).u, sub.graph.edge(e).v);
  const std::optional<std::vector<int>> cycle = ShortestCycle(block_graph);
  if (!cycle) return std::nullopt;  // unreachable for a complex block
  std::vector<char> on_cycle_edge(block_graph.num_edges(), 0);
  for (int e : *cycle) on_cycle_edge[e] = 1;
  const std::vector<int> cycle_vertices = CycleVertices(block_graph, *cycle);
  std::vector<char> on_cycle(graph.num_vertices(), 0);
  for (int v : cycle_vertices) on_cycle[v] = 1;

  // A chord (or parallel edge) closes the theta directly.
  for (int e = 0; e < block_graph.num_edges(); ++e) {
    if (on_cycle_edge[e]) continue;
    const auto& ed = block_graph.edge(e);
    if (on_cycle[ed.u] && on_cycle[ed.v]) return cycle_vertices;
  }

  // Otherwise grow BFS trees from all cycle vertices through off-cycle
  // vertices until two trees with different roots touch.
  const int n = graph.num_vertices();
  std::vector<int> source(n, -1), parent(n, -1);
  std::deque<int> queue;
  for (int v : cycle_vertices) {
    source[v] = v;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    for (int e : block_graph.incident(x)) {
      if (on_cycle_edge[e]) continue;
      const int y = block_graph.edge(e).other(x);
      if (y == parent[x]) continue;
      if (source[y] < 0) {
        source[y] = source[x];
        parent[y] = x;
        queue.push_back(y);
      } else if (source[y] != source[x]) {
        std::vector<int> out = cycle_vertices;
        for (int w = x; w >= 0 && !on_cycle[w]; w = parent[w]) out.push_back(w);
        for (int w = y; w >= 0 && !on_cycle[w]; w = parent[w]) out.push_back(w);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
      }
    }
  }
  return cycle_vertices;  // unreachable for a biconnected non-cycle block
}

class FeedbackSearch {
 public:
  FeedbackSearch(const Multigraph& graph, FeedbackTarget target, std::int64_t node_limit)
      : graph_(graph), target_(target), node_limit_(node_limit) {}

  std::optional<std::vector<int>> Obstruction(const std::vector<char>& deleted) const {
    std::vector<char> blocked = PruneAcyclicFringe(graph_, deleted);
    if (target_ == FeedbackTarget::kForest) {
      auto cycle = ShortestCycle(graph_, blocked);
      if (!cycle) return std::nullopt;
      return CycleVertices(graph_, *cycle);
    }
    return FindTheta(graph_, blocked);
  }

  // Greedy packing of vertex-disjoint obstructions.
  int PackingBound(std::vector<char> deleted) const {
    int count = 0;
    while (auto obs = Obstruction(deleted)) {
      ++count;
      for (int v : *obs) deleted[v] = 1;
    }
    return count;
  }

  std::vector<int> Greedy() const {
    std::vector<char> deleted(graph_.num_vertices(), 0);
    std::vector<int> chosen;
    while (auto obs = Obstruction(deleted)) {
      const int v = PickHighestDegree(*obs, deleted);
      deleted[v] = 1;
      chosen.push_back(v);
    }
    // Drop redundant members, highest index first.
    std::sort(chosen.begin(), chosen.end());
    for (auto it = chosen.rbegin(); it != chosen.rend(); ++it) {
      deleted[*it] = 0;
      if (Obstruction(deleted)) deleted[*it] = 1;
    }
    std::vector<int> out;
    for (int v = 0; v < graph_.num_vertices(); ++v) {
      if (deleted[v]) out.push_back(v);
    }
    return out;
  }

  void Solve(std::vector<int> incumbent, int size_cap) {
    best_ = std::move(incumbent);
    best_size_ = std::min<int>(static_cast<int>(best_.size()), size_cap + 1);
    found_ = static_cast<int>(best_.size()) <= size_cap;
    deleted_.assign(graph_.num_vertices(), 0);
    forbidden_.assign(graph_.num_vertices(), 0);
    current_.clear();
    Recurse();
  }

  const std::vector<int>& best() const { return best_; }
  bool found() const { return found_; }
  bool aborted() const { return aborted_; }
  std::int64_t nodes() const { return nodes_; }

 private:
  int LiveDegree(int v, const std::vector<char>& deleted) const {
    int d = 0;
    for (int e : graph_.incident(v)) {
      if (!deleted[graph_.edge(e).other(v)]) ++d;
    }
    return d;
  }

  int PickHighestDegree(const std::vector<int>& candidates,
                        const std::vector<char>& deleted) const {
    int best = candidates.front();
    int best_deg = -1;
    for (int v : candidates) {
      const int d = LiveDegree(v, deleted);
      if (d > best_deg) {
        best_deg = d;
        best = v;
      }
    }
    return best;
  }

  void Recurse() {
    if (aborted_) return;
    if (++nodes_ > node_limit_) {
      aborted_ = true;
      return;
    }
    const int depth = static_cast<int>(current_.size());
    if (depth >= best_size_) return;
    const std::optional<std::vector<int>> obs = Obstruction(deleted_);
    if (!obs) {
      best_ = current_;
      std::sort(best_.begin(), best_.end());
      best_size_ = depth;
      found_ = true;
      return;
    }
    if (depth + 1 >= best_size_) return;
    if (depth + PackingBound(deleted_) >= best_size_) return;

    std::vector<int> candidates;
    for (int v : *obs) {
      if (!forbidden_[v]) candidates.push_back(v);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      return LiveDegree(a, deleted_) > LiveDegree(b, deleted_);
    });
    std::vector<int> newly_forbidden;
    for (int v : candidates) {
      deleted_[v] = 1;
      current_.push_back(v);
      Recurse();
      current_.pop_back();
      deleted_[v] = 0;
      forbidden_[v] = 1;
      newly_forbidden.push_back(v);
      if (aborted_) break;
    }
    for (int v : newly_forbidden) forbidden_[v] = 0;
  }

  const Multigraph& graph_;
  FeedbackTarget target_;
  std::int64_t node_limit_;
  std::vector<char> deleted_, forbidden_;
  std::vector<int> current_, best_;
  int best_size_ = 0;
  bool found_ = false;
  bool aborted_ = false;
  std::int64_t nodes_ = 0;
};

}  // namespace

VertexSetResult MinFeedbackSet(const Multigraph& graph, FeedbackTarget target,
                               const SearchLimits& limits) {
  FeedbackSearch search(graph, target, limits.node_limit);
  std::vector<int> greedy = search.Greedy();
  VertexSetResult result;
  const std::vector<char> none(graph.num_vertices(), 0);
  result.lower_bound = search.PackingBound(none);

  result.vertices = greedy;
  if (graph.num_vertices() <= limits.exact_threshold) {
    const int cap = limits.budget.value_or(std::numeric_limits<int>::max() - 1);
    search.Solve(greedy, cap);
    result.nodes = search.nodes();
    if (search.found()) {
      result.vertices = search.best();
      result.proven_optimal = !search.aborted();
    } else if (!search.aborted()) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "no feedback set within budget " + std::to_string(cap));
    }
  }
  if (limits.budget && static_cast<int>(result.vertices.size()) > *limits.budget) {
    throw Error(ErrorCode::kBudgetExceeded,
                "no feedback set within budget " + std::to_string(*limits.budget));
  }
  if (result.proven_optimal) {
    result.lower_bound = static_cast<int>(result.vertices.size());
  }

  const Multigraph rest = graph.WithoutVertices(result.vertices).graph;
  const bool ok = target == FeedbackTarget::kForest ? IsForest(rest) : IsCactus(rest);
  if (!ok) {
    throw Error(ErrorCode::kNumericalBreakdown, "feedback set failed its certificate check");
  }
  return result;
}

namespace {

class VertexCoverSearch {
 public:
  VertexCoverSearch(const Multigraph& graph, std::int64_t node_limit)
      : n_(graph.num_vertices()), node_limit_(node_limit) {
    adj_.resize(n_);
    gone_.assign(n_, 0);
    for (const auto& e : graph.edges()) {
      adj_[e.u].push_back(e.v);
      adj_[e.v].push_back(e.u);
    }
    for (auto& a : adj_) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
  }

  void Solve(std::vector<int> incumbent, int size_cap) {
    best_ = std::move(incumbent);
    best_size_ = std::min<int>(static_cast<int>(best_.size()), size_cap + 1);
    found_ = static_cast<int>(best_.size()) <= size_cap;
    gone_.assign(n_, 0);
    cover_.clear();
    Recurse();
  }

  std::vector<int> Greedy() {
    gone_.assign(n_, 0);
    std::vector<int> cover;
    while (true) {
      int v = HighestDegree();
      if (v < 0) break;
      gone_[v] = 1;
      cover.push_back(v);
    }
    std::sort(cover.begin(), cover.end());
    return cover;
  }

  // LP relaxation value via a maximum matching of the bipartite double cover.
  int LpBound() const {
    std::vector<int> match_right(n_, -1);
    int matched = 0;
    std::vector<int> seen(n_, -1);
    for (int u = 0; u < n_; ++u) {
      if (gone_[u]) continue;
      if (Augment(u, u, seen, match_right)) ++matched;
    }
    return (matched + 1) / 2;
  }

  const std::vector<int>& best() const { return best_; }
  bool found() const { return found_; }
  bool aborted() const { return aborted_; }
  std::int64_t nodes() const { return nodes_; }

 private:
  bool Augment(int u, int stamp, std::vector<int>& seen, std::vector<int>& match_right) const {
    for (int w : adj_[u]) {
      if (gone_[w] || seen[w] == stamp) continue;
      seen[w] = stamp;
      if (match_right[w] < 0 || Augment(match_right[w], stamp, seen, match_right)) {
        match_right[w] = u;
        return true;
      }
    }
    return false;
  }

  int LiveDegree(int v) const {
    int d = 0;
    for (int w : adj_[v]) d += gone_[w] ? 0 : 1;
    return d;
  }

  int HighestDegree() const {
    int best = -1, best_deg = 0;
    for (int v = 0; v < n_; ++v) {
      if (gone_[v]) continue;
      const int d = LiveDegree(v);
      if (d > best_deg) {
        best_deg = d;
        best = v;
      }
    }
    return best;
  }

  void Take(int v, std::vector<int>& undo) {
    gone_[v] = 1;
    cover_.push_back(v);
    undo.push_back(v);
  }

  void Recurse() {
    if (aborted_) return;
    if (++nodes_ > node_limit_) {
      aborted_ = true;
      return;
    }
    std::vector<int> undo;
    std::vector<int> isolated;
    const std::size_t cover_mark = cover_.size();
    // Degree-1 rule: the neighbour of a pendant vertex joins the cover.
    bool changed = true;
    while (changed) {
      changed = false;
      for (int v = 0; v < n_; ++v) {
        if (gone_[v]) continue;
        const int d = LiveDegree(v);
        if (d == 0) {
          gone_[v] = 1;
          isolated.push_back(v);
        } else if (d == 1) {
          for (int w : adj_[v]) {
            if (!gone_[w]) {
              Take(w, undo);
              break;
            }
          }
          changed = true;
        }
      }
    }
    const int size = static_cast<int>(cover_.size());
    const int pivot = HighestDegree();
    if (pivot < 0) {
      if (size < best_size_) {
        best_ = cover_;
        std::sort(best_.begin(), best_.end());
        best_size_ = size;
        found_ = true;
      }
    } else if (size + LpBound() < best_size_) {
      // Branch 1: pivot in the cover.
      gone_[pivot] = 1;
      cover_.push_back(pivot);
      Recurse();
      cover_.pop_back();
      // Branch 2: pivot excluded, so all its neighbours are in the cover.
      std::vector<int> taken;
      for (int w : adj_[pivot]) {
        if (!gone_[w]) taken.push_back(w);
      }
      for (int w : taken) {
        gone_[w] = 1;
        cover_.push_back(w);
      }
      if (!aborted_) Recurse();
      for (int w : taken) gone_[w] = 0;
      cover_.resize(cover_.size() - taken.size());
      gone_[pivot] = 0;
    }
    for (int v : undo) gone_[v] = 0;
    for (int v : isolated) gone_[v] = 0;
    cover_.resize(cover_mark);
  }

  int n_;
  std::int64_t node_limit_;
  std::vector<std::vector<int>> adj_;
  std::vector<char> gone_;
  std::vector<int> cover_, best_;
  int best_size_ = 0;
  bool found_ = false;
  bool aborted_ = false;
  std::int64_t nodes_ = 0;
};

}  // namespace

VertexSetResult MinVertexCover(const Multigraph& graph, const SearchLimits& limits) {
  VertexCoverSearch search(graph, limits.node_limit);
  std::vector<int> greedy = search.Greedy();
  VertexSetResult result;
  result.vertices = greedy;
  if (graph.num_vertices() <= limits.exact_threshold) {
    const int cap = limits.budget.value_or(std::numeric_limits<int>::max() - 1);
    search.Solve(greedy, cap);
    result.nodes = search.nodes();
    if (search.found()) {
      result.vertices = search.best();
      result.proven_optimal = !search.aborted();
    } else if (!search.aborted()) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "no vertex cover within budget " + std::to_string(cap));
    }
  }
  if (limits.budget && static_cast<int>(result.vertices.size()) > *limits.budget) {
    throw Error(ErrorCode::kBudgetExceeded,
                "no vertex cover within budget " + std::to_string(*limits.budget));
  }
  {
    VertexCoverSearch fresh(graph, 0);
    result.lower_bound = result.proven_optimal ? static_cast<int>(result.vertices.size())
                                               : fresh.LpBound();
  }
  std::vector<char> in_cover(graph.num_vertices(), 0);
  for (int v : result.vertices) in_cover[v] = 1;
  for (const auto& e : graph.edges()) {
    if (!in_cover[e.u] && !in_cover[e.v]) {
      throw Error(ErrorCode::kNumericalBreakdown, "vertex cover failed its certificate check");
    }
  }
  return result;
}

namespace {

class HittingSetSearch {
 public:
  HittingSetSearch(int universe, std::span<const std::vector<int>> sets, std::int64_t node_limit)
      : universe_(universe), sets_(sets.begin(), sets.end()), node_limit_(node_limit) {
    for (auto& s : sets_) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      for (int x : s) {
        if (x < 0 || x >= universe) {
          throw Error(ErrorCode::kInvalidArgument, "hitting-set element out of range");
        }
      }
    }
    chosen_.assign(universe, 0);
    excluded_.assign(universe, 0);
  }

  void Solve(int size_bound) {
    best_size_ = size_bound;
    Recurse(0);
  }

  const std::optional<std::vector<int>>& best() const { return best_; }
  bool aborted() const { return aborted_; }
  std::int64_t nodes() const { return nodes_; }

  int PackingBound() const {
    std::vector<int> open = OpenSets();
    std::vector<char> used(universe_, 0);
    std::stable_sort(open.begin(), open.end(), [&](int a, int b) {
      return Available(a) < Available(b);
    });
    int count = 0;
    for (int s : open) {
      bool disjoint = true;
      for (int x : sets_[s]) {
        if (!excluded_[x] && used[x]) {
          disjoint = false;
          break;
        }
      }
      if (!disjoint) continue;
      ++count;
      for (int x : sets_[s]) used[x] = 1;
    }
    return count;
  }

 private:
  bool Hit(int s) const {
    for (int x : sets_[s]) {
      if (chosen_[x]) return true;
    }
    return false;
  }

  int Available(int s) const {
    int c = 0;
    for (int x : sets_[s]) c += excluded_[x] ? 0 : 1;
    return c;
  }

  std::vector<int> OpenSets() const {
    std::vector<int> open;
    for (int s = 0; s < static_cast<int>(sets_.size()); ++s) {
      if (!Hit(s)) open.push_back(s);
    }
    return open;
  }

  void Recurse(int depth) {
    if (aborted_) return;
    if (++nodes_ > node_limit_) {
      aborted_ = true;
      return;
    }
    const std::vector<int> open = OpenSets();
    if (open.empty()) {
      if (depth < best_size_) {
        std::vector<int> out;
        for (int x = 0; x < universe_; ++x) {
          if (chosen_[x]) out.push_back(x);
        }
        best_ = std::move(out);
        best_size_ = depth;
      }
      return;
    }
    int pick = -1, pick_avail = std::numeric_limits<int>::max();
    for (int s : open) {
      const int a = Available(s);
      if (a < pick_avail) {
        pick_avail = a;
        pick = s;
      }
    }
    if (pick_avail == 0) return;
    if (depth + PackingBound() >= best_size_) return;

    std::vector<int> freq(universe_, 0);
    for (int s : open) {
      for (int x : sets_[s]) freq[x] += excluded_[x] ? 0 : 1;
    }
    std::vector<int> candidates;
    for (int x : sets_[pick]) {
      if (!excluded_[x]) candidates.push_back(x);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](int a, int b) { return freq[a] > freq[b]; });
    std::vector<int> newly_excluded;
    for (int x : candidates) {
      chosen_[x] = 1;
      Recurse(depth + 1);
      chosen_[x] = 0;
      excluded_[x] = 1;
      newly_excluded.push_back(x);
      if (aborted_) break;
    }
    for (int x : newly_excluded) excluded_[x] = 0;
  }

  int universe_;
  std::vector<std::vector<int>> sets_;
  std::int64_t node_limit_;
  std::vector<char> chosen_, excluded_;
  std::optional<std::vector<int>> best_;
  int best_size_ = 0;
  bool aborted_ = false;
  std::int64_t nodes_ = 0;
};

}  // namespace

HittingSetResult MinHittingSet(int universe, std::span<const std::vector<int>> sets,
                               std::optional<int> upper_bound, std::int64_t node_limit) {
  HittingSetSearch search(universe, sets, node_limit);
  HittingSetResult result;
  result.lower_bound = search.PackingBound();
  search.Solve(upper_bound.value_or(universe + 1));
  result.elements = search.best();
  result.nodes = search.nodes();
  result.proven_optimal = !search.aborted();
  if (result.elements && result.proven_optimal) {
    result.lower_bound = static_cast<int>(result.elements->size());
  } else if (!result.elements && result.proven_optimal && upper_bound) {
    result.lower_bound = *upper_bound;
  }
  return result;
}

}  // namespace gridctl
