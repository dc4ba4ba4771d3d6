// Copyright 2026 The Fare Alliance Authors
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

#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "alliance/common.hpp"

namespace alliance {

enum class EdgeKind { Mod, Transit, Walk, Wait, Transfer };

inline const char* to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Mod: return "mod";
    case EdgeKind::Transit: return "transit";
    case EdgeKind::Walk: return "walk";
    case EdgeKind::Wait: return "wait";
    case EdgeKind::Transfer: return "transfer";
  }
  return "?";
}

struct GraphEdge {
  int from = 0;
  int to = 0;
  double cost = 0.0;
  double distance = 0.0;
  EdgeKind kind = EdgeKind::Walk;
};

class RoutingGraph {
 public:
  int add_node(std::string label = {}) {
    labels_.push_back(std::move(label));
    out_.emplace_back();
    return static_cast<int>(labels_.size()) - 1;
  }

  int add_edge(int from, int to, double cost, EdgeKind kind = EdgeKind::Walk,
               double distance = 0.0) {
    if (!(cost >= 0.0)) throw std::invalid_argument("edge costs must be nonnegative");
    edges_.push_back({from, to, cost, distance, kind});
    out_.at(from).push_back(static_cast<int>(edges_.size()) - 1);
    return static_cast<int>(edges_.size()) - 1;
  }

  int node_count() const { return static_cast<int>(labels_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const GraphEdge& edge(int e) const { return edges_[e]; }
  const std::vector<int>& out_edges(int v) const { return out_[v]; }
  const std::string& label(int v) const { return labels_[v]; }

 private:
  std::vector<std::string> labels_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<int>> out_;
};

struct Path {
  std::vector<int> nodes;
  std::vector<int> edges;
  double cost = 0.0;
};

// Orders paths by cost, then node sequence, then edge sequence.
inline bool path_less(const Path& a, const Path& b) {
  return std::tie(a.cost, a.nodes, a.edges) < std::tie(b.cost, b.nodes, b.edges);
}

inline double path_cost(const RoutingGraph& g, const std::vector<int>& edges) {
  double c = 0.0;
  for (int e : edges) c += g.edge(e).cost;
  return c;
}

using EdgeFilter = std::function<bool(const GraphEdge&)>;

// Dijkstra from s to t. Among equal-cost paths the one with the
// lexicographically smallest (node sequence, edge sequence) wins; this holds
// for strictly positive edge costs.
inline std::optional<Path> shortest_path(const RoutingGraph& g, int s, int t,
                                         const EdgeFilter& filter = {},
                                         const std::vector<char>* banned_nodes = nullptr,
                                         const std::vector<char>* banned_edges = nullptr) {
  const int n = g.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<int> pred(n, -1);
  std::vector<char> done(n, 0);
  auto trace = [&](int v, std::vector<int>& nodes, std::vector<int>& edges) {
    nodes.clear();
    edges.clear();
    while (pred[v] >= 0) {
      nodes.push_back(v);
      edges.push_back(pred[v]);
      v = g.edge(pred[v]).from;
    }
    nodes.push_back(v);
    std::reverse(nodes.begin(), nodes.end());
    std::reverse(edges.begin(), edges.end());
  };
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[s] = 0.0;
  pq.push({0.0, s});
  std::vector<int> na, ea, nb, eb;
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (done[u] || d > dist[u]) continue;
    done[u] = 1;
    if (u == t) break;
    for (int e : g.out_edges(u)) {
      const GraphEdge& ed = g.edge(e);
      if (banned_edges && (*banned_edges)[e]) continue;
      if (banned_nodes && (*banned_nodes)[ed.to]) continue;
      if (filter && !filter(ed)) continue;
      if (done[ed.to]) continue;
      const double nd = d + ed.cost;
      if (nd < dist[ed.to]) {
        dist[ed.to] = nd;
        pred[ed.to] = e;
        pq.push({nd, ed.to});
      } else if (nd == dist[ed.to]) {
        trace(u, na, ea);
        na.push_back(ed.to);
        ea.push_back(e);
        trace(ed.to, nb, eb);
        if (std::tie(na, ea) < std::tie(nb, eb)) pred[ed.to] = e;
      }
    }
  }
  if (!(dist[t] < inf)) return std::nullopt;
  Path p;
  trace(t, p.nodes, p.edges);
  p.cost = path_cost(g, p.edges);
  return p;
}

// Yen's algorithm: up to k loopless paths from s to t in (cost, lexicographic)
// order.
inline std::vector<Path> yen_k_shortest(const RoutingGraph& g, int s, int t, int k,
                                        const EdgeFilter& filter = {}) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (s < 0 || t < 0 || s >= g.node_count() || t >= g.node_count()) {
    throw std::out_of_range("node out of range");
  }
  std::vector<Path> A;
  auto first = shortest_path(g, s, t, filter);
  if (!first) throw NoPath("no path from " + std::to_string(s) + " to " + std::to_string(t));
  A.push_back(*first);
  auto cmp = [](const Path& a, const Path& b) { return path_less(a, b); };
  std::set<Path, decltype(cmp)> B(cmp);
  std::vector<char> banned_nodes(g.node_count(), 0), banned_edges(g.edge_count(), 0);
  while (static_cast<int>(A.size()) < k) {
    const Path& prev = A.back();
    for (std::size_t i = 0; i + 1 < prev.nodes.size(); ++i) {
      const int spur = prev.nodes[i];
      std::fill(banned_nodes.begin(), banned_nodes.end(), 0);
      std::fill(banned_edges.begin(), banned_edges.end(), 0);
      for (const Path& p : A) {
        if (p.edges.size() <= i) continue;
        bool same = true;
        for (std::size_t j = 0; j < i && same; ++j) same = p.edges[j] == prev.edges[j];
        if (same && p.nodes[0] == prev.nodes[0]) banned_edges[p.edges[i]] = 1;
      }
      for (std::size_t j = 0; j < i; ++j) banned_nodes[prev.nodes[j]] = 1;
      auto tail = shortest_path(g, spur, t, filter, &banned_nodes, &banned_edges);
      if (!tail) continue;
      Path cand;
      cand.nodes.assign(prev.nodes.begin(), prev.nodes.begin() + i);
      cand.nodes.insert(cand.nodes.end(), tail->nodes.begin(), tail->nodes.end());
      cand.edges.assign(prev.edges.begin(), prev.edges.begin() + i);
      cand.edges.insert(cand.edges.end(), tail->edges.begin(), tail->edges.end());
      cand.cost = path_cost(g, cand.edges);
      B.insert(std::move(cand));
    }
    if (B.empty()) break;
    A.push_back(*B.begin());
    B.erase(B.begin());
  }
  return A;
}

}  // namespace alliance
