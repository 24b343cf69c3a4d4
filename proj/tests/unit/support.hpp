#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "jtmc/graph.hpp"
#include "jtmc/junction_tree.hpp"
#include "jtmc/perturbation.hpp"
#include "jtmc/tree_gen.hpp"

namespace jtmc::testing {

// Chordless cycles are exactly the induced subgraphs on >= 4 vertices in
// which every vertex has degree two and which are connected.
inline bool naive_is_chordal(const Graph& g) {
  const std::size_t p = g.num_vertices();
  for (std::uint32_t mask = 0; mask < (1U << p); ++mask) {
    if (std::popcount(mask) < 4) continue;
    std::vector<Vertex> members;
    for (Vertex v = 0; v < p; ++v) {
      if ((mask >> v) & 1U) members.push_back(v);
    }
    bool all_two = true;
    for (Vertex v : members) {
      int deg = 0;
      for (Vertex u : members) deg += g.adjacent(v, u) ? 1 : 0;
      if (deg != 2) {
        all_two = false;
        break;
      }
    }
    if (!all_two) continue;
    // Connected?
    std::uint32_t seen = 1U << members.front();
    std::vector<Vertex> stack{members.front()};
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (Vertex u : members) {
        if (g.adjacent(x, u) && !((seen >> u) & 1U)) {
          seen |= 1U << u;
          stack.push_back(u);
        }
      }
    }
    if (seen == mask) return false;
  }
  return true;
}

// Every labelled graph on p vertices, in increasing mask order.
inline std::vector<Graph> all_graphs(std::size_t p) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex a = 0; a < p; ++a) {
    for (Vertex b = a + 1; b < p; ++b) pairs.emplace_back(a, b);
  }
  std::vector<Graph> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    Graph g(p);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if ((mask >> k) & 1U) g.add_edge(pairs[k].first, pairs[k].second);
    }
    out.push_back(g);
  }
  return out;
}

template <class URBG>
JunctionTree random_state(std::size_t p, URBG& rng) {
  return attempt_once_walk(random_tree(p, rng), rng);
}

// Partition sets straight from the definition, by scanning every node.
struct BruteSets {
  std::vector<Candidate> neighbours;
  std::vector<Candidate> boundary;
};

inline BruteSets brute_partition_sets(const JunctionTree& t, Vertex v) {
  BruteSets out;
  std::size_t housed = 0;
  for (NodeId a = 0; a < t.num_nodes(); ++a) housed += t.clique(a).contains(v) ? 1 : 0;
  for (NodeId a = 0; a < t.num_nodes(); ++a) {
    const bool in = t.clique(a).contains(v);
    std::vector<NodeId> inside;
    for (NodeId b : t.tree_neighbours(a)) {
      if (t.clique(b).contains(v)) inside.push_back(b);
    }
    if (!in && !inside.empty()) {
      EXPECT_EQ(inside.size(), 1U) << "anchor must be unique";
      out.neighbours.push_back({a, inside.front()});
    }
    if (in && housed > 1 && inside.size() == 1) out.boundary.push_back({a, inside.front()});
  }
  return out;
}

// A uniformly chosen applicable move, or nullopt for an empty set.
template <class URBG>
std::optional<MoveProposal> random_move(const JunctionTree& t, URBG& rng) {
  const auto v = static_cast<Vertex>(uniform_index(rng, t.num_vertices()));
  const MoveKind kind = coin_flip(rng) ? MoveKind::Add : MoveKind::Remove;
  const auto sets = partition_sets(t, v);
  const auto& cands = sets.of(kind);
  if (cands.empty()) return std::nullopt;
  return make_move(t, v, kind, cands[uniform_index(rng, cands.size())]);
}

inline Graph fig1_graph() {
  // Edges 12, 13, 23, 24, 34 on vertices 1..4, shifted to 0-based.
  return Graph::from_edges(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}});
}

// Expanded tree of the same graph: {0,1,2} - {1,2} - {1,2,3} - {2}.
inline JunctionTree fig1_expanded() {
  std::vector<VertexSet> cliques{VertexSet(4, {0, 1, 2}), VertexSet(4, {1, 2}),
                                 VertexSet(4, {1, 2, 3}), VertexSet(4, {2})};
  return JunctionTree(4, cliques, path_tree(4));
}

}  // namespace jtmc::testing
