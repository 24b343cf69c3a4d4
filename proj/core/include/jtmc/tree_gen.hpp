#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <vector>

#include "jtmc/errors.hpp"
#include "jtmc/graph.hpp"
#include "jtmc/junction_tree.hpp"
#include "jtmc/random.hpp"
#include "jtmc/tree.hpp"

namespace jtmc {

/// Uniform labelled tree on n nodes (random Prüfer sequence).
template <class URBG>
Tree random_tree(std::size_t n, URBG& rng) {
  if (n <= 1) return Tree(1, {});
  std::vector<NodeId> seq(n - 2);
  for (auto& s : seq) s = static_cast<NodeId>(uniform_index(rng, n));
  return tree_from_pruefer(n, seq);
}

/// Source of the random choices made by the attempt-once walk. Replaceable
/// so that a recorded sequence of choices can be replayed.
class WalkDriver {
 public:
  virtual ~WalkDriver() = default;
  /// Start node of walk `walk` on a tree with n nodes.
  virtual NodeId start(std::size_t walk, std::size_t n) = 0;
  /// Index into `frontier` (sorted, non-empty) of the node to attempt next.
  virtual std::size_t pick(std::size_t walk, const std::vector<NodeId>& frontier) = 0;
  /// Whether the attempted node joins the walk.
  virtual bool accept(std::size_t walk, NodeId node) = 0;
};

template <class URBG>
class RandomWalkDriver final : public WalkDriver {
 public:
  explicit RandomWalkDriver(URBG& rng) : rng_(rng) {}
  NodeId start(std::size_t, std::size_t n) override {
    return static_cast<NodeId>(uniform_index(rng_, n));
  }
  std::size_t pick(std::size_t, const std::vector<NodeId>& frontier) override {
    return static_cast<std::size_t>(uniform_index(rng_, frontier.size()));
  }
  bool accept(std::size_t, NodeId) override { return uniform01(rng_) >= 0.5; }

 private:
  URBG& rng_;
};

/// n attempt-once random walks on t; walk i's visited nodes house vertex i.
JunctionTree attempt_once_walk(const Tree& t, WalkDriver& driver);

template <class URBG>
  requires(!std::derived_from<URBG, WalkDriver>)
JunctionTree attempt_once_walk(const Tree& t, URBG& rng) {
  RandomWalkDriver<URBG> driver(rng);
  return attempt_once_walk(t, static_cast<WalkDriver&>(driver));
}

/// Edge lists of a maximum-weight spanning tree draw, one uniform spanning
/// tree per weight level (weights are clique intersection sizes). The valid
/// topologies for a fixed list of cliques are exactly these trees.
class SkeletonSampler {
 public:
  /// Replaces the topology of `tree` by a uniform draw among all trees on
  /// the same labelled nodes that satisfy the junction property.
  template <class URBG>
  static void resample(JunctionTree& tree, URBG& rng) {
    tree.set_topology(draw(tree.cliques(), [&](std::size_t k) {
      return static_cast<std::size_t>(uniform_index(rng, k));
    }));
  }

  /// `choose(k)` must return a uniform index in [0, k).
  template <class Choose>
  static Tree draw(const std::vector<VertexSet>& cliques, Choose&& choose);
};

template <class URBG>
void resample_skeleton(JunctionTree& tree, URBG& rng) {
  SkeletonSampler::resample(tree, rng);
}

/// Banded chordal graph: vertex i joins its l_i predecessors, with l_i
/// uniform on [1, max_lag] clamped to min(l_i, l_{i-1} + 1, i).
template <class URBG>
Graph random_ar_graph(std::size_t p, std::size_t max_lag, URBG& rng);

namespace detail {

Graph banded_graph(const std::vector<std::size_t>& lags);

struct LevelEdges {
  std::vector<std::size_t> weights;                        // descending, distinct
  std::vector<std::vector<std::pair<NodeId, NodeId>>> edges;  // per weight
};
LevelEdges intersection_levels(const std::vector<VertexSet>& cliques);

}  // namespace detail

template <class Choose>
Tree SkeletonSampler::draw(const std::vector<VertexSet>& cliques, Choose&& choose) {
  const std::size_t m = cliques.size();
  if (m <= 1) return Tree(1, {});
  const auto levels = detail::intersection_levels(cliques);

  std::vector<NodeId> comp(m);
  for (NodeId i = 0; i < m; ++i) comp[i] = i;
  auto find = [&](NodeId x) {
    while (comp[x] != x) {
      comp[x] = comp[comp[x]];
      x = comp[x];
    }
    return x;
  };

  std::vector<TreeEdge> chosen;
  chosen.reserve(m - 1);
  std::vector<std::vector<std::size_t>> incident(m);
  std::vector<std::size_t> next(m);
  std::vector<char> in_tree(m, 0);
  std::vector<char> seen(m, 0);
  std::vector<NodeId> roots;

  for (std::size_t level = 0; level < levels.weights.size() && chosen.size() + 1 < m; ++level) {
    // Edges of this weight between distinct current components.
    std::vector<std::pair<NodeId, NodeId>> live;
    for (const auto& [a, b] : levels.edges[level]) {
      if (find(a) != find(b)) live.emplace_back(a, b);
    }
    if (live.empty()) continue;
    roots.clear();
    for (std::size_t e = 0; e < live.size(); ++e) {
      for (NodeId end : {find(live[e].first), find(live[e].second)}) {
        if (incident[end].empty()) roots.push_back(end);
        incident[end].push_back(e);
      }
    }
    auto other = [&](std::size_t e, NodeId from) {
      const NodeId x = find(live[e].first);
      return x == from ? find(live[e].second) : x;
    };
    // Wilson's algorithm separately on each connected piece of the level
    // multigraph; parallel edges stay distinct.
    std::sort(roots.begin(), roots.end());
    for (NodeId r : roots) {
      in_tree[r] = 0;
      seen[r] = 0;
    }
    std::vector<TreeEdge> level_edges;
    for (NodeId r : roots) {
      if (seen[r]) continue;
      // Collect r's piece and root it at r.
      std::vector<NodeId> piece{r};
      seen[r] = 1;
      for (std::size_t k = 0; k < piece.size(); ++k) {
        for (std::size_t e : incident[piece[k]]) {
          const NodeId y = other(e, piece[k]);
          if (!seen[y]) {
            seen[y] = 1;
            piece.push_back(y);
          }
        }
      }
      std::sort(piece.begin(), piece.end());
      in_tree[piece.front()] = 1;
      for (NodeId start : piece) {
        NodeId u = start;
        while (!in_tree[u]) {
          next[u] = incident[u][choose(incident[u].size())];
          u = other(next[u], u);
        }
        u = start;
        while (!in_tree[u]) {
          in_tree[u] = 1;
          const auto& [a, b] = live[next[u]];
          level_edges.push_back({std::min(a, b), std::max(a, b)});
          u = other(next[u], u);
        }
      }
    }
    for (NodeId r : roots) incident[r].clear();
    for (const auto& e : level_edges) {
      comp[find(e.a)] = find(e.b);
      chosen.push_back(e);
    }
  }
  return Tree(m, chosen);
}

template <class URBG>
Graph random_ar_graph(std::size_t p, std::size_t max_lag, URBG& rng) {
  if (p == 0 || max_lag == 0) throw DomainError("random_ar_graph: p and max_lag must be positive");
  std::vector<std::size_t> lags(p, 0);
  for (std::size_t i = 1; i < p; ++i) {
    std::size_t l = 1 + static_cast<std::size_t>(uniform_index(rng, max_lag));
    l = std::min({l, lags[i - 1] + 1, i});
    lags[i] = l;
  }
  return detail::banded_graph(lags);
}

}  // namespace jtmc
