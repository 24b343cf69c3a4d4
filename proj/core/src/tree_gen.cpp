#include "jtmc/tree_gen.hpp"

#include <algorithm>
#include <map>

namespace jtmc {

JunctionTree attempt_once_walk(const Tree& t, WalkDriver& driver) {
  const std::size_t n = t.size();
  std::vector<VertexSet> cliques(n, VertexSet(n));
  std::vector<char> visited(n);
  std::vector<char> attempted(n);
  std::vector<NodeId> frontier;
  for (std::size_t walk = 0; walk < n; ++walk) {
    std::fill(visited.begin(), visited.end(), 0);
    std::fill(attempted.begin(), attempted.end(), 0);
    const NodeId start = driver.start(walk, n);
    visited[start] = 1;
    for (;;) {
      frontier.clear();
      for (NodeId node = 0; node < n; ++node) {
        if (!visited[node]) continue;
        for (NodeId nb : t.neighbours(node)) {
          if (!visited[nb] && !attempted[nb]) frontier.push_back(nb);
        }
      }
      if (frontier.empty()) break;
      std::sort(frontier.begin(), frontier.end());
      frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
      const NodeId k = frontier[driver.pick(walk, frontier)];
      if (driver.accept(walk, k)) {
        visited[k] = 1;
      } else {
        attempted[k] = 1;
      }
    }
    for (NodeId node = 0; node < n; ++node) {
      if (visited[node]) cliques[node].insert(static_cast<Vertex>(walk));
    }
  }
  return JunctionTree(n, std::move(cliques), t);
}

namespace detail {

Graph banded_graph(const std::vector<std::size_t>& lags) {
  const std::size_t p = lags.size();
  Graph g(p);
  for (std::size_t i = 1; i < p; ++i) {
    for (std::size_t d = 1; d <= lags[i]; ++d) {
      g.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(i - d));
    }
  }
  return g;
}

LevelEdges intersection_levels(const std::vector<VertexSet>& cliques) {
  std::map<std::size_t, std::vector<std::pair<NodeId, NodeId>>, std::greater<>> by_weight;
  for (NodeId a = 0; a < cliques.size(); ++a) {
    for (NodeId b = a + 1; b < cliques.size(); ++b) {
      by_weight[cliques[a].intersection_count(cliques[b])].emplace_back(a, b);
    }
  }
  LevelEdges out;
  for (auto& [w, edges] : by_weight) {
    out.weights.push_back(w);
    out.edges.push_back(std::move(edges));
  }
  return out;
}

}  // namespace detail

}  // namespace jtmc
