#include "jtmc/tree.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

#include "jtmc/errors.hpp"

namespace jtmc {

namespace {

NodeId find_root(std::vector<NodeId>& parent, NodeId x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

bool is_spanning_tree(std::size_t n, const std::vector<TreeEdge>& edges) {
  if (n == 0) return edges.empty();
  if (edges.size() != n - 1) return false;
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  for (const auto& e : edges) {
    if (e.a >= n || e.b >= n || e.a == e.b) return false;
    const NodeId ra = find_root(parent, e.a);
    const NodeId rb = find_root(parent, e.b);
    if (ra == rb) return false;
    parent[ra] = rb;
  }
  return true;
}

Tree::Tree(std::size_t n, const std::vector<TreeEdge>& edges) : adjacency_(n) {
  if (n == 0 || !is_spanning_tree(n, edges)) {
    throw NotATree("edge list does not form a spanning tree on " + std::to_string(n) + " nodes");
  }
  for (const auto& e : edges) {
    adjacency_[e.a].push_back(e.b);
    adjacency_[e.b].push_back(e.a);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

std::vector<TreeEdge> Tree::edges() const {
  std::vector<TreeEdge> out;
  for (NodeId a = 0; a < adjacency_.size(); ++a) {
    for (NodeId b : adjacency_[a]) {
      if (a < b) out.push_back({a, b});
    }
  }
  return out;
}

Tree tree_from_pruefer(std::size_t n, std::span<const NodeId> sequence) {
  if (n == 1) return Tree(1, {});
  if (n < 2 || sequence.size() != n - 2) {
    throw NotATree("Prüfer sequence length must be n-2");
  }
  std::vector<std::size_t> degree(n, 1);
  for (NodeId s : sequence) {
    if (s >= n) throw NotATree("Prüfer entry out of range");
    ++degree[s];
  }
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> leaves;
  for (NodeId i = 0; i < n; ++i) {
    if (degree[i] == 1) leaves.push(i);
  }
  std::vector<TreeEdge> edges;
  edges.reserve(n - 1);
  for (NodeId s : sequence) {
    const NodeId leaf = leaves.top();
    leaves.pop();
    edges.push_back({std::min(leaf, s), std::max(leaf, s)});
    if (--degree[s] == 1) leaves.push(s);
  }
  const NodeId x = leaves.top();
  leaves.pop();
  const NodeId y = leaves.top();
  edges.push_back({std::min(x, y), std::max(x, y)});
  return Tree(n, edges);
}

std::vector<NodeId> pruefer_code(const Tree& tree) {
  const std::size_t n = tree.size();
  if (n < 2) return {};
  std::vector<std::size_t> degree(n);
  std::vector<bool> removed(n, false);
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> leaves;
  for (NodeId i = 0; i < n; ++i) {
    degree[i] = tree.degree(i);
    if (degree[i] == 1) leaves.push(i);
  }
  std::vector<NodeId> code;
  code.reserve(n - 2);
  while (code.size() + 2 < n) {
    const NodeId leaf = leaves.top();
    leaves.pop();
    removed[leaf] = true;
    for (NodeId nb : tree.neighbours(leaf)) {
      if (removed[nb]) continue;
      code.push_back(nb);
      if (--degree[nb] == 1) leaves.push(nb);
    }
  }
  return code;
}

Tree path_tree(std::size_t n) {
  std::vector<TreeEdge> edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Tree(n, edges);
}

Tree star_tree(std::size_t n) {
  std::vector<TreeEdge> edges;
  for (NodeId i = 1; i < n; ++i) edges.push_back({0, i});
  return Tree(n, edges);
}

}  // namespace jtmc
