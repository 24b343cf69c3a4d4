#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jtmc/vertex_set.hpp"

namespace jtmc {

/// Tree edge between node handles, stored with a < b.
struct TreeEdge {
  NodeId a = 0;
  NodeId b = 0;

  friend auto operator<=>(const TreeEdge&, const TreeEdge&) = default;
};

/// Labelled, unrooted tree on nodes {0, ..., n-1}.
class Tree {
 public:
  Tree() = default;
  /// Throws NotATree unless `edges` spans n nodes without cycles.
  Tree(std::size_t n, const std::vector<TreeEdge>& edges);

  std::size_t size() const noexcept { return adjacency_.size(); }
  const std::vector<NodeId>& neighbours(NodeId node) const { return adjacency_[node]; }
  std::size_t degree(NodeId node) const { return adjacency_[node].size(); }

  /// Edges sorted lexicographically.
  std::vector<TreeEdge> edges() const;

  friend bool operator==(const Tree& x, const Tree& y) { return x.edges() == y.edges(); }

 private:
  std::vector<std::vector<NodeId>> adjacency_;
};

/// Decode a Prüfer sequence of length n-2 (n >= 2) into a labelled tree.
Tree tree_from_pruefer(std::size_t n, std::span<const NodeId> sequence);

/// Encode a tree on n >= 2 nodes as its Prüfer sequence.
std::vector<NodeId> pruefer_code(const Tree& tree);

/// Path 0-1-...-(n-1).
Tree path_tree(std::size_t n);

/// Star centred at node 0.
Tree star_tree(std::size_t n);

/// True when `edges` form a spanning tree on n nodes.
bool is_spanning_tree(std::size_t n, const std::vector<TreeEdge>& edges);

}  // namespace jtmc
