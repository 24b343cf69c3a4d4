#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "jtmc/graph.hpp"
#include "jtmc/tree.hpp"
#include "jtmc/vertex_set.hpp"

namespace jtmc {

/// Expanded junction tree over graph vertices {0, ..., p-1}.
///
/// Nodes are stable integer handles carrying cliques that may be empty or
/// non-maximal. Separators are implicit: the separator of tree edge (a, b) is
/// clique(a) & clique(b). For every vertex the set of nodes containing it is
/// kept up to date on every mutation.
class JunctionTree {
 public:
  JunctionTree() = default;
  /// Throws NotATree if `topology` does not span `cliques.size()` nodes.
  JunctionTree(std::size_t p, std::vector<VertexSet> cliques, const Tree& topology);

  std::size_t num_vertices() const noexcept { return p_; }
  std::size_t num_nodes() const noexcept { return cliques_.size(); }

  const VertexSet& clique(NodeId node) const { return cliques_[node]; }
  const std::vector<VertexSet>& cliques() const noexcept { return cliques_; }
  const std::vector<NodeId>& tree_neighbours(NodeId node) const { return topology_.neighbours(node); }
  std::size_t degree(NodeId node) const { return topology_.degree(node); }
  const Tree& topology() const noexcept { return topology_; }
  std::vector<TreeEdge> tree_edges() const { return topology_.edges(); }

  /// Nodes whose clique contains v (a set over node handles).
  const NodeSet& nodes_containing(Vertex v) const { return vertex_index_[v]; }

  VertexSet separator(NodeId a, NodeId b) const { return cliques_[a] & cliques_[b]; }

  /// In-place clique mutation; the vertex index follows.
  void add_vertex(NodeId node, Vertex v);
  void remove_vertex(NodeId node, Vertex v);

  /// Replace the tree edges keeping every clique. Throws NotATree.
  void set_topology(const Tree& topology);

  /// Recomputes the vertex index from scratch and compares; debug aid.
  bool vertex_index_consistent() const;

  friend bool operator==(const JunctionTree& a, const JunctionTree& b) {
    return a.p_ == b.p_ && a.cliques_ == b.cliques_ && a.topology_ == b.topology_;
  }

 private:
  std::size_t p_ = 0;
  std::vector<VertexSet> cliques_;
  Tree topology_;
  std::vector<NodeSet> vertex_index_;
};

/// T_v: the nodes containing v, with their degrees inside T_v.
struct InducedSubtree {
  Vertex vertex = 0;
  NodeId root = 0;  // smallest node handle in the subtree
  std::vector<NodeId> nodes;
  std::vector<std::size_t> degrees;  // parallel to `nodes`
};

/// Node i carries {i}; the tree is `skeleton`. Throws NotATree.
JunctionTree init_no_edge(std::size_t p, const Tree& skeleton);

/// The decomposable graph represented by T: every pair co-resident in a
/// clique is an edge.
Graph g_of(const JunctionTree& tree);

/// Repeatedly absorbs a node into an adjacent superset node (rewiring its
/// other edges to the superset) until no node is contained in a neighbour.
/// The result carries exactly the maximal cliques of g_of(tree).
JunctionTree press(const JunctionTree& tree);

/// Throws VertexUnhoused if no node contains v.
InducedSubtree induced_subtree(const JunctionTree& tree, Vertex v);

/// True iff, for every vertex, the nodes containing it are non-empty and
/// induce a connected subtree.
bool validate_junction_property(const JunctionTree& tree);

/// Number of maximal cliques of g_of(tree), computed from the expanded tree
/// without compressing it.
std::size_t count_maximal_cliques(const JunctionTree& tree);

/// Reduced junction tree of a chordal graph: nodes are the maximal cliques in
/// lexicographic order, joined by a maximum-weight spanning tree of the
/// clique intersection graph (ties to the lowest node index). Throws
/// NotChordal.
JunctionTree mcs_clique_tree(const Graph& g);

/// All labelled trees over the given cliques (as node labels) satisfying the
/// junction property. Exhaustive over n^(n-2) trees; throws TooLarge for more
/// than 8 cliques.
std::vector<Tree> enumerate_junction_topologies(const std::vector<VertexSet>& cliques);

/// Every reduced junction tree of a chordal graph with at most 8 maximal
/// cliques.
std::vector<JunctionTree> enumerate_junction_trees(const Graph& g);

/// Canonical JSON: {"p": int, "cliques": [[v, ...], ...], "tree_edges": [[i, j], ...]}.
std::string to_json(const JunctionTree& tree);
/// Throws ParseError on malformed input or NotATree.
JunctionTree junction_tree_from_json(const std::string& text);

}  // namespace jtmc
