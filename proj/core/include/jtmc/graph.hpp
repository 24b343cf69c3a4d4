#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "jtmc/vertex_set.hpp"

namespace jtmc {

/// Undirected edge with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on vertices {0, ..., p-1}, stored as adjacency
/// bit rows. Symmetric with an empty diagonal by construction.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t p);

  static Graph complete(std::size_t p);
  static Graph from_edges(std::size_t p, const std::vector<Edge>& edges);

  std::size_t num_vertices() const noexcept { return rows_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  bool adjacent(Vertex a, Vertex b) const noexcept { return rows_[a].contains(b); }
  const VertexSet& neighbours(Vertex v) const noexcept { return rows_[v]; }

  /// Returns true if the edge was absent.
  bool add_edge(Vertex a, Vertex b);
  /// Returns true if the edge was present.
  bool remove_edge(Vertex a, Vertex b);

  /// Connect every pair of distinct members of `clique`.
  void make_complete(const VertexSet& clique);

  bool is_complete(const VertexSet& subset) const;

  /// All edges in lexicographic order.
  std::vector<Edge> edges() const;

  /// Empty set sized for this graph's vertex universe.
  VertexSet empty_set() const { return VertexSet(num_vertices()); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.rows_ == b.rows_;
  }

 private:
  std::vector<VertexSet> rows_;
  std::size_t edge_count_ = 0;
};

/// Maximum cardinality search order. Ties go to the lowest vertex index.
std::vector<Vertex> maximum_cardinality_search(const Graph& g);

/// Chordality via maximum cardinality search plus the zero fill-in test.
bool is_chordal(const Graph& g);

/// Maximal cliques of a chordal graph, in lexicographic order of their sorted
/// member lists. Throws NotChordal otherwise.
std::vector<VertexSet> maximal_cliques(const Graph& g);

/// Every labelled chordal graph on p <= 6 vertices. Candidates are visited by
/// increasing bit mask over the upper-triangle pairs in lexicographic order.
/// Throws TooLarge for p > 6.
std::vector<Graph> enumerate_decomposable_graphs(std::size_t p);

/// p rows of p comma-separated 0/1 entries; no header.
std::string to_adjacency_csv(const Graph& g);
Graph graph_from_adjacency_csv(const std::string& text);

/// {"p": int, "edges": [[i, j], ...]} with i < j, lexicographically sorted.
std::string to_edge_list_json(const Graph& g);
Graph graph_from_edge_list_json(const std::string& text);

}  // namespace jtmc
