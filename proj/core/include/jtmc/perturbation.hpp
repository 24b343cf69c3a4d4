#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "jtmc/graph.hpp"
#include "jtmc/junction_tree.hpp"
#include "jtmc/vertex_set.hpp"

namespace jtmc {

enum class MoveKind { Add, Remove };

const char* to_string(MoveKind kind) noexcept;

/// A clique that can be updated for a given vertex, together with its unique
/// anchor: the node of T_v it is joined to.
struct Candidate {
  NodeId node = 0;
  NodeId anchor = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Partition of the nodes of T relative to vertex v.
///
/// `neighbours` holds the nodes outside T_v adjacent to it (v can be added to
/// them); `boundary` holds the degree-1 nodes of T_v (v can be removed from
/// them). A singleton T_v has an empty boundary, so v always stays housed.
/// Both lists are sorted by node handle.
struct PartitionSets {
  Vertex vertex = 0;
  std::size_t subtree_size = 0;  // |T_v|
  std::vector<Candidate> neighbours;
  std::vector<Candidate> boundary;

  const std::vector<Candidate>& of(MoveKind kind) const {
    return kind == MoveKind::Add ? neighbours : boundary;
  }
  bool in_boundary(NodeId node) const;
};

/// Add v to a neighbour node, or remove v from a boundary node.
struct MoveProposal {
  Vertex vertex = 0;
  MoveKind kind = MoveKind::Add;
  NodeId target = 0;
  NodeId anchor = 0;
  VertexSet clique;            // C, before the move
  VertexSet result;            // C' = C | {v} or C - {v}
  VertexSet separator_before;  // C & C_adj
  VertexSet separator_after;   // C' & C_adj
  VertexSet changed;           // u with (v, u) connected (Add) or disconnected (Remove)

  bool graph_update() const { return !changed.empty(); }
  std::vector<Edge> edges_changed() const;
};

/// Single pass over T_v and its tree neighbours. Throws VertexUnhoused.
PartitionSets partition_sets(const JunctionTree& tree, Vertex v);

/// Builds the proposal for updating `candidate` (taken from the matching
/// partition set) for vertex v.
MoveProposal make_move(const JunctionTree& tree, Vertex v, MoveKind kind, const Candidate& candidate);

/// The move that undoes `move` once it has been applied.
MoveProposal inverse(const MoveProposal& move);

/// Re-checks the proposal against the current tree and mutates the target
/// clique. Throws StaleProposal if the proposal no longer fits.
void apply_move(JunctionTree& tree, const MoveProposal& move);

/// |boundary of v| after an Add, from the sets of the current tree.
/// An internal anchor gains one leaf (the updated clique); a leaf anchor
/// stops being a leaf, so the count is unchanged; a singleton T_v turns into
/// two leaves.
std::size_t reverse_count_add(const PartitionSets& sets, const MoveProposal& move);
std::size_t reverse_count_add(const JunctionTree& tree, const MoveProposal& move);

/// |neighbours of v| after a Remove: the updated clique joins the neighbour
/// set and its deg(C, T) - 1 neighbours outside T_v leave it.
std::size_t reverse_count_remove(const JunctionTree& tree, const PartitionSets& sets,
                                 const MoveProposal& move);
std::size_t reverse_count_remove(const JunctionTree& tree, const MoveProposal& move);

/// One step of a connect/disconnect peel: vertex v gains or loses edges to
/// every member of `block`.
struct PeelStep {
  Vertex vertex = 0;
  VertexSet block;
};

/// Memoises the reduced junction trees of graphs visited by the predicates.
class JunctionTreeCatalog {
 public:
  JunctionTreeCatalog();
  ~JunctionTreeCatalog();
  JunctionTreeCatalog(JunctionTreeCatalog&&) noexcept;
  JunctionTreeCatalog& operator=(JunctionTreeCatalog&&) noexcept;

  const std::vector<JunctionTree>& trees_of(const Graph& g);
  std::size_t size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Largest vertex count accepted by the connect/disconnect predicates.
inline constexpr std::size_t kMaxPredicateVertices = 8;

/// Searches for a sequence of partition-set moves that connects every vertex
/// of V to every vertex of U. Each step picks v in V, a reduced junction tree
/// J of the current graph, a neighbour clique C of J_v with anchor C_adj, and
/// connects v to a block of U inside C - C_adj. Returns the steps, or nullopt
/// when no sequence exists (the connected graph is then not chordal).
///
/// Preconditions: V and U disjoint, each complete in g, no V-U edges, g
/// chordal with at most 8 vertices. Throws DomainError / NotChordal /
/// TooLarge otherwise.
std::optional<std::vector<PeelStep>> find_connect_sequence(const Graph& g, const VertexSet& V,
                                                           const VertexSet& U,
                                                           JunctionTreeCatalog* catalog = nullptr);

/// Disconnect counterpart. Each step picks v in V and a clique C that is a
/// leaf of T_v in an expansion of a reduced junction tree (C - W inserted as
/// its anchor); v is disconnected from a block W of U inside C that meets no
/// other clique containing v.
///
/// Preconditions: V and U disjoint, V | U complete in g, g chordal with at
/// most 8 vertices.
std::optional<std::vector<PeelStep>> find_disconnect_sequence(const Graph& g, const VertexSet& V,
                                                              const VertexSet& U);

bool check_connect_valid(const Graph& g, const VertexSet& V, const VertexSet& U,
                         JunctionTreeCatalog* catalog = nullptr);
bool check_disconnect_valid(const Graph& g, const VertexSet& V, const VertexSet& U);

}  // namespace jtmc
