#include "jtmc/perturbation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <string>
#include <unordered_map>

#include "jtmc/errors.hpp"

namespace jtmc {

const char* to_string(MoveKind kind) noexcept {
  return kind == MoveKind::Add ? "add" : "remove";
}

bool PartitionSets::in_boundary(NodeId node) const {
  auto it = std::lower_bound(boundary.begin(), boundary.end(), node,
                             [](const Candidate& c, NodeId n) { return c.node < n; });
  return it != boundary.end() && it->node == node;
}

std::vector<Edge> MoveProposal::edges_changed() const {
  std::vector<Edge> out;
  out.reserve(changed.count());
  for (Vertex u : changed) out.push_back({std::min(u, vertex), std::max(u, vertex)});
  std::sort(out.begin(), out.end());
  return out;
}

PartitionSets partition_sets(const JunctionTree& tree, Vertex v) {
  const NodeSet& members = tree.nodes_containing(v);
  if (members.empty()) {
    throw VertexUnhoused("vertex " + std::to_string(v) + " is in no clique");
  }
  PartitionSets sets;
  sets.vertex = v;
  sets.subtree_size = members.count();
  for (NodeId node : members) {
    std::size_t inside = 0;
    NodeId last_inside = node;
    for (NodeId nb : tree.tree_neighbours(node)) {
      if (members.contains(nb)) {
        ++inside;
        last_inside = nb;
      } else {
        sets.neighbours.push_back({nb, node});
      }
    }
    if (inside == 1) sets.boundary.push_back({node, last_inside});
  }
  auto by_node = [](const Candidate& a, const Candidate& b) { return a.node < b.node; };
  std::sort(sets.neighbours.begin(), sets.neighbours.end(), by_node);
  return sets;
}

namespace {

void check_fresh(const JunctionTree& tree, const MoveProposal& m) {
  const std::size_t n = tree.num_nodes();
  const auto stale = [&](const char* why) {
    throw StaleProposal(std::string(to_string(m.kind)) + " v=" + std::to_string(m.vertex) +
                        " C=" + std::to_string(m.target) + ": " + why);
  };
  if (m.vertex >= tree.num_vertices()) stale("vertex out of range");
  if (m.target >= n || m.anchor >= n || m.target == m.anchor) stale("bad node handles");
  const auto& nb = tree.tree_neighbours(m.target);
  if (!std::binary_search(nb.begin(), nb.end(), m.anchor)) stale("anchor not adjacent");
  if (tree.clique(m.target) != m.clique) stale("target clique changed");
  const NodeSet& members = tree.nodes_containing(m.vertex);
  if (!members.contains(m.anchor)) stale("anchor does not contain v");
  if (m.kind == MoveKind::Add) {
    if (members.contains(m.target)) stale("target already contains v");
  } else {
    if (!members.contains(m.target)) stale("target does not contain v");
    for (NodeId x : nb) {
      if (x != m.anchor && members.contains(x)) stale("target is not a leaf of T_v");
    }
  }
}

}  // namespace

MoveProposal make_move(const JunctionTree& tree, Vertex v, MoveKind kind,
                       const Candidate& candidate) {
  MoveProposal m;
  m.vertex = v;
  m.kind = kind;
  m.target = candidate.node;
  m.anchor = candidate.anchor;
  if (m.target < tree.num_nodes()) m.clique = tree.clique(m.target);
  check_fresh(tree, m);
  const VertexSet& adj = tree.clique(m.anchor);
  m.result = m.clique;
  if (kind == MoveKind::Add) {
    m.result.insert(v);
  } else {
    m.result.erase(v);
  }
  m.separator_before = m.clique & adj;
  m.separator_after = m.result & adj;
  m.changed = m.clique - adj;
  return m;
}

MoveProposal inverse(const MoveProposal& move) {
  MoveProposal r = move;
  r.kind = move.kind == MoveKind::Add ? MoveKind::Remove : MoveKind::Add;
  std::swap(r.clique, r.result);
  std::swap(r.separator_before, r.separator_after);
  return r;
}

void apply_move(JunctionTree& tree, const MoveProposal& move) {
  check_fresh(tree, move);
  if (move.kind == MoveKind::Add) {
    tree.add_vertex(move.target, move.vertex);
  } else {
    tree.remove_vertex(move.target, move.vertex);
  }
}

std::size_t reverse_count_add(const PartitionSets& sets, const MoveProposal& move) {
  if (sets.subtree_size == 1) return 2;
  return sets.boundary.size() + (sets.in_boundary(move.anchor) ? 0 : 1);
}

std::size_t reverse_count_add(const JunctionTree& tree, const MoveProposal& move) {
  return reverse_count_add(partition_sets(tree, move.vertex), move);
}

std::size_t reverse_count_remove(const JunctionTree& tree, const PartitionSets& sets,
                                 const MoveProposal& move) {
  return sets.neighbours.size() + 2 - tree.degree(move.target);
}

std::size_t reverse_count_remove(const JunctionTree& tree, const MoveProposal& move) {
  return reverse_count_remove(tree, partition_sets(tree, move.vertex), move);
}

// ---------------------------------------------------------------------------
// Connect / disconnect predicates

struct JunctionTreeCatalog::Impl {
  std::map<std::vector<Edge>, std::vector<JunctionTree>> trees;
};

JunctionTreeCatalog::JunctionTreeCatalog() : impl_(std::make_unique<Impl>()) {}
JunctionTreeCatalog::~JunctionTreeCatalog() = default;
JunctionTreeCatalog::JunctionTreeCatalog(JunctionTreeCatalog&&) noexcept = default;
JunctionTreeCatalog& JunctionTreeCatalog::operator=(JunctionTreeCatalog&&) noexcept = default;

const std::vector<JunctionTree>& JunctionTreeCatalog::trees_of(const Graph& g) {
  auto key = g.edges();
  key.push_back({static_cast<Vertex>(g.num_vertices()), 0});  // distinguishes p
  auto it = impl_->trees.find(key);
  if (it == impl_->trees.end()) {
    it = impl_->trees.emplace(std::move(key), enumerate_junction_trees(g)).first;
  }
  return it->second;
}

std::size_t JunctionTreeCatalog::size() const { return impl_->trees.size(); }

namespace {

struct PairIndex {
  std::vector<Vertex> vs;
  std::vector<Vertex> us;

  std::size_t size() const { return vs.size() * us.size(); }
  std::uint32_t bit(std::size_t i, std::size_t j) const {
    return std::uint32_t{1} << (i * us.size() + j);
  }
};

void check_common(const Graph& g, const VertexSet& V, const VertexSet& U, const char* who) {
  const std::size_t p = g.num_vertices();
  if (p > kMaxPredicateVertices) {
    throw TooLarge(std::string(who) + ": more than " + std::to_string(kMaxPredicateVertices) +
                   " vertices");
  }
  if (V.universe() != p || U.universe() != p) {
    throw DomainError(std::string(who) + ": vertex sets sized for a different graph");
  }
  if (V.intersects(U)) throw DomainError(std::string(who) + ": V and U overlap");
  if (!is_chordal(g)) throw NotChordal(std::string(who) + ": input graph is not chordal");
}

// The graph after toggling every V-U pair whose bit is set in `mask`.
Graph toggled(const Graph& g, const PairIndex& pairs, std::uint32_t mask, bool connect) {
  Graph h = g;
  for (std::size_t i = 0; i < pairs.vs.size(); ++i) {
    for (std::size_t j = 0; j < pairs.us.size(); ++j) {
      if ((mask & pairs.bit(i, j)) == 0) continue;
      if (connect) {
        h.add_edge(pairs.vs[i], pairs.us[j]);
      } else {
        h.remove_edge(pairs.vs[i], pairs.us[j]);
      }
    }
  }
  return h;
}

// Breadth-first search over the set of pairs already toggled. `expand`
// appends (vertex index, block) moves available from a state.
template <class Expand>
std::optional<std::vector<PeelStep>> peel_search(const Graph& g, const PairIndex& pairs,
                                                 bool connect, Expand expand) {
  const std::size_t p = g.num_vertices();
  const std::uint32_t goal =
      pairs.size() == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << pairs.size()) - 1;
  struct Parent {
    std::uint32_t prev;
    PeelStep step;
  };
  std::unordered_map<std::uint32_t, Parent> parent;
  parent.emplace(0, Parent{0, {}});
  std::deque<std::uint32_t> queue{0};
  std::vector<std::pair<std::size_t, VertexSet>> moves;
  while (!queue.empty()) {
    const std::uint32_t mask = queue.front();
    queue.pop_front();
    if (mask == goal) {
      std::vector<PeelStep> steps;
      for (std::uint32_t m = mask; m != 0; m = parent.at(m).prev) steps.push_back(parent.at(m).step);
      std::reverse(steps.begin(), steps.end());
      return steps;
    }
    const Graph h = toggled(g, pairs, mask, connect);
    moves.clear();
    expand(h, mask, moves);
    for (const auto& [i, block] : moves) {
      std::uint32_t next = mask;
      for (std::size_t j = 0; j < pairs.us.size(); ++j) {
        if (block.contains(pairs.us[j])) next |= pairs.bit(i, j);
      }
      if (next == mask || parent.count(next) != 0) continue;
      parent.emplace(next, Parent{mask, PeelStep{pairs.vs[i], block}});
      queue.push_back(next);
    }
  }
  (void)p;
  return std::nullopt;
}

// Members of U not yet toggled for V-vertex i.
VertexSet remaining(const PairIndex& pairs, std::size_t i, std::uint32_t mask, std::size_t p) {
  VertexSet r(p);
  for (std::size_t j = 0; j < pairs.us.size(); ++j) {
    if ((mask & pairs.bit(i, j)) == 0) r.insert(pairs.us[j]);
  }
  return r;
}

// A block and, when it has more than one member, each of its singletons.
void push_block(std::vector<std::pair<std::size_t, VertexSet>>& moves, std::size_t i,
                const VertexSet& block) {
  moves.emplace_back(i, block);
  if (block.count() > 1) {
    for (Vertex u : block) moves.emplace_back(i, VertexSet(block.universe(), {u}));
  }
}

}  // namespace

std::optional<std::vector<PeelStep>> find_connect_sequence(const Graph& g, const VertexSet& V,
                                                           const VertexSet& U,
                                                           JunctionTreeCatalog* catalog) {
  check_common(g, V, U, "check_connect_valid");
  if (!g.is_complete(V) || !g.is_complete(U)) {
    throw DomainError("check_connect_valid: V and U must each be complete");
  }
  for (Vertex v : V) {
    if (g.neighbours(v).intersects(U)) throw DomainError("check_connect_valid: V-U edge present");
  }
  const std::size_t p = g.num_vertices();
  PairIndex pairs{V.members(), U.members()};
  JunctionTreeCatalog local;
  JunctionTreeCatalog& cat = catalog != nullptr ? *catalog : local;

  return peel_search(g, pairs, true, [&](const Graph& h, std::uint32_t mask, auto& moves) {
    for (const JunctionTree& j : cat.trees_of(h)) {
      for (std::size_t i = 0; i < pairs.vs.size(); ++i) {
        const VertexSet rest = remaining(pairs, i, mask, p);
        if (rest.empty()) continue;
        const PartitionSets sets = partition_sets(j, pairs.vs[i]);
        for (const Candidate& c : sets.neighbours) {
          const VertexSet block = (j.clique(c.node) - j.clique(c.anchor)) & rest;
          if (!block.empty()) push_block(moves, i, block);
        }
      }
    }
  });
}

std::optional<std::vector<PeelStep>> find_disconnect_sequence(const Graph& g, const VertexSet& V,
                                                              const VertexSet& U) {
  check_common(g, V, U, "check_disconnect_valid");
  if (!g.is_complete(V | U)) {
    throw DomainError("check_disconnect_valid: V | U must be complete");
  }
  const std::size_t p = g.num_vertices();
  PairIndex pairs{V.members(), U.members()};

  return peel_search(g, pairs, false, [&](const Graph& h, std::uint32_t mask, auto& moves) {
    const auto cliques = maximal_cliques(h);
    for (std::size_t i = 0; i < pairs.vs.size(); ++i) {
      const Vertex v = pairs.vs[i];
      const VertexSet rest = remaining(pairs, i, mask, p);
      if (rest.empty()) continue;
      for (std::size_t a = 0; a < cliques.size(); ++a) {
        if (!cliques[a].contains(v)) continue;
        // Inserting C - W between C and the rest of T_v makes C a leaf whose
        // private part is W.
        VertexSet block = cliques[a] & rest;
        for (std::size_t b = 0; b < cliques.size() && !block.empty(); ++b) {
          if (b != a && cliques[b].contains(v)) block -= cliques[b];
        }
        if (!block.empty()) push_block(moves, i, block);
      }
    }
  });
}

bool check_connect_valid(const Graph& g, const VertexSet& V, const VertexSet& U,
                         JunctionTreeCatalog* catalog) {
  return find_connect_sequence(g, V, U, catalog).has_value();
}

bool check_disconnect_valid(const Graph& g, const VertexSet& V, const VertexSet& U) {
  return find_disconnect_sequence(g, V, U).has_value();
}

}  // namespace jtmc
