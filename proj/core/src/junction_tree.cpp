#include "jtmc/junction_tree.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

#include "jtmc/errors.hpp"

namespace jtmc {

namespace {

std::vector<NodeSet> build_vertex_index(std::size_t p, const std::vector<VertexSet>& cliques) {
  std::vector<NodeSet> index(p, NodeSet(cliques.size()));
  for (NodeId node = 0; node < cliques.size(); ++node) {
    for (Vertex v : cliques[node]) index[v].insert(node);
  }
  return index;
}

// True when `members` is non-empty and connected in `topology`.
bool connected_in(const Tree& topology, const NodeSet& members) {
  if (members.empty()) return false;
  std::vector<NodeId> stack{members.first()};
  NodeSet seen(topology.size());
  seen.insert(stack.back());
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeId node = stack.back();
    stack.pop_back();
    for (NodeId nb : topology.neighbours(node)) {
      if (members.contains(nb) && !seen.contains(nb)) {
        seen.insert(nb);
        stack.push_back(nb);
        ++reached;
      }
    }
  }
  return reached == members.count();
}

bool junction_property_holds(std::size_t p, const std::vector<VertexSet>& cliques,
                             const Tree& topology) {
  const auto index = build_vertex_index(p, cliques);
  for (const auto& members : index) {
    if (!connected_in(topology, members)) return false;
  }
  return true;
}

NodeId uf_find(std::vector<NodeId>& parent, NodeId x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

JunctionTree::JunctionTree(std::size_t p, std::vector<VertexSet> cliques, const Tree& topology)
    : p_(p), cliques_(std::move(cliques)), topology_(topology) {
  if (topology_.size() != cliques_.size()) {
    throw NotATree("topology size does not match the number of cliques");
  }
  for (const auto& c : cliques_) {
    if (c.universe() != p_) throw DomainError("clique universe does not match vertex count");
  }
  vertex_index_ = build_vertex_index(p_, cliques_);
}

void JunctionTree::add_vertex(NodeId node, Vertex v) {
  cliques_[node].insert(v);
  vertex_index_[v].insert(node);
}

void JunctionTree::remove_vertex(NodeId node, Vertex v) {
  cliques_[node].erase(v);
  vertex_index_[v].erase(node);
}

void JunctionTree::set_topology(const Tree& topology) {
  if (topology.size() != cliques_.size()) {
    throw NotATree("topology size does not match the number of cliques");
  }
  topology_ = topology;
}

bool JunctionTree::vertex_index_consistent() const {
  return build_vertex_index(p_, cliques_) == vertex_index_;
}

JunctionTree init_no_edge(std::size_t p, const Tree& skeleton) {
  if (skeleton.size() != p) throw NotATree("skeleton must have p nodes");
  std::vector<VertexSet> cliques;
  cliques.reserve(p);
  for (Vertex i = 0; i < p; ++i) cliques.push_back(VertexSet(p, {i}));
  return JunctionTree(p, std::move(cliques), skeleton);
}

Graph g_of(const JunctionTree& tree) {
  Graph g(tree.num_vertices());
  for (const auto& c : tree.cliques()) g.make_complete(c);
  return g;
}

JunctionTree press(const JunctionTree& tree) {
  const std::size_t n = tree.num_nodes();
  std::vector<std::vector<NodeId>> adj(n);
  for (NodeId a = 0; a < n; ++a) adj[a] = tree.tree_neighbours(a);
  std::vector<bool> alive(n, true);

  auto unlink = [&](NodeId a, NodeId b) {
    std::erase(adj[a], b);
    std::erase(adj[b], a);
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId a = 0; a < n && !changed; ++a) {
      if (!alive[a]) continue;
      for (NodeId b : adj[a]) {
        if (!tree.clique(a).is_subset_of(tree.clique(b))) continue;
        // Absorb a into b.
        const auto others = adj[a];
        for (NodeId c : others) {
          unlink(a, c);
          if (c != b) {
            adj[c].push_back(b);
            adj[b].push_back(c);
          }
        }
        alive[a] = false;
        changed = true;
        break;
      }
    }
  }

  std::vector<NodeId> new_id(n, 0);
  std::vector<VertexSet> cliques;
  for (NodeId a = 0; a < n; ++a) {
    if (!alive[a]) continue;
    new_id[a] = static_cast<NodeId>(cliques.size());
    cliques.push_back(tree.clique(a));
  }
  std::vector<TreeEdge> edges;
  for (NodeId a = 0; a < n; ++a) {
    if (!alive[a]) continue;
    for (NodeId b : adj[a]) {
      if (a < b) edges.push_back({new_id[a], new_id[b]});
    }
  }
  const std::size_t m = cliques.size();
  return JunctionTree(tree.num_vertices(), std::move(cliques), Tree(m, edges));
}

InducedSubtree induced_subtree(const JunctionTree& tree, Vertex v) {
  const NodeSet& members = tree.nodes_containing(v);
  if (members.empty()) {
    throw VertexUnhoused("vertex " + std::to_string(v) + " is in no clique");
  }
  InducedSubtree sub;
  sub.vertex = v;
  sub.root = members.first();
  for (NodeId node : members) {
    std::size_t deg = 0;
    for (NodeId nb : tree.tree_neighbours(node)) {
      if (members.contains(nb)) ++deg;
    }
    sub.nodes.push_back(node);
    sub.degrees.push_back(deg);
  }
  return sub;
}

bool validate_junction_property(const JunctionTree& tree) {
  for (Vertex v = 0; v < tree.num_vertices(); ++v) {
    if (!connected_in(tree.topology(), tree.nodes_containing(v))) return false;
  }
  return true;
}

std::size_t count_maximal_cliques(const JunctionTree& tree) {
  // Equal cliques containing a common vertex are joined through equal nodes,
  // so a maximal clique appears as one connected group of equal nodes. A
  // group is non-maximal iff one of its members has a strictly larger
  // neighbour.
  const std::size_t n = tree.num_nodes();
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b : tree.tree_neighbours(a)) {
      if (a < b && tree.clique(a) == tree.clique(b)) {
        parent[uf_find(parent, a)] = uf_find(parent, b);
      }
    }
  }
  std::vector<bool> dominated(n, false);
  for (NodeId a = 0; a < n; ++a) {
    const NodeId root = uf_find(parent, a);
    if (tree.clique(a).empty()) dominated[root] = true;
    for (NodeId b : tree.tree_neighbours(a)) {
      if (tree.clique(a).is_subset_of(tree.clique(b)) && tree.clique(a) != tree.clique(b)) {
        dominated[root] = true;
      }
    }
  }
  std::size_t count = 0;
  for (NodeId a = 0; a < n; ++a) {
    if (uf_find(parent, a) == a && !dominated[a]) ++count;
  }
  return count;
}

JunctionTree mcs_clique_tree(const Graph& g) {
  auto cliques = maximal_cliques(g);
  const std::size_t m = cliques.size();
  // Prim's algorithm for a maximum-weight spanning tree.
  std::vector<bool> in_tree(m, false);
  std::vector<long> best_weight(m, -1);
  std::vector<NodeId> best_link(m, 0);
  std::vector<TreeEdge> edges;
  in_tree[0] = true;
  for (NodeId j = 1; j < m; ++j) {
    best_weight[j] = static_cast<long>(cliques[0].intersection_count(cliques[j]));
    best_link[j] = 0;
  }
  for (std::size_t added = 1; added < m; ++added) {
    NodeId pick = 0;
    long pick_weight = -2;
    for (NodeId j = 0; j < m; ++j) {
      if (!in_tree[j] && best_weight[j] > pick_weight) {
        pick = j;
        pick_weight = best_weight[j];
      }
    }
    in_tree[pick] = true;
    edges.push_back({std::min(pick, best_link[pick]), std::max(pick, best_link[pick])});
    for (NodeId j = 0; j < m; ++j) {
      if (in_tree[j]) continue;
      const auto w = static_cast<long>(cliques[pick].intersection_count(cliques[j]));
      if (w > best_weight[j]) {
        best_weight[j] = w;
        best_link[j] = pick;
      }
    }
  }
  return JunctionTree(g.num_vertices(), std::move(cliques), Tree(m, edges));
}

std::vector<Tree> enumerate_junction_topologies(const std::vector<VertexSet>& cliques) {
  const std::size_t n = cliques.size();
  if (n == 0) return {};
  if (n > 8) throw TooLarge("enumerate_junction_topologies: more than 8 cliques");
  const std::size_t p = cliques.front().universe();
  if (n == 1) return {Tree(1, {})};
  std::vector<Tree> out;
  std::vector<NodeId> seq(n - 2, 0);
  for (;;) {
    Tree t = tree_from_pruefer(n, seq);
    if (junction_property_holds(p, cliques, t)) out.push_back(std::move(t));
    std::size_t k = 0;
    while (k < seq.size() && ++seq[k] == n) seq[k++] = 0;
    if (k == seq.size()) break;
  }
  return out;
}

std::vector<JunctionTree> enumerate_junction_trees(const Graph& g) {
  auto cliques = maximal_cliques(g);
  std::vector<JunctionTree> out;
  for (const auto& t : enumerate_junction_topologies(cliques)) {
    out.emplace_back(g.num_vertices(), cliques, t);
  }
  return out;
}

std::string to_json(const JunctionTree& tree) {
  nlohmann::json j;
  j["p"] = tree.num_vertices();
  auto cliques = nlohmann::json::array();
  for (const auto& c : tree.cliques()) cliques.push_back(c.members());
  j["cliques"] = std::move(cliques);
  auto edges = nlohmann::json::array();
  for (const auto& e : tree.tree_edges()) edges.push_back({e.a, e.b});
  j["tree_edges"] = std::move(edges);
  return j.dump();
}

JunctionTree junction_tree_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto p = j.at("p").get<std::size_t>();
    std::vector<VertexSet> cliques;
    for (const auto& c : j.at("cliques")) {
      VertexSet s(p);
      for (const auto& v : c) {
        const auto x = v.get<Vertex>();
        if (x >= p) throw ParseError("junction tree JSON: vertex out of range");
        s.insert(x);
      }
      cliques.push_back(std::move(s));
    }
    std::vector<TreeEdge> edges;
    for (const auto& e : j.at("tree_edges")) {
      if (e.size() != 2) throw ParseError("junction tree JSON: malformed edge");
      const auto a = e.at(0).get<NodeId>();
      const auto b = e.at(1).get<NodeId>();
      edges.push_back({std::min(a, b), std::max(a, b)});
    }
    const std::size_t n = cliques.size();
    return JunctionTree(p, std::move(cliques), Tree(n, edges));
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("junction tree JSON: ") + ex.what());
  }
}

}  // namespace jtmc
