#include "jtmc/graph.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "jtmc/errors.hpp"

namespace jtmc {

Graph::Graph(std::size_t p) : rows_(p, VertexSet(p)) {}

Graph Graph::complete(std::size_t p) {
  Graph g(p);
  g.make_complete(VertexSet::full(p));
  return g;
}

Graph Graph::from_edges(std::size_t p, const std::vector<Edge>& edges) {
  Graph g(p);
  for (const auto& e : edges) g.add_edge(e.u, e.v);
  return g;
}

bool Graph::add_edge(Vertex a, Vertex b) {
  if (a == b || a >= num_vertices() || b >= num_vertices()) {
    throw DomainError("invalid edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
  }
  if (rows_[a].contains(b)) return false;
  rows_[a].insert(b);
  rows_[b].insert(a);
  ++edge_count_;
  return true;
}

bool Graph::remove_edge(Vertex a, Vertex b) {
  if (a == b || a >= num_vertices() || b >= num_vertices()) {
    throw DomainError("invalid edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
  }
  if (!rows_[a].contains(b)) return false;
  rows_[a].erase(b);
  rows_[b].erase(a);
  --edge_count_;
  return true;
}

void Graph::make_complete(const VertexSet& clique) {
  for (Vertex a : clique) {
    for (Vertex b : clique) {
      if (a < b) add_edge(a, b);
    }
  }
}

bool Graph::is_complete(const VertexSet& subset) const {
  for (Vertex a : subset) {
    VertexSet others = subset;
    others.erase(a);
    if (!others.is_subset_of(rows_[a])) return false;
  }
  return true;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (Vertex a = 0; a < num_vertices(); ++a) {
    for (Vertex b : rows_[a]) {
      if (a < b) out.push_back({a, b});
    }
  }
  return out;
}

std::vector<Vertex> maximum_cardinality_search(const Graph& g) {
  const std::size_t p = g.num_vertices();
  std::vector<std::size_t> label(p, 0);
  std::vector<bool> numbered(p, false);
  std::vector<Vertex> order;
  order.reserve(p);
  for (std::size_t step = 0; step < p; ++step) {
    Vertex best = 0;
    bool found = false;
    for (Vertex v = 0; v < p; ++v) {
      if (numbered[v]) continue;
      if (!found || label[v] > label[best]) {
        best = v;
        found = true;
      }
    }
    numbered[best] = true;
    order.push_back(best);
    for (Vertex w : g.neighbours(best)) {
      if (!numbered[w]) ++label[w];
    }
  }
  return order;
}

namespace {

// For each vertex in MCS order, its neighbours numbered before it.
std::vector<VertexSet> earlier_neighbours(const Graph& g, const std::vector<Vertex>& order) {
  const std::size_t p = g.num_vertices();
  std::vector<VertexSet> madj(p, VertexSet(p));
  VertexSet seen(p);
  for (Vertex v : order) {
    madj[v] = g.neighbours(v) & seen;
    seen.insert(v);
  }
  return madj;
}

}  // namespace

bool is_chordal(const Graph& g) {
  const std::size_t p = g.num_vertices();
  const auto order = maximum_cardinality_search(g);
  std::vector<std::size_t> position(p);
  for (std::size_t i = 0; i < p; ++i) position[order[i]] = i;
  const auto madj = earlier_neighbours(g, order);
  // Zero fill-in: the earlier neighbours of v, minus the latest of them (u),
  // must all be adjacent to u.
  for (Vertex v : order) {
    if (madj[v].empty()) continue;
    Vertex latest = madj[v].first();
    for (Vertex w : madj[v]) {
      if (position[w] > position[latest]) latest = w;
    }
    VertexSet rest = madj[v];
    rest.erase(latest);
    if (!rest.is_subset_of(g.neighbours(latest))) return false;
  }
  return true;
}

std::vector<VertexSet> maximal_cliques(const Graph& g) {
  if (!is_chordal(g)) throw NotChordal("maximal_cliques: graph is not chordal");
  const auto order = maximum_cardinality_search(g);
  const auto madj = earlier_neighbours(g, order);
  std::vector<VertexSet> candidates;
  candidates.reserve(order.size());
  for (Vertex v : order) {
    VertexSet k = madj[v];
    k.insert(v);
    candidates.push_back(std::move(k));
  }
  std::vector<VertexSet> cliques;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < candidates.size() && !dominated; ++j) {
      if (i == j) continue;
      if (candidates[i].is_subset_of(candidates[j]) &&
          (candidates[i] != candidates[j] || j < i)) {
        dominated = true;
      }
    }
    if (!dominated) cliques.push_back(candidates[i]);
  }
  std::sort(cliques.begin(), cliques.end(), lex_less);
  return cliques;
}

std::vector<Graph> enumerate_decomposable_graphs(std::size_t p) {
  if (p > 6) throw TooLarge("enumerate_decomposable_graphs: p must be <= 6");
  std::vector<Edge> pairs;
  for (Vertex a = 0; a < p; ++a) {
    for (Vertex b = a + 1; b < p; ++b) pairs.push_back({a, b});
  }
  std::vector<Graph> out;
  const std::uint64_t total = std::uint64_t{1} << pairs.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    Graph g(p);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if ((mask >> k) & 1U) g.add_edge(pairs[k].u, pairs[k].v);
    }
    if (is_chordal(g)) out.push_back(std::move(g));
  }
  return out;
}

std::string to_adjacency_csv(const Graph& g) {
  std::string out;
  const std::size_t p = g.num_vertices();
  out.reserve(p * p * 2);
  for (Vertex a = 0; a < p; ++a) {
    for (Vertex b = 0; b < p; ++b) {
      if (b > 0) out += ',';
      out += g.adjacent(a, b) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

Graph graph_from_adjacency_csv(const std::string& text) {
  std::vector<std::vector<int>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<int> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      const std::string tok = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
      if (tok == "0") {
        row.push_back(0);
      } else if (tok == "1") {
        row.push_back(1);
      } else {
        throw ParseError("adjacency CSV: entries must be 0 or 1, got '" + tok + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  const std::size_t p = rows.size();
  Graph g(p);
  for (std::size_t a = 0; a < p; ++a) {
    if (rows[a].size() != p) throw ParseError("adjacency CSV: matrix is not square");
    if (rows[a][a] != 0) throw ParseError("adjacency CSV: nonzero diagonal");
  }
  for (Vertex a = 0; a < p; ++a) {
    for (Vertex b = a + 1; b < p; ++b) {
      if (rows[a][b] != rows[b][a]) throw ParseError("adjacency CSV: matrix is not symmetric");
      if (rows[a][b] != 0) g.add_edge(a, b);
    }
  }
  return g;
}

std::string to_edge_list_json(const Graph& g) {
  nlohmann::json j;
  j["p"] = g.num_vertices();
  auto edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  j["edges"] = std::move(edges);
  return j.dump();
}

Graph graph_from_edge_list_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto p = j.at("p").get<std::size_t>();
    Graph g(p);
    for (const auto& e : j.at("edges")) {
      const auto a = e.at(0).get<Vertex>();
      const auto b = e.at(1).get<Vertex>();
      if (e.size() != 2 || a >= p || b >= p || a == b) {
        throw ParseError("edge list JSON: invalid edge");
      }
      g.add_edge(a, b);
    }
    return g;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("edge list JSON: ") + ex.what());
  }
}

}  // namespace jtmc
