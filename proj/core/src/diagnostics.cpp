#include "jtmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "jtmc/errors.hpp"
#include "jtmc/random.hpp"

namespace jtmc {

std::vector<SerialRecord> to_serial_chain(const ChainTrace& trace) {
  std::vector<SerialRecord> out;
  out.reserve(trace.steps.size());
  for (const auto& r : trace.steps) {
    if (r.candidates.empty()) {
      out.push_back({r.step, 0, true, false, false});
      continue;
    }
    for (const auto& c : r.candidates) {
      out.push_back({r.step, c.node, false, c.accepted, c.accepted && c.graph_update()});
    }
  }
  return out;
}

namespace {

bool counts(const SerialRecord& r, UpdateMode mode) {
  return mode == UpdateMode::GraphUpdates ? r.graph_update : r.accepted;
}

bool step_counts(const StepRecord& r, UpdateMode mode) {
  return mode == UpdateMode::GraphUpdates ? r.graph_changed() : r.accepted_count() > 0;
}

}  // namespace

std::vector<double> cumulative_acceptance(const std::vector<SerialRecord>& series,
                                          UpdateMode mode) {
  std::vector<double> out;
  out.reserve(series.size());
  std::size_t hits = 0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (counts(series[k], mode)) ++hits;
    out.push_back(static_cast<double>(hits) / static_cast<double>(k + 1));
  }
  return out;
}

std::vector<double> step_acceptance(const ChainTrace& trace, UpdateMode mode) {
  std::vector<double> out;
  out.reserve(trace.steps.size());
  std::size_t hits = 0;
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    if (step_counts(trace.steps[k], mode)) ++hits;
    out.push_back(static_cast<double>(hits) / static_cast<double>(k + 1));
  }
  return out;
}

double acceptance_rate(const std::vector<SerialRecord>& series, UpdateMode mode) {
  if (series.empty()) return 0.0;
  const auto hits = std::count_if(series.begin(), series.end(),
                                  [&](const SerialRecord& r) { return counts(r, mode); });
  return static_cast<double>(hits) / static_cast<double>(series.size());
}

double step_acceptance_rate(const ChainTrace& trace, UpdateMode mode) {
  if (trace.steps.empty()) return 0.0;
  const auto hits = std::count_if(trace.steps.begin(), trace.steps.end(),
                                  [&](const StepRecord& r) { return step_counts(r, mode); });
  return static_cast<double>(hits) / static_cast<double>(trace.steps.size());
}

void GraphDigest::toggle(Vertex a, Vertex b) {
  const Vertex u = std::min(a, b);
  const Vertex v = std::max(a, b);
  const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
  lo ^= mix64(key, 0x5a6f62726973744cULL);
  hi ^= mix64(key, 0x5a6f627269737448ULL);
}

GraphDigest digest_of(const Graph& g) {
  GraphDigest d;
  for (const auto& e : g.edges()) d.toggle(e.u, e.v);
  return d;
}

namespace {

struct DigestHash {
  std::size_t operator()(const GraphDigest& d) const noexcept {
    return static_cast<std::size_t>(d.lo ^ (d.hi * 0x9e3779b97f4a7c15ULL));
  }
};

[[noreturn]] void corrupt(std::uint64_t step, const std::string& why) {
  throw CorruptTrace("step " + std::to_string(step) + ": " + why);
}

// Replays the edge changes of every record. `on_toggle(k, a, b, added)` sees
// each change of record k; `after(k, graph, digest)` sees each state.
template <class OnToggle, class After>
void replay(const ChainTrace& trace, OnToggle&& on_toggle, After&& after) {
  if (trace.snapshots.empty()) throw CorruptTrace("trace has no starting snapshot");
  const auto& first = trace.snapshots.front();
  if (first.step != trace.first_step) throw CorruptTrace("first snapshot is not at the first step");
  if (first.tree.num_vertices() != trace.p) throw CorruptTrace("snapshot vertex count mismatch");
  Graph g = g_of(first.tree);
  GraphDigest d = digest_of(g);
  std::size_t next_snap = 1;
  std::uint64_t expected = trace.first_step;
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const StepRecord& r = trace.steps[k];
    if (r.step != expected) corrupt(r.step, "steps out of order");
    ++expected;
    if (r.vertex >= trace.p) corrupt(r.step, "vertex out of range");
    for (const auto& c : r.candidates) {
      if (!c.accepted) continue;
      for (Vertex u : c.changed) {
        if (u >= trace.p || u == r.vertex) corrupt(r.step, "bad edge endpoint");
        const bool ok = r.kind == MoveKind::Add ? g.add_edge(r.vertex, u) : g.remove_edge(r.vertex, u);
        if (!ok) corrupt(r.step, "edge change does not match the replayed graph");
        d.toggle(r.vertex, u);
        on_toggle(k, r.vertex, u, r.kind == MoveKind::Add);
      }
    }
    if (g.edge_count() != r.edge_count) corrupt(r.step, "edge count disagrees with replay");
    while (next_snap < trace.snapshots.size() && trace.snapshots[next_snap].step <= r.step + 1) {
      const auto& s = trace.snapshots[next_snap++];
      if (s.step == r.step + 1 && !(g_of(s.tree) == g)) {
        corrupt(r.step, "replayed graph disagrees with snapshot");
      }
    }
    if (!after(k, static_cast<const Graph&>(g), d)) return;
  }
}

}  // namespace

GraphChain to_graph_chain(const ChainTrace& trace) {
  GraphChain chain;
  chain.p = trace.p;
  if (!trace.snapshots.empty()) chain.initial = g_of(trace.snapshots.front().tree);
  chain.states.reserve(trace.steps.size());
  replay(
      trace, [](std::size_t, Vertex, Vertex, bool) {},
      [&](std::size_t k, const Graph& g, const GraphDigest& d) {
        const StepRecord& r = trace.steps[k];
        chain.states.push_back({r.step, g.edge_count(), r.graph_changed(), r.accepted_count() > 0, d});
        return true;
      });
  return chain;
}

void replay_graphs(const ChainTrace& trace,
                   const std::function<bool(std::size_t, const Graph&)>& visit) {
  replay(
      trace, [](std::size_t, Vertex, Vertex, bool) {},
      [&](std::size_t k, const Graph& g, const GraphDigest&) { return visit(k, g); });
}

AcfResult autocorrelation(const std::vector<double>& x, std::size_t max_lag) {
  if (x.size() <= max_lag) {
    throw SeriesTooShort("autocorrelation: series of length " + std::to_string(x.size()) +
                         " is too short for lag " + std::to_string(max_lag));
  }
  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> centred(n);
  for (std::size_t i = 0; i < n; ++i) centred[i] = x[i] - mean;
  double c0 = 0.0;
  for (double v : centred) c0 += v * v;
  AcfResult out;
  out.values.assign(max_lag + 1, 0.0);
  out.values[0] = 1.0;
  if (c0 <= 0.0) {
    out.degenerate = true;
    return out;
  }
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double c = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) c += centred[i] * centred[i + lag];
    out.values[lag] = c / c0;
  }
  return out;
}

Eigen::MatrixXd edge_posterior_matrix(const ChainTrace& trace, std::size_t burn_in) {
  const std::size_t total = trace.steps.size();
  if (burn_in >= total) {
    throw DomainError("burn-in " + std::to_string(burn_in) + " must be below the " +
                      std::to_string(total) + " recorded steps");
  }
  const auto p = static_cast<Eigen::Index>(trace.p);
  // Each edge accumulates the number of kept states it appears in, via the
  // index at which it last appeared.
  Eigen::MatrixXd present_since = Eigen::MatrixXd::Constant(p, p, -1.0);
  Eigen::MatrixXd count = Eigen::MatrixXd::Zero(p, p);
  const auto start = static_cast<double>(burn_in);
  auto close = [&](Eigen::Index a, Eigen::Index b, double end) {
    const double from = std::max(present_since(a, b), start);
    if (end > from) count(a, b) += end - from;
    present_since(a, b) = -1.0;
  };
  const Graph initial = g_of(trace.snapshots.empty() ? JunctionTree() : trace.snapshots.front().tree);
  if (!trace.snapshots.empty()) {
    for (const auto& e : initial.edges()) present_since(e.u, e.v) = 0.0;
  }
  replay(
      trace,
      [&](std::size_t k, Vertex a, Vertex b, bool added) {
        const Eigen::Index u = std::min(a, b);
        const Eigen::Index v = std::max(a, b);
        if (added) {
          present_since(u, v) = static_cast<double>(k);
        } else {
          close(u, v, static_cast<double>(k));
        }
      },
      [](std::size_t, const Graph&, const GraphDigest&) { return true; });
  for (Eigen::Index u = 0; u < p; ++u) {
    for (Eigen::Index v = u + 1; v < p; ++v) {
      if (present_since(u, v) >= 0.0) close(u, v, static_cast<double>(total));
    }
  }
  const double kept = static_cast<double>(total - burn_in);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index u = 0; u < p; ++u) {
    for (Eigen::Index v = u + 1; v < p; ++v) {
      out(u, v) = out(v, u) = count(u, v) / kept;
    }
  }
  return out;
}

Graph map_graph(const ChainTrace& trace, std::size_t burn_in) {
  const std::size_t total = trace.steps.size();
  if (burn_in >= total) {
    throw DomainError("burn-in " + std::to_string(burn_in) + " must be below the " +
                      std::to_string(total) + " recorded steps");
  }
  struct Tally {
    std::size_t count = 0;
    std::size_t first = 0;
  };
  std::unordered_map<GraphDigest, Tally, DigestHash> tallies;
  replay(
      trace, [](std::size_t, Vertex, Vertex, bool) {},
      [&](std::size_t k, const Graph&, const GraphDigest& d) {
        if (k >= burn_in) {
          auto [it, fresh] = tallies.try_emplace(d, Tally{0, k});
          ++it->second.count;
        }
        return true;
      });
  std::size_t best_index = total;
  std::size_t best_count = 0;
  for (const auto& [d, t] : tallies) {
    if (t.count > best_count || (t.count == best_count && t.first < best_index)) {
      best_count = t.count;
      best_index = t.first;
    }
  }
  Graph result;
  replay_graphs(trace, [&](std::size_t k, const Graph& g) {
    if (k < best_index) return true;
    result = g;
    return false;
  });
  return result;
}

double edge_auc(const Eigen::MatrixXd& posterior, const Graph& truth) {
  const auto p = static_cast<Eigen::Index>(truth.num_vertices());
  if (posterior.rows() != p || posterior.cols() != p) {
    throw DomainError("edge_auc: posterior and truth differ in size");
  }
  std::vector<std::pair<double, bool>> scored;
  for (Eigen::Index u = 0; u < p; ++u) {
    for (Eigen::Index v = u + 1; v < p; ++v) {
      scored.emplace_back(posterior(u, v),
                          truth.adjacent(static_cast<Vertex>(u), static_cast<Vertex>(v)));
    }
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Mann-Whitney U with mid-ranks for ties.
  double rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < scored.size();) {
    std::size_t j = i;
    while (j < scored.size() && scored[j].first == scored[i].first) ++j;
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (scored[k].second) {
        rank_sum += mid;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = scored.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw DomainError("edge_auc: truth must have both edges and non-edges");
  }
  const double np = static_cast<double>(positives);
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(negatives));
}

std::size_t hamming_distance(const Graph& a, const Graph& b) {
  if (a.num_vertices() != b.num_vertices()) {
    throw DomainError("hamming_distance: graphs differ in size");
  }
  std::size_t d = 0;
  for (Vertex v = 0; v < a.num_vertices(); ++v) {
    d += (a.neighbours(v) - b.neighbours(v)).count() + (b.neighbours(v) - a.neighbours(v)).count();
  }
  return d / 2;
}

std::vector<double> edge_count_series(const ChainTrace& trace) {
  std::vector<double> out;
  out.reserve(trace.steps.size());
  for (const auto& r : trace.steps) out.push_back(static_cast<double>(r.edge_count));
  return out;
}

std::string trace_summary_csv(const ChainTrace& trace) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "step,log_score,n_edges,n_candidates,n_accepted,graph_update,junction_update\n";
  for (const auto& r : trace.steps) {
    const std::size_t acc = r.accepted_count();
    out << r.step << ',' << r.log_score << ',' << r.edge_count << ',' << r.candidates.size() << ','
        << acc << ',' << (r.graph_changed() ? 1 : 0) << ',' << (acc > 0 ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string acf_csv(const AcfResult& acf) {
  std::ostringstream out;
  out << std::setprecision(17) << "lag,acf\n";
  for (std::size_t k = 0; k < acf.values.size(); ++k) out << k << ',' << acf.values[k] << '\n';
  return out.str();
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  return out.str();
}

std::string serial_acceptance_csv(const ChainTrace& trace) {
  const auto serial = to_serial_chain(trace);
  const auto g = cumulative_acceptance(serial, UpdateMode::GraphUpdates);
  const auto j = cumulative_acceptance(serial, UpdateMode::JunctionUpdates);
  std::ostringstream out;
  out << std::setprecision(17) << "record,step,graph_rate,junction_rate\n";
  for (std::size_t k = 0; k < serial.size(); ++k) {
    out << k << ',' << serial[k].step << ',' << g[k] << ',' << j[k] << '\n';
  }
  return out.str();
}

std::string step_acceptance_csv(const ChainTrace& trace) {
  const auto g = step_acceptance(trace, UpdateMode::GraphUpdates);
  const auto j = step_acceptance(trace, UpdateMode::JunctionUpdates);
  std::ostringstream out;
  out << std::setprecision(17) << "step,graph_rate,junction_rate\n";
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    out << trace.steps[k].step << ',' << g[k] << ',' << j[k] << '\n';
  }
  return out.str();
}

}  // namespace jtmc
