#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "jtmc/graph.hpp"
#include "jtmc/samplers.hpp"

namespace jtmc {

/// One proposal of the serial chain. A parallel step with k candidates
/// becomes k records in node order; a null step becomes one rejected record.
struct SerialRecord {
  std::uint64_t step = 0;
  NodeId node = 0;
  bool null_step = false;
  bool accepted = false;
  bool graph_update = false;  // accepted and the edge set changed
};

std::vector<SerialRecord> to_serial_chain(const ChainTrace& trace);

enum class UpdateMode { GraphUpdates, JunctionUpdates };

/// rate_k = accepted-in-mode count among the first k records, divided by k.
std::vector<double> cumulative_acceptance(const std::vector<SerialRecord>& series, UpdateMode mode);

/// Per chain step: a step counts as accepted when at least one of its
/// candidates was accepted (JunctionUpdates) or the graph changed
/// (GraphUpdates).
std::vector<double> step_acceptance(const ChainTrace& trace, UpdateMode mode);

/// Final value of the cumulative series; 0 for an empty series.
double acceptance_rate(const std::vector<SerialRecord>& series, UpdateMode mode);
double step_acceptance_rate(const ChainTrace& trace, UpdateMode mode);

/// 128-bit order-independent digest of an edge set.
struct GraphDigest {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  void toggle(Vertex a, Vertex b);
  friend bool operator==(const GraphDigest&, const GraphDigest&) = default;
};
GraphDigest digest_of(const Graph& g);

struct GraphStep {
  std::uint64_t step = 0;
  std::size_t edge_count = 0;
  bool graph_update = false;
  bool junction_update = false;
  GraphDigest digest;
};

/// Graph after every step, stored as digests and flags; index k is the
/// state after the k-th record of the trace.
struct GraphChain {
  std::size_t p = 0;
  Graph initial;
  std::vector<GraphStep> states;
};

/// Replays the accepted edge changes from the first snapshot and checks the
/// replayed graph against every later snapshot and every recorded edge
/// count. Throws CorruptTrace on any disagreement.
GraphChain to_graph_chain(const ChainTrace& trace);

/// Calls `visit(k, graph)` with the graph after step record k, for k in
/// [0, steps). Stops when `visit` returns false. Throws CorruptTrace.
void replay_graphs(const ChainTrace& trace,
                   const std::function<bool(std::size_t, const Graph&)>& visit);

struct AcfResult {
  std::vector<double> values;  // lags 0..max_lag
  bool degenerate = false;     // zero variance; values beyond lag 0 are 0
};

/// Sample autocorrelation with the 1/N normalisation. Throws SeriesTooShort
/// unless x.size() > max_lag.
AcfResult autocorrelation(const std::vector<double>& x, std::size_t max_lag);

/// Fraction of states with index >= burn_in containing each edge.
/// Throws DomainError unless burn_in < number of steps.
Eigen::MatrixXd edge_posterior_matrix(const ChainTrace& trace, std::size_t burn_in);

/// Most frequent graph among states with index >= burn_in; ties go to the
/// one visited first.
Graph map_graph(const ChainTrace& trace, std::size_t burn_in);

/// Area under the ROC curve of the off-diagonal posterior entries as a
/// classifier of the edges of `truth` (ties count one half).
double edge_auc(const Eigen::MatrixXd& posterior, const Graph& truth);

std::size_t hamming_distance(const Graph& a, const Graph& b);

/// Edge count of the state after every step record.
std::vector<double> edge_count_series(const ChainTrace& trace);

/// step,log_score,n_edges,n_candidates,n_accepted,graph_update,junction_update
std::string trace_summary_csv(const ChainTrace& trace);
/// lag,acf
std::string acf_csv(const AcfResult& acf);
/// p x p decimals.
std::string matrix_csv(const Eigen::MatrixXd& m);
/// record,step,graph_rate,junction_rate over the serial chain.
std::string serial_acceptance_csv(const ChainTrace& trace);
/// step,graph_rate,junction_rate over chain steps.
std::string step_acceptance_csv(const ChainTrace& trace);

}  // namespace jtmc
