#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jtmc/ggm.hpp"
#include "jtmc/graph.hpp"
#include "jtmc/junction_tree.hpp"
#include "jtmc/perturbation.hpp"
#include "jtmc/priors.hpp"

namespace jtmc {

enum class SamplerKind { SingleMove, Parallel };

const char* to_string(SamplerKind kind) noexcept;
/// Accepts "single" and "parallel". Throws ConfigError.
SamplerKind sampler_kind_from_string(const std::string& name);

struct ChainConfig {
  std::size_t iterations = 0;
  SamplerKind sampler = SamplerKind::Parallel;
  std::size_t skeleton_period = 100;
  CliqueSeparatorLaw prior = CliqueSeparatorLaw::uniform();
  std::uint64_t seed = 0;
  std::size_t burn_in = 0;
  /// Steps between full-state snapshots; 0 means 10 * skeleton_period.
  std::size_t snapshot_every = 0;

  std::size_t snapshot_interval() const {
    return snapshot_every != 0 ? snapshot_every : 10 * skeleton_period;
  }
  /// Throws ConfigError.
  void validate() const;
};

struct CandidateOutcome {
  NodeId node = 0;
  NodeId anchor = 0;
  bool accepted = false;
  /// -infinity when scoring failed numerically.
  double log_alpha = 0.0;
  /// u such that edge (v, u) was (or would have been) toggled.
  std::vector<Vertex> changed;

  bool graph_update() const { return !changed.empty(); }
};

struct StepRecord {
  std::uint64_t step = 0;
  Vertex vertex = 0;
  MoveKind kind = MoveKind::Add;
  /// Sorted by node. Empty for a null step.
  std::vector<CandidateOutcome> candidates;
  double log_score = 0.0;
  std::size_t edge_count = 0;
  std::size_t clique_count = 0;
  bool skeleton_resampled = false;

  std::size_t accepted_count() const;
  bool graph_changed() const;
};

struct Snapshot {
  std::uint64_t step = 0;  // number of steps completed when taken
  JunctionTree tree;
  double log_score = 0.0;
};

struct ChainTrace {
  std::size_t p = 0;
  SamplerKind sampler = SamplerKind::Parallel;
  std::uint64_t seed = 0;
  std::size_t skeleton_period = 100;
  std::uint64_t first_step = 0;
  std::vector<StepRecord> steps;
  /// The first snapshot is the starting state.
  std::vector<Snapshot> snapshots;
  std::size_t numerical_rejections = 0;
};

/// Mutable chain state: an expanded junction tree with its graph, total
/// log score and maximal clique count kept in step.
class ChainState {
 public:
  ChainState(JunctionTree tree, const GaussianEvidence& ev, const CliqueSeparatorLaw& law);

  const JunctionTree& tree() const noexcept { return tree_; }
  const Graph& graph() const noexcept { return graph_; }
  double log_score() const noexcept { return log_score_; }
  std::size_t clique_count() const noexcept { return clique_count_; }
  std::size_t numerical_rejections() const noexcept { return numerical_rejections_; }

  /// Recompute the score from scratch.
  void rescore(const GaussianEvidence& ev, const CliqueSeparatorLaw& law);

  /// Applies a move and adds `score_delta` to the running score.
  void apply(const MoveProposal& move, double score_delta);
  void refresh_clique_count();
  void set_topology(const Tree& topology) { tree_.set_topology(topology); }
  void count_numerical_rejection() { ++numerical_rejections_; }

 private:
  JunctionTree tree_;
  Graph graph_;
  double log_score_ = 0.0;
  std::size_t clique_count_ = 0;
  std::size_t numerical_rejections_ = 0;
};

/// Identifies the random streams of one chain step.
struct StepKey {
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
};

/// One reversible proposal: v and the move kind uniform, then one clique of
/// the relevant partition set uniform, accepted with
/// log-likelihood ratio + log prior ratio + log|forward set| - log|reverse set|.
StepRecord single_move_step(ChainState& state, const GaussianEvidence& ev,
                            const CliqueSeparatorLaw& law, StepKey key);

/// Every clique of the relevant partition set is accepted or rejected on its
/// own likelihood and prior ratio; the accepted updates are applied together.
/// Each candidate's uniform is keyed by (seed, step, node). If v would lose
/// both nodes of a two-node T_v, only the lower node is updated.
StepRecord parallel_step(ChainState& state, const GaussianEvidence& ev,
                         const CliqueSeparatorLaw& law, StepKey key);

/// Replace the skeleton by a uniform draw from the trees valid for the
/// current cliques, using the stream keyed by (seed, step).
void resample_skeleton_step(ChainState& state, StepKey key);

/// Called after each step; return false to stop early.
using StepObserver = std::function<bool(const StepRecord&, const ChainState&)>;

/// Runs steps [start, cfg.iterations). Without `start` the chain begins at
/// step 0 from `initial`, or from init_no_edge on a random skeleton. A
/// resumed chain produces the same records as the uninterrupted one.
ChainTrace run_chain(const ChainConfig& cfg, const GaussianEvidence& ev,
                     std::optional<JunctionTree> initial = std::nullopt,
                     const StepObserver& observer = {});
ChainTrace resume_chain(const ChainConfig& cfg, const GaussianEvidence& ev, const Snapshot& from,
                        const StepObserver& observer = {});

/// Starting state used when none is given: init_no_edge(p, random_tree(p))
/// with the skeleton drawn from the seed.
JunctionTree default_initial_state(std::size_t p, std::uint64_t seed);

/// Newline-delimited JSON: a header line, then step and snapshot lines in
/// chain order. Throws CorruptTrace when reading malformed input.
std::string to_ndjson(const ChainTrace& trace);
ChainTrace trace_from_ndjson(const std::string& text);

std::string snapshot_to_json(const Snapshot& snapshot);
Snapshot snapshot_from_json(const std::string& text);

}  // namespace jtmc
