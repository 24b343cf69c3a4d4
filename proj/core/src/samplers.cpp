#include "jtmc/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "jtmc/errors.hpp"
#include "jtmc/random.hpp"
#include "jtmc/tree_gen.hpp"

namespace jtmc {

namespace {

constexpr std::uint64_t kSkeletonStream = 0x736b656c65746f6eULL;
constexpr std::uint64_t kInitialStream = 0x696e697469616cULL;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool accept_draw(double log_alpha, double u) {
  return u < std::exp(std::min(0.0, log_alpha));
}

// Likelihood plus prior ratio; -inf when scoring fails numerically.
double score_delta(ChainState& state, const GaussianEvidence& ev, const CliqueSeparatorLaw& law,
                   const MoveProposal& move) {
  try {
    return log_likelihood_ratio(ev, move) + log_prior_ratio(law, move);
  } catch (const NumericalError&) {
  } catch (const DomainError&) {
  }
  state.count_numerical_rejection();
  return kNegInf;
}

CandidateOutcome outcome_for(const Candidate& c, const MoveProposal& move) {
  CandidateOutcome out;
  out.node = c.node;
  out.anchor = c.anchor;
  out.changed = move.changed.members();
  return out;
}

void finish_record(StepRecord& rec, const ChainState& state) {
  rec.log_score = state.log_score();
  rec.edge_count = state.graph().edge_count();
  rec.clique_count = state.clique_count();
}

}  // namespace

const char* to_string(SamplerKind kind) noexcept {
  return kind == SamplerKind::SingleMove ? "single" : "parallel";
}

SamplerKind sampler_kind_from_string(const std::string& name) {
  if (name == "single") return SamplerKind::SingleMove;
  if (name == "parallel") return SamplerKind::Parallel;
  throw ConfigError("unknown sampler '" + name + "' (expected single or parallel)");
}

void ChainConfig::validate() const {
  if (iterations == 0) throw ConfigError("iterations must be positive");
  if (skeleton_period == 0) throw ConfigError("skeleton_period must be at least 1");
}

std::size_t StepRecord::accepted_count() const {
  return static_cast<std::size_t>(
      std::count_if(candidates.begin(), candidates.end(), [](const auto& c) { return c.accepted; }));
}

bool StepRecord::graph_changed() const {
  return std::any_of(candidates.begin(), candidates.end(),
                     [](const auto& c) { return c.accepted && c.graph_update(); });
}

ChainState::ChainState(JunctionTree tree, const GaussianEvidence& ev,
                       const CliqueSeparatorLaw& law)
    : tree_(std::move(tree)), graph_(g_of(tree_)) {
  if (tree_.num_vertices() != ev.p()) {
    throw ConfigError("initial junction tree has " + std::to_string(tree_.num_vertices()) +
                      " vertices but the data have " + std::to_string(ev.p()));
  }
  if (!validate_junction_property(tree_)) {
    throw ConfigError("initial junction tree violates the junction property");
  }
  rescore(ev, law);
  refresh_clique_count();
}

void ChainState::rescore(const GaussianEvidence& ev, const CliqueSeparatorLaw& law) {
  log_score_ = total_log_score(ev, law, tree_);
}

void ChainState::apply(const MoveProposal& move, double score_delta) {
  apply_move(tree_, move);
  for (Vertex u : move.changed) {
    if (move.kind == MoveKind::Add) {
      graph_.add_edge(move.vertex, u);
    } else {
      graph_.remove_edge(move.vertex, u);
    }
  }
  log_score_ += score_delta;
}

void ChainState::refresh_clique_count() { clique_count_ = count_maximal_cliques(tree_); }

StepRecord single_move_step(ChainState& state, const GaussianEvidence& ev,
                            const CliqueSeparatorLaw& law, StepKey key) {
  SplitMix64 rng(mix64(key.seed, key.step));
  const JunctionTree& tree = state.tree();
  StepRecord rec;
  rec.step = key.step;
  rec.vertex = static_cast<Vertex>(uniform_index(rng, tree.num_vertices()));
  rec.kind = coin_flip(rng) ? MoveKind::Add : MoveKind::Remove;

  const PartitionSets sets = partition_sets(tree, rec.vertex);
  const auto& forward = sets.of(rec.kind);
  if (forward.empty()) {
    finish_record(rec, state);
    return rec;
  }
  const Candidate& pick = forward[uniform_index(rng, forward.size())];
  const MoveProposal move = make_move(tree, rec.vertex, rec.kind, pick);
  const std::size_t reverse = rec.kind == MoveKind::Add ? reverse_count_add(sets, move)
                                                        : reverse_count_remove(tree, sets, move);
  CandidateOutcome out = outcome_for(pick, move);
  const double delta = score_delta(state, ev, law, move);
  out.log_alpha = reverse == 0 ? kNegInf
                               : delta + std::log(static_cast<double>(forward.size())) -
                                     std::log(static_cast<double>(reverse));
  out.accepted = accept_draw(out.log_alpha, uniform01(rng));
  if (out.accepted) {
    state.apply(move, delta);
    state.refresh_clique_count();
  }
  rec.candidates.push_back(std::move(out));
  finish_record(rec, state);
  return rec;
}

StepRecord parallel_step(ChainState& state, const GaussianEvidence& ev,
                         const CliqueSeparatorLaw& law, StepKey key) {
  SplitMix64 rng(mix64(key.seed, key.step));
  const JunctionTree& tree = state.tree();
  StepRecord rec;
  rec.step = key.step;
  rec.vertex = static_cast<Vertex>(uniform_index(rng, tree.num_vertices()));
  rec.kind = coin_flip(rng) ? MoveKind::Add : MoveKind::Remove;

  const PartitionSets sets = partition_sets(tree, rec.vertex);
  const auto& candidates = sets.of(rec.kind);
  std::vector<MoveProposal> moves;
  std::vector<double> deltas;
  moves.reserve(candidates.size());
  for (const Candidate& c : candidates) {
    moves.push_back(make_move(tree, rec.vertex, rec.kind, c));
    CandidateOutcome out = outcome_for(c, moves.back());
    deltas.push_back(score_delta(state, ev, law, moves.back()));
    out.log_alpha = deltas.back();
    SplitMix64 own(mix64(key.seed, key.step, c.node));
    out.accepted = accept_draw(out.log_alpha, uniform01(own));
    rec.candidates.push_back(std::move(out));
  }
  // Both leaves of a two-node T_v: removing both would unhouse v, so one of
  // them, chosen by a fair coin, is kept. A fixed choice would make the chain
  // reducible whenever both moves are always accepted (e.g. prior-only).
  if (rec.kind == MoveKind::Remove && sets.subtree_size == 2 && rec.candidates.size() == 2 &&
      rec.candidates[0].accepted && rec.candidates[1].accepted) {
    rec.candidates[coin_flip(rng) ? 0 : 1].accepted = false;
  }
  bool any = false;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    if (!rec.candidates[i].accepted) continue;
    state.apply(moves[i], deltas[i]);
    any = true;
  }
  if (any) state.refresh_clique_count();
  finish_record(rec, state);
  return rec;
}

void resample_skeleton_step(ChainState& state, StepKey key) {
  SplitMix64 rng(mix64(mix64(key.seed, key.step), kSkeletonStream));
  state.set_topology(SkeletonSampler::draw(state.tree().cliques(), [&](std::size_t k) {
    return static_cast<std::size_t>(uniform_index(rng, k));
  }));
}

JunctionTree default_initial_state(std::size_t p, std::uint64_t seed) {
  SplitMix64 rng(mix64(seed, kInitialStream));
  return init_no_edge(p, random_tree(p, rng));
}

namespace {

ChainTrace run_from(const ChainConfig& cfg, const GaussianEvidence& ev, const Snapshot& from,
                    const StepObserver& observer) {
  cfg.validate();
  ChainState state(from.tree, ev, cfg.prior);
  ChainTrace trace;
  trace.p = ev.p();
  trace.sampler = cfg.sampler;
  trace.seed = cfg.seed;
  trace.skeleton_period = cfg.skeleton_period;
  trace.first_step = from.step;
  trace.snapshots.push_back({from.step, state.tree(), state.log_score()});
  if (from.step < cfg.iterations) trace.steps.reserve(cfg.iterations - from.step);

  const std::size_t period = cfg.skeleton_period;
  const std::size_t snap = cfg.snapshot_interval();
  for (std::uint64_t s = from.step; s < cfg.iterations; ++s) {
    const StepKey key{cfg.seed, s};
    StepRecord rec = cfg.sampler == SamplerKind::Parallel
                         ? parallel_step(state, ev, cfg.prior, key)
                         : single_move_step(state, ev, cfg.prior, key);
    const std::uint64_t done = s + 1;
    if (done % period == 0) {
      resample_skeleton_step(state, key);
      state.rescore(ev, cfg.prior);
      rec.skeleton_resampled = true;
    }
    if (done % snap == 0) {
      state.rescore(ev, cfg.prior);
      trace.snapshots.push_back({done, state.tree(), state.log_score()});
    }
    finish_record(rec, state);
    trace.steps.push_back(std::move(rec));
    if (observer && !observer(trace.steps.back(), state)) break;
  }
  trace.numerical_rejections = state.numerical_rejections();
  return trace;
}

}  // namespace

ChainTrace run_chain(const ChainConfig& cfg, const GaussianEvidence& ev,
                     std::optional<JunctionTree> initial, const StepObserver& observer) {
  cfg.validate();
  Snapshot start;
  start.step = 0;
  start.tree = initial ? std::move(*initial) : default_initial_state(ev.p(), cfg.seed);
  return run_from(cfg, ev, start, observer);
}

ChainTrace resume_chain(const ChainConfig& cfg, const GaussianEvidence& ev, const Snapshot& from,
                        const StepObserver& observer) {
  if (from.step > cfg.iterations) {
    throw ConfigError("snapshot step lies beyond the requested iterations");
  }
  return run_from(cfg, ev, from, observer);
}

// ---------------------------------------------------------------------------
// NDJSON

namespace {

using nlohmann::json;

json double_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double read_double(const json& j) {
  return j.is_null() ? kNegInf : j.get<double>();
}

json step_to_json(const StepRecord& r) {
  json c = json::array();
  for (const auto& o : r.candidates) {
    c.push_back({o.node, o.anchor, o.accepted ? 1 : 0, double_or_null(o.log_alpha), o.changed});
  }
  json j;
  j["type"] = "step";
  j["t"] = r.step;
  j["v"] = r.vertex;
  j["kind"] = to_string(r.kind);
  j["c"] = std::move(c);
  j["score"] = double_or_null(r.log_score);
  j["edges"] = r.edge_count;
  j["cliques"] = r.clique_count;
  j["skel"] = r.skeleton_resampled;
  return j;
}

StepRecord step_from_json(const json& j) {
  StepRecord r;
  r.step = j.at("t").get<std::uint64_t>();
  r.vertex = j.at("v").get<Vertex>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind != "add" && kind != "remove") throw CorruptTrace("unknown move kind '" + kind + "'");
  r.kind = kind == "add" ? MoveKind::Add : MoveKind::Remove;
  for (const auto& c : j.at("c")) {
    CandidateOutcome o;
    o.node = c.at(0).get<NodeId>();
    o.anchor = c.at(1).get<NodeId>();
    o.accepted = c.at(2).get<int>() != 0;
    o.log_alpha = read_double(c.at(3));
    o.changed = c.at(4).get<std::vector<Vertex>>();
    r.candidates.push_back(std::move(o));
  }
  r.log_score = read_double(j.at("score"));
  r.edge_count = j.at("edges").get<std::size_t>();
  r.clique_count = j.at("cliques").get<std::size_t>();
  r.skeleton_resampled = j.at("skel").get<bool>();
  return r;
}

json snapshot_json(const Snapshot& s) {
  json j;
  j["type"] = "snapshot";
  j["step"] = s.step;
  j["log_score"] = double_or_null(s.log_score);
  j["tree"] = json::parse(to_json(s.tree));
  return j;
}

Snapshot snapshot_from(const json& j) {
  Snapshot s;
  s.step = j.at("step").get<std::uint64_t>();
  s.log_score = read_double(j.at("log_score"));
  s.tree = junction_tree_from_json(j.at("tree").dump());
  return s;
}

}  // namespace

std::string to_ndjson(const ChainTrace& trace) {
  std::string out;
  json h;
  h["type"] = "header";
  h["format"] = 1;
  h["p"] = trace.p;
  h["sampler"] = to_string(trace.sampler);
  h["seed"] = trace.seed;
  h["skeleton_period"] = trace.skeleton_period;
  h["first_step"] = trace.first_step;
  out += h.dump();
  out += '\n';
  // Snapshots are written just after the step that completes them.
  std::size_t next_snap = 0;
  auto flush_snapshots = [&](std::uint64_t done) {
    while (next_snap < trace.snapshots.size() && trace.snapshots[next_snap].step <= done) {
      out += snapshot_json(trace.snapshots[next_snap++]).dump();
      out += '\n';
    }
  };
  flush_snapshots(trace.first_step);
  for (const auto& r : trace.steps) {
    out += step_to_json(r).dump();
    out += '\n';
    flush_snapshots(r.step + 1);
  }
  flush_snapshots(std::numeric_limits<std::uint64_t>::max());
  json f;
  f["type"] = "footer";
  f["numerical_rejections"] = trace.numerical_rejections;
  out += f.dump();
  out += '\n';
  return out;
}

ChainTrace trace_from_ndjson(const std::string& text) {
  ChainTrace trace;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "header") {
        trace.p = j.at("p").get<std::size_t>();
        trace.sampler = sampler_kind_from_string(j.at("sampler").get<std::string>());
        trace.seed = j.at("seed").get<std::uint64_t>();
        trace.skeleton_period = j.at("skeleton_period").get<std::size_t>();
        trace.first_step = j.at("first_step").get<std::uint64_t>();
        have_header = true;
      } else if (!have_header) {
        throw CorruptTrace("trace does not start with a header");
      } else if (type == "step") {
        trace.steps.push_back(step_from_json(j));
      } else if (type == "snapshot") {
        trace.snapshots.push_back(snapshot_from(j));
      } else if (type == "footer") {
        trace.numerical_rejections = j.at("numerical_rejections").get<std::size_t>();
      } else {
        throw CorruptTrace("unknown record type '" + type + "'");
      }
    }
  } catch (const json::exception& ex) {
    throw CorruptTrace("trace line " + std::to_string(line_no) + ": " + ex.what());
  } catch (const ConfigError& ex) {
    throw CorruptTrace("trace line " + std::to_string(line_no) + ": " + ex.what());
  } catch (const ParseError& ex) {
    throw CorruptTrace("trace line " + std::to_string(line_no) + ": " + ex.what());
  } catch (const NotATree& ex) {
    throw CorruptTrace("trace line " + std::to_string(line_no) + ": " + ex.what());
  }
  if (!have_header) throw CorruptTrace("empty trace");
  return trace;
}

std::string snapshot_to_json(const Snapshot& snapshot) { return snapshot_json(snapshot).dump(); }

Snapshot snapshot_from_json(const std::string& text) {
  try {
    return snapshot_from(json::parse(text));
  } catch (const json::exception& ex) {
    throw CorruptTrace(std::string("snapshot: ") + ex.what());
  }
}

}  // namespace jtmc
