#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "jtmc/diagnostics.hpp"
#include "jtmc/errors.hpp"
#include "jtmc/ggm.hpp"
#include "jtmc/graph.hpp"
#include "jtmc/samplers.hpp"
#include "jtmc/tree_gen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace jtmc::cli {

namespace {

constexpr std::uint64_t kGraphStream = 0x67726170680aULL;
constexpr std::uint64_t kDataStream = 0x646174610aULL;

// Raised for bad flags or flag combinations detected after parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write " + path.string());
  out << content;
  if (!out) throw ParseError("failed writing " + path.string());
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ParseError("cannot create directory " + dir.string() + ": " + ec.message());
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::size_t p = 0;
  std::size_t max_lag = 5;
  double rho = 0.9;
  double sigma2 = 1.0;
  std::size_t n = 100;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  if (a.p == 0) throw UsageError("--p must be positive");
  if (a.max_lag == 0) throw UsageError("--max-lag must be positive");
  SplitMix64 graph_rng(mix64(a.seed, kGraphStream));
  const Graph g = random_ar_graph(a.p, a.max_lag, graph_rng);
  SplitMix64 data_rng(mix64(a.seed, kDataStream));
  const Eigen::MatrixXd data = simulate_intraclass(g, {a.sigma2, a.rho}, a.n, data_rng);

  const fs::path dir(a.out);
  make_dir(dir);
  write_file(dir / "graph.json", to_edge_list_json(g) + "\n");
  write_file(dir / "graph.csv", to_adjacency_csv(g));
  write_file(dir / "data.csv", to_data_csv(data));
  json m;
  m["command"] = "simulate";
  m["seed"] = a.seed;
  m["p"] = a.p;
  m["max_lag"] = a.max_lag;
  m["sigma2"] = a.sigma2;
  m["rho"] = a.rho;
  m["n"] = a.n;
  m["edges"] = g.edge_count();
  write_file(dir / "manifest.json", m.dump(2) + "\n");
  out << "simulated p=" << a.p << " n=" << a.n << " edges=" << g.edge_count() << " -> "
      << dir.string() << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// sample

struct SampleArgs {
  std::string data;
  bool header = false;
  std::string out;
  std::string sampler = "parallel";
  std::size_t iters = 500000;
  std::string prior = "uniform";
  double alpha = 2.0;
  double beta = 4.0;
  double delta = 5.0;
  std::size_t skeleton_period = 100;
  std::uint64_t seed = 0;
  std::size_t snapshot_every = 0;
  std::size_t chains = 1;
  std::string config;
  std::string resume;
  std::string initial;
};

CliqueSeparatorLaw make_law(const SampleArgs& a) {
  if (a.prior == "uniform") return CliqueSeparatorLaw::uniform();
  if (a.prior == "expfam") return CliqueSeparatorLaw::exp_family(a.alpha, a.beta);
  throw ConfigError("unknown prior '" + a.prior + "' (expected uniform or expfam)");
}

// Values from the JSON config apply only to flags absent from the command line.
void apply_config(CLI::App& cmd, SampleArgs& a) {
  if (a.config.empty()) return;
  json cfg;
  try {
    cfg = json::parse(read_file(a.config));
  } catch (const json::exception& ex) {
    throw ConfigError("config " + a.config + ": " + ex.what());
  }
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  auto take = [&](const char* key, auto& field) {
    if (!cfg.contains(key)) return;
    if (cmd.get_option(std::string("--") + key)->count() > 0) return;
    try {
      field = cfg.at(key).get<std::decay_t<decltype(field)>>();
    } catch (const json::exception& ex) {
      throw ConfigError(std::string("config key '") + key + "': " + ex.what());
    }
  };
  for (const auto& [key, value] : cfg.items()) {
    static const char* known[] = {"data", "header", "out", "sampler", "iters", "prior", "alpha",
                                  "beta", "delta", "skeleton-period", "seed", "snapshot-every",
                                  "chains", "resume", "initial"};
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* k) { return key == k; }) == std::end(known)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  take("data", a.data);
  take("header", a.header);
  take("out", a.out);
  take("sampler", a.sampler);
  take("iters", a.iters);
  take("prior", a.prior);
  take("alpha", a.alpha);
  take("beta", a.beta);
  take("delta", a.delta);
  take("skeleton-period", a.skeleton_period);
  take("seed", a.seed);
  take("snapshot-every", a.snapshot_every);
  take("chains", a.chains);
  take("resume", a.resume);
  take("initial", a.initial);
}

json sample_manifest(const SampleArgs& a, const ChainConfig& cfg, const ChainTrace& trace,
                     std::size_t n, std::size_t p) {
  json m;
  m["command"] = "sample";
  m["data"] = a.data;
  m["header"] = a.header;
  m["sampler"] = to_string(cfg.sampler);
  m["iters"] = cfg.iterations;
  m["prior"] = a.prior;
  m["alpha"] = a.alpha;
  m["beta"] = a.beta;
  m["delta"] = a.delta;
  m["skeleton_period"] = cfg.skeleton_period;
  m["snapshot_every"] = cfg.snapshot_interval();
  m["seed"] = cfg.seed;
  m["n"] = n;
  m["p"] = p;
  m["first_step"] = trace.first_step;
  m["steps_recorded"] = trace.steps.size();
  m["numerical_rejections"] = trace.numerical_rejections;
  if (!a.resume.empty()) m["resumed_from"] = a.resume;
  if (!a.initial.empty()) m["initial"] = a.initial;
  return m;
}

void write_chain(const fs::path& dir, const SampleArgs& a, const ChainConfig& cfg,
                 const ChainTrace& trace, std::size_t n, std::size_t p) {
  make_dir(dir / "snapshots");
  write_file(dir / "trace.ndjson", to_ndjson(trace));
  for (const auto& s : trace.snapshots) {
    write_file(dir / "snapshots" / ("step_" + std::to_string(s.step) + ".json"),
               snapshot_to_json(s) + "\n");
  }
  write_file(dir / "manifest.json", sample_manifest(a, cfg, trace, n, p).dump(2) + "\n");
}

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  if (a.data.empty()) throw UsageError("--data is required");
  if (a.out.empty()) throw UsageError("--out is required");
  if (a.chains == 0) throw ConfigError("--chains must be at least 1");
  if (a.chains > 1 && !a.resume.empty()) throw UsageError("--resume runs a single chain");

  ChainConfig base;
  base.iterations = a.iters;
  base.sampler = sampler_kind_from_string(a.sampler);
  base.skeleton_period = a.skeleton_period;
  base.prior = make_law(a);
  base.seed = a.seed;
  base.snapshot_every = a.snapshot_every;
  base.validate();
  if (!(a.delta > 0.0)) throw ConfigError("--delta must be positive");

  const Eigen::MatrixXd data = read_data_csv(read_file(a.data), a.header);
  const GaussianEvidence ev(data, a.delta);
  const auto n = static_cast<std::size_t>(data.rows());

  std::optional<JunctionTree> initial;
  if (!a.initial.empty()) initial = junction_tree_from_json(read_file(a.initial));
  std::optional<Snapshot> resume;
  if (!a.resume.empty()) resume = snapshot_from_json(read_file(a.resume));

  const fs::path root(a.out);
  make_dir(root);
  if (a.chains == 1) {
    const ChainTrace trace =
        resume ? resume_chain(base, ev, *resume) : run_chain(base, ev, initial);
    write_chain(root, a, base, trace, n, ev.p());
    out << "sampled " << trace.steps.size() << " steps -> " << root.string() << "\n";
    return kOk;
  }

  std::vector<ChainTrace> traces(a.chains);
  std::vector<ChainConfig> configs(a.chains, base);
  std::vector<std::exception_ptr> errors(a.chains);
  {
    std::vector<std::jthread> workers;
    for (std::size_t c = 0; c < a.chains; ++c) {
      configs[c].seed = a.seed + c;
      workers.emplace_back([&, c] {
        try {
          traces[c] = run_chain(configs[c], ev, initial);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::size_t c = 0; c < a.chains; ++c) {
    write_chain(root / ("chain_" + std::to_string(c)), a, configs[c], traces[c], n, ev.p());
  }
  out << "sampled " << a.chains << " chains of " << a.iters << " steps -> " << root.string()
      << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// diagnose

struct DiagnoseArgs {
  std::string trace;
  std::string out;
  std::size_t burn_in = 0;
  std::size_t max_lag = 100;
  std::string truth;
};

int cmd_diagnose(const DiagnoseArgs& a, std::ostream& out) {
  const ChainTrace trace = trace_from_ndjson(read_file(a.trace));
  if (a.burn_in >= trace.steps.size()) {
    throw UsageError("--burn-in must be below the number of recorded steps (" +
                     std::to_string(trace.steps.size()) + ")");
  }
  const GraphChain chain = to_graph_chain(trace);  // validates the replay
  const auto edges = edge_count_series(trace);
  const std::vector<double> kept(edges.begin() + static_cast<std::ptrdiff_t>(a.burn_in),
                                 edges.end());
  const AcfResult acf = autocorrelation(kept, std::min(a.max_lag, kept.size() - 1));
  const Eigen::MatrixXd posterior = edge_posterior_matrix(trace, a.burn_in);
  const Graph map = map_graph(trace, a.burn_in);
  const auto serial = to_serial_chain(trace);

  const fs::path dir(a.out);
  make_dir(dir);
  write_file(dir / "trace_summary.csv", trace_summary_csv(trace));
  write_file(dir / "acf.csv", acf_csv(acf));
  write_file(dir / "edge_posterior.csv", matrix_csv(posterior));
  write_file(dir / "map_graph.json", to_edge_list_json(map) + "\n");
  write_file(dir / "acceptance_serial.csv", serial_acceptance_csv(trace));
  write_file(dir / "acceptance_steps.csv", step_acceptance_csv(trace));

  json s;
  s["steps"] = trace.steps.size();
  s["serial_records"] = serial.size();
  s["burn_in"] = a.burn_in;
  s["serial_graph_rate"] = acceptance_rate(serial, UpdateMode::GraphUpdates);
  s["serial_junction_rate"] = acceptance_rate(serial, UpdateMode::JunctionUpdates);
  s["step_graph_rate"] = step_acceptance_rate(trace, UpdateMode::GraphUpdates);
  s["step_junction_rate"] = step_acceptance_rate(trace, UpdateMode::JunctionUpdates);
  s["acf_degenerate"] = acf.degenerate;
  s["map_edges"] = map.edge_count();
  s["numerical_rejections"] = trace.numerical_rejections;
  if (!a.truth.empty()) {
    const Graph truth = graph_from_edge_list_json(read_file(a.truth));
    if (truth.num_vertices() != trace.p) throw ParseError("--truth graph has the wrong size");
    s["truth_edges"] = truth.edge_count();
    s["map_hamming"] = hamming_distance(map, truth);
    if (truth.edge_count() > 0 && truth.edge_count() < trace.p * (trace.p - 1) / 2) {
      s["edge_auc"] = edge_auc(posterior, truth);
    }
  }
  write_file(dir / "summary.json", s.dump(2) + "\n");
  out << "diagnosed " << chain.states.size() << " states -> " << dir.string() << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian structure learning of decomposable graphs on junction trees", "jtmc"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "simulate an AR graph and Gaussian data");
  simulate->add_option("--p", sim.p, "number of vertices")->required();
  simulate->add_option("--max-lag", sim.max_lag, "largest band lag")->capture_default_str();
  simulate->add_option("--rho", sim.rho, "intraclass correlation")->capture_default_str();
  simulate->add_option("--sigma2", sim.sigma2, "variance")->capture_default_str();
  simulate->add_option("--n", sim.n, "number of samples")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "random seed")->capture_default_str();
  simulate->add_option("--out", sim.out, "output directory")->required();

  SampleArgs smp;
  auto* sample = app.add_subcommand("sample", "run a junction tree chain on a data set");
  sample->add_option("--data", smp.data, "data CSV, n rows by p columns");
  sample->add_flag("--header", smp.header, "skip the first line of the data CSV");
  sample->add_option("--out", smp.out, "output directory");
  sample->add_option("--sampler", smp.sampler, "parallel or single")->capture_default_str();
  sample->add_option("--iters", smp.iters, "number of chain steps")->capture_default_str();
  sample->add_option("--prior", smp.prior, "uniform or expfam")->capture_default_str();
  sample->add_option("--alpha", smp.alpha, "expfam clique exponent")->capture_default_str();
  sample->add_option("--beta", smp.beta, "expfam separator exponent")->capture_default_str();
  sample->add_option("--delta", smp.delta, "hyper-Wishart degrees of freedom")->capture_default_str();
  sample->add_option("--skeleton-period", smp.skeleton_period, "steps between skeleton draws")
      ->capture_default_str();
  sample->add_option("--seed", smp.seed, "random seed")->capture_default_str();
  sample->add_option("--snapshot-every", smp.snapshot_every,
                     "steps between snapshots (0: ten skeleton periods)")
      ->capture_default_str();
  sample->add_option("--chains", smp.chains, "independent chains, seeds seed..seed+k-1")
      ->capture_default_str();
  sample->add_option("--config", smp.config, "JSON file of defaults; flags take precedence");
  sample->add_option("--resume", smp.resume, "snapshot JSON to continue from");
  sample->add_option("--initial", smp.initial, "junction tree JSON to start from");

  DiagnoseArgs dia;
  auto* diagnose = app.add_subcommand("diagnose", "summarise a chain trace");
  diagnose->add_option("--trace", dia.trace, "trace.ndjson")->required();
  diagnose->add_option("--out", dia.out, "output directory")->required();
  diagnose->add_option("--burn-in", dia.burn_in, "steps discarded")->capture_default_str();
  diagnose->add_option("--max-lag", dia.max_lag, "largest ACF lag")->capture_default_str();
  diagnose->add_option("--truth", dia.truth, "true graph JSON for AUC and Hamming distance");

  std::vector<std::string> owned{"jtmc"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : owned) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (sample->parsed()) {
      apply_config(*sample, smp);
      return cmd_sample(smp, out);
    }
    if (diagnose->parsed()) return cmd_diagnose(dia, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const RhoOutOfRange& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const TooLarge& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const CorruptTrace& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const NotATree& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const NotChordal& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}

}  // namespace jtmc::cli
