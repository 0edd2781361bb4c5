// Experiment driver: run configuration, cost-circuit depth reports, and the
// CSV/JSON artifacts behind the CLI subcommands.

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vqls/common.hpp"
#include "vqls/decomposition.hpp"
#include "vqls/gates.hpp"
#include "vqls/vqls.hpp"

namespace vqls {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Cost-circuit depth report

struct DepthReport {
  int term_count = 0;
  int circuit_count = 0;
  int max_depth = 0;
  long long total_gates = 0;
};

// The Hadamard-test circuits behind one cost evaluation: one per gamma term
// (V, A_l and B^dag all controlled) and one per <x|A_l^dag A_l'|x> pair
// (ansatz prepared uncontrolled).
inline std::vector<Circuit> cost_circuits(const ProblemSpec& prob, const AnsatzSpec& ansatz) {
  const int n = prob.spec.n;
  const int anc = n;
  const Params zeros{std::vector<double>(static_cast<std::size_t>(ansatz.parameter_count()), 0.0)};
  const Circuit v = ansatz_circuit(ansatz, zeros);
  const Circuit b_dag = prob.b_prep.adjoint();
  const auto& terms = prob.decomposition.terms;

  std::vector<Circuit> circuits;
  for (const WeightedTerm& wt : terms) {
    Circuit u = v;
    u.append(wt.term.circuit());
    u.append(b_dag);
    Circuit ht(n + 1);
    ht.add(gate::h(anc));
    ht.append(controlled(u, anc));
    ht.add(gate::h(anc));
    circuits.push_back(std::move(ht));
  }
  for (std::size_t l = 0; l < terms.size(); ++l)
    for (std::size_t m = l + 1; m < terms.size(); ++m) {
      Circuit u = terms[m].term.circuit();
      u.append(terms[l].term.circuit().adjoint());
      Circuit ht(n + 1);
      for (const Gate& g : v.gates) ht.add(g);
      ht.add(gate::h(anc));
      ht.append(controlled(u, anc));
      ht.add(gate::h(anc));
      circuits.push_back(std::move(ht));
    }
  return circuits;
}

inline DepthReport depth_report(const ProblemSpec& prob, const AnsatzSpec& ansatz) {
  DepthReport report;
  report.term_count = static_cast<int>(prob.decomposition.terms.size());
  for (const Circuit& c : cost_circuits(prob, ansatz)) {
    const Circuit lowered = lower_to_basis(c);
    report.max_depth = std::max(report.max_depth, depth(lowered));
    report.total_gates += gate_count(lowered);
    ++report.circuit_count;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Run configuration

struct ExperimentConfig {
  int n = 1;
  double alpha = 2.0;
  double beta = -1.0;
  Scheme scheme = Scheme::pauli;
  CostKind cost = CostKind::normalized;
  EvalMode::Kind mode = EvalMode::Kind::exact;
  int shots = 8192;
  std::uint64_t seed = 1;
  AnsatzKind ansatz = AnsatzKind::product_ry;
  int layers = 1;
  double tol = 1e-9;
  int max_evals = 500;
  int seeds = 1;    // sweep repetitions
  std::string out;  // empty: $VQLS_OUT, else "."

  bool operator==(const ExperimentConfig&) const = default;
};

inline std::string default_out_root() {
  if (const char* env = std::getenv("VQLS_OUT"); env && *env) return env;
  return ".";
}

inline std::string effective_out(const ExperimentConfig& cfg) {
  return cfg.out.empty() ? default_out_root() : cfg.out;
}

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.n < 1 || cfg.n > 10) throw ConfigError("n must be in [1, 10]");
  if (cfg.scheme == Scheme::multiqubit && cfg.n < 2)
    throw ConfigError("multiqubit scheme requires n >= 2");
  if (cfg.mode == EvalMode::Kind::shots && cfg.shots < 1)
    throw ConfigError("shots must be >= 1");
  if (cfg.max_evals < 1) throw ConfigError("max-evals must be >= 1");
  if (cfg.layers < 1) throw ConfigError("layers must be >= 1");
  if (!(cfg.tol >= 0.0)) throw ConfigError("tol must be >= 0");
  if (cfg.seeds < 1) throw ConfigError("seeds must be >= 1");
}

// ---------------------------------------------------------------------------
// Enum spellings shared by flags and config files

inline std::string to_string(Scheme s) { return s == Scheme::pauli ? "pauli" : "multiqubit"; }
inline std::string to_string(CostKind k) {
  return k == CostKind::normalized ? "normalized" : "nonnormalized";
}
inline std::string to_string(EvalMode::Kind k) {
  return k == EvalMode::Kind::exact ? "exact" : "shots";
}
inline std::string to_string(AnsatzKind k) {
  return k == AnsatzKind::product_ry ? "product_ry" : "layered_ry_cx";
}

inline Scheme scheme_from_string(const std::string& s) {
  if (s == "pauli") return Scheme::pauli;
  if (s == "multiqubit") return Scheme::multiqubit;
  throw ConfigError("unknown scheme: " + s);
}

inline CostKind cost_from_string(const std::string& s) {
  if (s == "normalized") return CostKind::normalized;
  if (s == "nonnormalized") return CostKind::non_normalized;
  throw ConfigError("unknown cost kind: " + s);
}

inline EvalMode::Kind mode_from_string(const std::string& s) {
  if (s == "exact") return EvalMode::Kind::exact;
  if (s == "shots") return EvalMode::Kind::shots;
  throw ConfigError("unknown mode: " + s);
}

inline AnsatzKind ansatz_from_string(const std::string& s) {
  if (s == "product_ry") return AnsatzKind::product_ry;
  if (s == "layered_ry_cx") return AnsatzKind::layered_ry_cx;
  throw ConfigError("unknown ansatz: " + s);
}

// ---------------------------------------------------------------------------
// Flat key=value config files ('#' comments; flags override file values)

inline void apply_config_line(ExperimentConfig& cfg, const std::string& key,
                              const std::string& value) {
  try {
    if (key == "n") cfg.n = std::stoi(value);
    else if (key == "alpha") cfg.alpha = std::stod(value);
    else if (key == "beta") cfg.beta = std::stod(value);
    else if (key == "scheme") cfg.scheme = scheme_from_string(value);
    else if (key == "cost") cfg.cost = cost_from_string(value);
    else if (key == "mode") cfg.mode = mode_from_string(value);
    else if (key == "shots") cfg.shots = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "ansatz") cfg.ansatz = ansatz_from_string(value);
    else if (key == "layers") cfg.layers = std::stoi(value);
    else if (key == "tol") cfg.tol = std::stod(value);
    else if (key == "max-evals") cfg.max_evals = std::stoi(value);
    else if (key == "seeds") cfg.seeds = std::stoi(value);
    else if (key == "out") cfg.out = value;
    else throw ConfigError("unknown config key: " + key);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("bad value for config key '" + key + "': " + value);
  }
}

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("malformed config line: " + line);
    apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

inline std::string dump_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "# effective configuration\n";
  os << "n=" << cfg.n << "\n";
  os << "alpha=" << format_double(cfg.alpha) << "\n";
  os << "beta=" << format_double(cfg.beta) << "\n";
  os << "scheme=" << to_string(cfg.scheme) << "\n";
  os << "cost=" << to_string(cfg.cost) << "\n";
  os << "mode=" << to_string(cfg.mode) << "\n";
  os << "shots=" << cfg.shots << "\n";
  os << "seed=" << cfg.seed << "\n";
  os << "ansatz=" << to_string(cfg.ansatz) << "\n";
  os << "layers=" << cfg.layers << "\n";
  os << "tol=" << format_double(cfg.tol) << "\n";
  os << "max-evals=" << cfg.max_evals << "\n";
  os << "seeds=" << cfg.seeds << "\n";
  os << "out=" << effective_out(cfg) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Run artifacts

struct RunSummary {
  double final_cost = 0.0;
  double final_fidelity = 0.0;
  int iterations = 0;
  int evaluations = 0;
  int term_count = 0;
  int max_cost_circuit_depth = 0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;  // stdout only; kept out of summary.json so
                              // identical configs yield identical artifacts
  bool aborted = false;
  std::string abort_reason;
};

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

inline std::string trace_csv(const OptimizationTrace& trace, const ProblemSpec& prob,
                             const AnsatzSpec& ansatz) {
  const int n_params = ansatz.parameter_count();
  std::ostringstream os;
  os << "iter,cost,fidelity";
  for (int k = 0; k < n_params; ++k) os << ",theta_" << k;
  os << "\n";

  // Singular systems (aborted runs) have no reference solution; the
  // fidelity column degrades to nan.
  bool have_ref = true;
  StateVector x_ref;
  try {
    const StateVector b = apply_circuit(new_zero_state(prob.spec.n), prob.b_prep);
    x_ref = classical_solve(prob.spec, b);
  } catch (const std::exception&) {
    have_ref = false;
  }
  for (const TracePoint& pt : trace.iterations) {
    const StateVector x = apply_circuit(new_zero_state(prob.spec.n),
                                        ansatz_circuit(ansatz, pt.params));
    const double fid = have_ref ? fidelity(x, x_ref) : std::nan("");
    os << pt.iter << ',' << format_double(pt.cost) << ',' << format_double(fid);
    for (double th : pt.params.theta) os << ',' << format_double(th);
    os << "\n";
  }
  return os.str();
}

inline std::string summary_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["final_cost"] = s.final_cost;
  j["final_fidelity"] = s.final_fidelity;
  j["iterations"] = s.iterations;
  j["evaluations"] = s.evaluations;
  j["term_count"] = s.term_count;
  j["max_cost_circuit_depth"] = s.max_cost_circuit_depth;
  j["seed"] = s.seed;
  return j.dump(2) + "\n";
}

}  // namespace detail

// Runs one VQLS experiment and writes trace.csv, summary.json and config.txt
// under the effective output directory. On optimizer abort the partial trace
// and config are still written and `aborted` is set.
inline RunSummary run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const std::filesystem::path out_dir = effective_out(cfg);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string());

  const ProblemSpec prob = make_problem(TridiagonalSpec{cfg.n, cfg.alpha, cfg.beta}, cfg.scheme);
  const AnsatzSpec ansatz{cfg.ansatz, cfg.n, cfg.layers};
  const EvalMode mode = cfg.mode == EvalMode::Kind::exact
                            ? EvalMode::exact()
                            : EvalMode::shots(cfg.shots, cfg.seed);
  OptimizerConfig opt;
  opt.max_evals = cfg.max_evals;
  opt.tol = cfg.tol;
  opt.seed = cfg.seed;

  RunSummary summary;
  summary.seed = cfg.seed;
  summary.term_count = static_cast<int>(prob.decomposition.terms.size());
  summary.max_cost_circuit_depth = depth_report(prob, ansatz).max_depth;

  detail::write_file(out_dir / "config.txt", dump_config(cfg));

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const OptimizationTrace trace = optimize(prob, ansatz, cfg.cost, mode, opt);
    summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    summary.final_cost = trace.final_cost;
    summary.final_fidelity = trace.final_fidelity;
    summary.iterations = static_cast<int>(trace.iterations.size());
    summary.evaluations = trace.evaluations;
    detail::write_file(out_dir / "trace.csv", detail::trace_csv(trace, prob, ansatz));
    detail::write_file(out_dir / "summary.json", detail::summary_json(summary));
  } catch (const OptimizerAbort& abort) {
    summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    summary.aborted = true;
    summary.abort_reason = abort.what();
    summary.iterations = static_cast<int>(abort.partial.iterations.size());
    detail::write_file(out_dir / "trace.csv", detail::trace_csv(abort.partial, prob, ansatz));
  }
  return summary;
}

// cfg.seeds seeded repetitions (seed, seed+1, ...), one subdirectory each,
// plus an aggregate CSV with per-seed finals and a median row.
inline std::vector<RunSummary> sweep_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const int k = cfg.seeds;
  const std::filesystem::path out_dir = effective_out(cfg);

  std::vector<RunSummary> summaries;
  for (int i = 0; i < k; ++i) {
    ExperimentConfig run_cfg = cfg;
    run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(i);
    run_cfg.out = (out_dir / ("seed_" + std::to_string(run_cfg.seed))).string();
    summaries.push_back(run_experiment(run_cfg));
  }

  auto median_of = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  };
  std::vector<double> costs, fids;
  for (const RunSummary& s : summaries) {
    costs.push_back(s.final_cost);
    fids.push_back(s.final_fidelity);
  }

  std::ostringstream os;
  os << "seed,final_cost,final_fidelity\n";
  for (const RunSummary& s : summaries)
    os << s.seed << ',' << format_double(s.final_cost) << ','
       << format_double(s.final_fidelity) << "\n";
  os << "median," << format_double(median_of(costs)) << ','
     << format_double(median_of(fids)) << "\n";
  detail::write_file(out_dir / "aggregate.csv", os.str());
  return summaries;
}

}  // namespace vqls
