// CLI subcommands: decomp, depth, run, sweep.
// Exit codes: 0 success, 1 optimizer abort / runtime failure,
// 2 usage or config error, 3 I/O error.

#pragma once

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vqls/experiment.hpp"

namespace vqls::cli {

namespace detail {

// Optional-valued mirror of ExperimentConfig; file values are applied first,
// then any flag that was actually given overrides them.
struct Flags {
  std::optional<int> n;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::string> scheme;
  std::optional<std::string> cost;
  std::optional<std::string> mode;
  std::optional<int> shots;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> ansatz;
  std::optional<int> layers;
  std::optional<double> tol;
  std::optional<int> max_evals;
  std::optional<int> seeds;
  std::optional<std::string> out;
  std::string config_path;
};

inline void add_problem_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--n", f.n, "qubit count");
  cmd->add_option("--alpha", f.alpha, "diagonal coefficient");
  cmd->add_option("--beta", f.beta, "off-diagonal coefficient");
  cmd->add_option("--scheme", f.scheme, "decomposition scheme: pauli|multiqubit");
}

inline void add_run_flags(CLI::App* cmd, Flags& f) {
  add_problem_flags(cmd, f);
  cmd->add_option("--cost", f.cost, "cost kind: normalized|nonnormalized");
  cmd->add_option("--mode", f.mode, "evaluation mode: exact|shots");
  cmd->add_option("--shots", f.shots, "samples per Hadamard-test circuit");
  cmd->add_option("--seed", f.seed, "RNG seed (initial parameters and sampling)");
  cmd->add_option("--ansatz", f.ansatz, "ansatz kind: product_ry|layered_ry_cx");
  cmd->add_option("--layers", f.layers, "entangling layers (layered ansatz)");
  cmd->add_option("--tol", f.tol, "optimizer convergence tolerance");
  cmd->add_option("--max-evals", f.max_evals, "optimizer evaluation budget");
  cmd->add_option("--out", f.out, "output directory (default: $VQLS_OUT or .)");
  cmd->add_option("--config", f.config_path, "key=value config file; flags override");
}

inline ExperimentConfig resolve(const Flags& f) {
  ExperimentConfig cfg;
  if (!f.config_path.empty()) apply_config_file(cfg, f.config_path);
  if (f.n) cfg.n = *f.n;
  if (f.alpha) cfg.alpha = *f.alpha;
  if (f.beta) cfg.beta = *f.beta;
  if (f.scheme) cfg.scheme = scheme_from_string(*f.scheme);
  if (f.cost) cfg.cost = cost_from_string(*f.cost);
  if (f.mode) cfg.mode = mode_from_string(*f.mode);
  if (f.shots) cfg.shots = *f.shots;
  if (f.seed) cfg.seed = *f.seed;
  if (f.ansatz) cfg.ansatz = ansatz_from_string(*f.ansatz);
  if (f.layers) cfg.layers = *f.layers;
  if (f.tol) cfg.tol = *f.tol;
  if (f.max_evals) cfg.max_evals = *f.max_evals;
  if (f.seeds) cfg.seeds = *f.seeds;
  if (f.out) cfg.out = *f.out;
  return cfg;
}

inline void print_summary(const RunSummary& s, std::ostream& out) {
  out << "final_cost: " << format_double(s.final_cost) << "\n";
  out << "final_fidelity: " << format_double(s.final_fidelity) << "\n";
  out << "iterations: " << s.iterations << "\n";
  out << "evaluations: " << s.evaluations << "\n";
  out << "term_count: " << s.term_count << "\n";
  out << "max_cost_circuit_depth: " << s.max_cost_circuit_depth << "\n";
  out << "wall_seconds: " << format_double(s.wall_seconds) << "\n";
}

}  // namespace detail

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational quantum linear solver for constant-coefficient tridiagonal systems"};
  app.require_subcommand(1);

  detail::Flags decomp_f, depth_f, run_f, sweep_f;
  bool depth_dump = false;

  CLI::App* cmd_decomp = app.add_subcommand("decomp", "print a unitary-term decomposition");
  detail::add_problem_flags(cmd_decomp, decomp_f);

  CLI::App* cmd_depth = app.add_subcommand("depth", "lowered cost-circuit depth per scheme");
  detail::add_problem_flags(cmd_depth, depth_f);
  cmd_depth->add_option("--ansatz", depth_f.ansatz, "ansatz kind: product_ry|layered_ry_cx");
  cmd_depth->add_option("--layers", depth_f.layers, "entangling layers (layered ansatz)");
  cmd_depth->add_flag("--dump", depth_dump, "print every lowered cost circuit, one gate per line");

  CLI::App* cmd_run = app.add_subcommand("run", "run one VQLS optimization");
  detail::add_run_flags(cmd_run, run_f);

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "run repeated seeded optimizations");
  detail::add_run_flags(cmd_sweep, sweep_f);
  cmd_sweep->add_option("--seeds", sweep_f.seeds, "number of consecutive seeds");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (cmd_decomp->parsed()) {
      const ExperimentConfig cfg = detail::resolve(decomp_f);
      validate(cfg);
      const Decomposition d = decompose(TridiagonalSpec{cfg.n, cfg.alpha, cfg.beta}, cfg.scheme);
      out << dump(d);
      out << "terms: " << d.terms.size() << "\n";
      out << "residual: " << format_double(d.residual) << "\n";
      return 0;
    }

    if (cmd_depth->parsed()) {
      const ExperimentConfig cfg = detail::resolve(depth_f);
      validate(cfg);
      const TridiagonalSpec spec{cfg.n, cfg.alpha, cfg.beta};
      const AnsatzSpec ansatz{cfg.ansatz, cfg.n, cfg.layers};
      std::vector<Scheme> schemes{Scheme::pauli};
      if (cfg.n >= 2) schemes.push_back(Scheme::multiqubit);
      for (Scheme scheme : schemes) {
        const ProblemSpec prob = make_problem(spec, scheme);
        const DepthReport r = depth_report(prob, ansatz);
        out << "scheme " << to_string(scheme) << ": terms=" << r.term_count
            << " circuits=" << r.circuit_count << " max_depth=" << r.max_depth
            << " total_gates=" << r.total_gates << "\n";
        if (depth_dump) {
          int index = 0;
          for (const Circuit& c : cost_circuits(prob, ansatz)) {
            const Circuit lowered = lower_to_basis(c);
            out << "circuit " << index++ << " (" << to_string(scheme)
                << "): depth=" << depth(lowered) << " gates=" << gate_count(lowered) << "\n";
            out << dump(lowered);
          }
        }
      }
      return 0;
    }

    if (cmd_run->parsed()) {
      const ExperimentConfig cfg = detail::resolve(run_f);
      const RunSummary s = run_experiment(cfg);
      if (s.aborted) {
        err << "optimizer abort: " << s.abort_reason << "\n";
        err << "partial artifacts in " << effective_out(cfg) << "\n";
        return 1;
      }
      detail::print_summary(s, out);
      out << "artifacts: " << effective_out(cfg) << "\n";
      return 0;
    }

    if (cmd_sweep->parsed()) {
      const ExperimentConfig cfg = detail::resolve(sweep_f);
      const std::vector<RunSummary> summaries = sweep_experiment(cfg);
      bool any_abort = false;
      for (const RunSummary& s : summaries) {
        out << "seed " << s.seed << ": final_cost=" << format_double(s.final_cost)
            << " final_fidelity=" << format_double(s.final_fidelity)
            << (s.aborted ? " (aborted)" : "") << "\n";
        any_abort = any_abort || s.aborted;
      }
      out << "aggregate: " << (std::filesystem::path(effective_out(cfg)) / "aggregate.csv").string()
          << "\n";
      return any_abort ? 1 : 0;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

inline int dispatch_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace vqls::cli
