// VQLS end to end: ansatz circuits, the global cost in its normalized and
// non-normalized forms (exact statevector or shot-sampled Hadamard tests),
// derivative-free optimization and fidelity against the classical solution.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vqls/common.hpp"
#include "vqls/decomposition.hpp"
#include "vqls/gates.hpp"
#include "vqls/nelder_mead.hpp"
#include "vqls/statevector.hpp"

namespace vqls {

// ---------------------------------------------------------------------------
// Problem and run configuration

struct ProblemSpec {
  TridiagonalSpec spec;
  Decomposition decomposition;
  Circuit b_prep;

  ProblemSpec(TridiagonalSpec s, Decomposition d, Circuit b)
      : spec(s), decomposition(std::move(d)), b_prep(std::move(b)) {
    if (decomposition.n != spec.n || b_prep.n != spec.n)
      throw std::invalid_argument("problem components disagree on the qubit count");
  }
};

inline Circuit hadamard_on_all(int n) {
  Circuit c(n);
  for (int q = 0; q < n; ++q) c.add(gate::h(q));
  return c;
}

// B = H on every qubit (uniform right-hand side).
inline ProblemSpec make_problem(const TridiagonalSpec& spec, Scheme scheme) {
  return ProblemSpec(spec, decompose(spec, scheme), hadamard_on_all(spec.n));
}

enum class AnsatzKind { product_ry, layered_ry_cx };

struct AnsatzSpec {
  AnsatzKind kind = AnsatzKind::product_ry;
  int n = 1;
  int layers = 1;  // layered_ry_cx only

  int parameter_count() const {
    if (kind == AnsatzKind::product_ry) return n;
    return n * (layers + 1);
  }
};

struct Params {
  std::vector<double> theta;
};

struct EvalMode {
  enum class Kind { exact, shots };
  Kind kind = Kind::exact;
  int count = 8192;
  std::uint64_t seed = 0;

  static EvalMode exact() { return EvalMode{}; }
  static EvalMode shots(int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("shot count must be >= 1");
    return EvalMode{Kind::shots, count, seed};
  }
  bool is_exact() const { return kind == Kind::exact; }
};

enum class CostKind { normalized, non_normalized };

struct CostReport {
  double value = 0.0;
  double psi_norm_sq = 0.0;                 // <psi|psi>
  double overlap_sq = 0.0;                  // |<b|psi>|^2
  std::vector<cdouble> per_term_overlaps;   // gamma_l = <0|B^dag A_l V|0>
  long long shots_used = 0;
};

struct CostOptions {
  // Estimate |<b|psi>|^2 as the full L^2 double sum of gamma_l^* gamma_l'
  // pair products instead of |sum c_l gamma_l|^2. Algebraically identical;
  // in shots mode each pair gets fresh estimates.
  bool overlap_double_sum = false;
};

// ---------------------------------------------------------------------------
// Ansatz

inline Circuit ansatz_circuit(const AnsatzSpec& a, const Params& p) {
  if (static_cast<int>(p.theta.size()) != a.parameter_count())
    throw std::invalid_argument("parameter count does not match the ansatz");
  Circuit c(a.n);
  if (a.kind == AnsatzKind::product_ry) {
    for (int q = 0; q < a.n; ++q) c.add(gate::ry(q, p.theta[static_cast<std::size_t>(q)]));
    return c;
  }
  std::size_t next = 0;
  for (int q = 0; q < a.n; ++q) c.add(gate::ry(q, p.theta[next++]));
  for (int layer = 0; layer < a.layers; ++layer) {
    for (int q = 0; q + 1 < a.n; ++q) c.add(gate::cx(q, q + 1));
    for (int q = 0; q < a.n; ++q) c.add(gate::ry(q, p.theta[next++]));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Hamiltonian and classical oracle

// H_G = A^dag (1 - |b><b|) A; Hermitian and positive semidefinite.
inline DenseMatrix hamiltonian_global(const ProblemSpec& prob) {
  if (prob.spec.n > 8) throw std::invalid_argument("hamiltonian_global limited to 8 qubits");
  const DenseMatrix a = assemble_tridiagonal(prob.spec);
  const StateVector b = apply_circuit(new_zero_state(prob.spec.n), prob.b_prep);
  const std::size_t dim = a.dim;
  DenseMatrix proj(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      proj.at(r, c) = -b.amplitudes[r] * std::conj(b.amplitudes[c]);
      if (r == c) proj.at(r, c) += 1.0;
    }
  return a.adjoint() * proj * a;
}

// Normalized A^{-1} b by the Thomas algorithm.
inline StateVector classical_solve(const TridiagonalSpec& spec, const StateVector& b) {
  if (b.n != spec.n) throw std::invalid_argument("right-hand side dimension mismatch");
  const std::size_t dim = b.dim();
  std::vector<cdouble> diag(dim, spec.alpha);
  std::vector<cdouble> rhs = b.amplitudes;
  // Forward elimination with the constant off-diagonal beta.
  for (std::size_t i = 1; i < dim; ++i) {
    if (std::abs(diag[i - 1]) <= 1e-12) throw std::invalid_argument("singular tridiagonal matrix");
    const cdouble w = spec.beta / diag[i - 1];
    diag[i] -= w * spec.beta;
    rhs[i] -= w * rhs[i - 1];
  }
  if (std::abs(diag[dim - 1]) <= 1e-12) throw std::invalid_argument("singular tridiagonal matrix");
  std::vector<cdouble> x(dim);
  x[dim - 1] = rhs[dim - 1] / diag[dim - 1];
  for (std::size_t i = dim - 1; i-- > 0;) x[i] = (rhs[i] - spec.beta * x[i + 1]) / diag[i];
  return StateVector(spec.n, std::move(x)).normalized();
}

inline double fidelity(const StateVector& x_num, const StateVector& x_ref) {
  if (x_num.n != x_ref.n) throw std::invalid_argument("statevector dimension mismatch");
  if (std::abs(x_num.norm() - 1.0) > 1e-10 || std::abs(x_ref.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("fidelity requires normalized states");
  const double f = std::norm(inner_product(x_ref, x_num));
  return std::min(1.0, std::max(0.0, f));
}

// ---------------------------------------------------------------------------
// Hadamard-test estimation

namespace detail {

// P(ancilla = 0) of the Hadamard test for <phi|u|phi>, phi = prep|0>.
// imaginary_part selects the S^dag-rotated variant, P(0) = (1 + Im)/2.
inline double hadamard_test_p0(const Circuit& prep, const Circuit& u, bool imaginary_part) {
  const int n = prep.n;
  const int anc = n;
  Circuit ht(n + 1);
  for (const Gate& g : prep.gates) ht.add(g);
  ht.add(gate::h(anc));
  if (imaginary_part) ht.add(gate::phase(anc, -std::numbers::pi / 2));
  for (const Gate& g : u.gates) ht.add(gate::controlled(anc, g));
  ht.add(gate::h(anc));

  const StateVector out = apply_circuit(new_zero_state(n + 1), ht);
  const std::uint64_t anc_bit = std::uint64_t{1} << anc;
  double p0 = 0.0;
  for (std::uint64_t j = 0; j < out.dim(); ++j)
    if (!(j & anc_bit)) p0 += std::norm(out.amplitudes[j]);
  return std::min(1.0, std::max(0.0, p0));
}

inline double sample_expectation(double p0, int count, std::uint64_t key) {
  long long zeros = 0;
  for (int i = 0; i < count; ++i)
    if (unit_double(mix64(key + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(i + 1))) < p0)
      ++zeros;
  return 2.0 * static_cast<double>(zeros) / static_cast<double>(count) - 1.0;
}

}  // namespace detail

// Estimate of <0|prep^dag u prep|0>. Exact mode evaluates statevectors;
// shots mode samples the ancilla of the Re/Im Hadamard-test circuits with
// the counter stream keyed by (mode.seed, stream, re/im).
inline cdouble estimate_overlap_re_im(const Circuit& prep, const Circuit& u, const EvalMode& mode,
                                      std::uint64_t stream = 0, long long* shots_used = nullptr) {
  if (prep.n != u.n) throw std::invalid_argument("prep/unitary qubit count mismatch");
  if (mode.is_exact()) {
    const StateVector phi = apply_circuit(new_zero_state(prep.n), prep);
    return inner_product(phi, apply_circuit(phi, u));
  }
  const double p0_re = detail::hadamard_test_p0(prep, u, false);
  const double p0_im = detail::hadamard_test_p0(prep, u, true);
  const double re = detail::sample_expectation(p0_re, mode.count, stream_key(mode.seed, stream, 0));
  const double im = detail::sample_expectation(p0_im, mode.count, stream_key(mode.seed, stream, 1));
  if (shots_used) *shots_used += 2LL * mode.count;
  return {re, im};
}

// ---------------------------------------------------------------------------
// Cost

namespace detail {

inline Circuit term_pair_circuit(const UnitaryTerm& left, const UnitaryTerm& right) {
  Circuit u = right.circuit();
  u.append(left.circuit().adjoint());
  return u;
}

}  // namespace detail

// Global cost per the decomposition: psi_norm_sq from the L^2 pair sum,
// overlap_sq from the per-term overlaps gamma_l. The normalized value is
// 1 - overlap_sq/psi_norm_sq, the non-normalized one their difference.
// `eval_index` keys the shot-sampling streams of one optimizer evaluation.
inline CostReport cost(const ProblemSpec& prob, const AnsatzSpec& ansatz, const Params& params,
                       CostKind kind, const EvalMode& mode, std::uint64_t eval_index = 0,
                       const CostOptions& opts = {}) {
  if (ansatz.n != prob.spec.n) throw std::invalid_argument("ansatz width mismatch");
  const auto& terms = prob.decomposition.terms;
  const std::size_t n_terms = terms.size();
  const Circuit v = ansatz_circuit(ansatz, params);

  CostReport report;
  report.per_term_overlaps.resize(n_terms);

  if (mode.is_exact()) {
    const StateVector x = apply_circuit(new_zero_state(prob.spec.n), v);
    const StateVector b = apply_circuit(new_zero_state(prob.spec.n), prob.b_prep);
    StateVector psi(prob.spec.n, std::vector<cdouble>(x.dim()));
    cdouble b_psi = 0.0;
    for (std::size_t l = 0; l < n_terms; ++l) {
      const StateVector psi_l = terms[l].term.apply(x);
      const cdouble gamma = inner_product(b, psi_l);
      report.per_term_overlaps[l] = gamma;
      b_psi += terms[l].coeff * gamma;
      for (std::size_t j = 0; j < psi.dim(); ++j)
        psi.amplitudes[j] += terms[l].coeff * psi_l.amplitudes[j];
    }
    report.psi_norm_sq = psi.norm_sq();
    report.overlap_sq = std::norm(b_psi);
  } else {
    // Stream layout per evaluation: gamma terms first, then <x|A_l^dag A_l'|x>
    // pairs, then (for the double-sum variant) per-pair overlap estimates.
    const Circuit b_dag = prob.b_prep.adjoint();
    const Circuit empty_prep(prob.spec.n);
    std::uint64_t slot = 0;
    const auto key = [&](std::uint64_t s) { return stream_key(eval_index, s); };

    for (std::size_t l = 0; l < n_terms; ++l) {
      Circuit u = v;
      u.append(terms[l].term.circuit());
      u.append(b_dag);
      report.per_term_overlaps[l] =
          estimate_overlap_re_im(empty_prep, u, mode, key(slot++), &report.shots_used);
    }

    double psi = 0.0;
    for (std::size_t l = 0; l < n_terms; ++l) psi += std::norm(terms[l].coeff);
    for (std::size_t l = 0; l < n_terms; ++l)
      for (std::size_t m = l + 1; m < n_terms; ++m) {
        const Circuit u = detail::term_pair_circuit(terms[l].term, terms[m].term);
        const cdouble est =
            estimate_overlap_re_im(v, u, mode, key(slot++), &report.shots_used);
        psi += 2.0 * (std::conj(terms[l].coeff) * terms[m].coeff * est).real();
      }
    report.psi_norm_sq = psi;

    if (!opts.overlap_double_sum) {
      cdouble b_psi = 0.0;
      for (std::size_t l = 0; l < n_terms; ++l)
        b_psi += terms[l].coeff * report.per_term_overlaps[l];
      report.overlap_sq = std::norm(b_psi);
    } else {
      double ov = 0.0;
      for (std::size_t l = 0; l < n_terms; ++l)
        for (std::size_t m = 0; m < n_terms; ++m) {
          Circuit ul = v;
          ul.append(terms[l].term.circuit());
          ul.append(b_dag);
          // Fresh estimates per (l, m) pair, mirroring the two-factor
          // structure of the double sum.
          const cdouble gl =
              estimate_overlap_re_im(empty_prep, ul, mode, key(slot++), &report.shots_used);
          Circuit um = v;
          um.append(terms[m].term.circuit());
          um.append(b_dag);
          const cdouble gm =
              estimate_overlap_re_im(empty_prep, um, mode, key(slot++), &report.shots_used);
          ov += (std::conj(terms[l].coeff * gl) * terms[m].coeff * gm).real();
        }
      report.overlap_sq = ov;
    }
  }

  if (kind == CostKind::normalized) {
    if (report.psi_norm_sq <= 1e-14)
      throw std::domain_error("degenerate state: <psi|psi> vanishes in normalized cost");
    report.value = 1.0 - report.overlap_sq / report.psi_norm_sq;
  } else {
    report.value = report.psi_norm_sq - report.overlap_sq;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Optimization

struct OptimizerConfig {
  int max_evals = 500;
  // Simplex-spread stopping tolerance. Tight enough that converged exact
  // runs land well below 1e-6 final cost; shot-sampled runs are noise
  // limited and effectively run to the evaluation budget.
  double tol = 1e-9;
  std::uint64_t seed = 0;
  double initial_step = 0.5;
};

struct TracePoint {
  int iter = 0;
  Params params;
  double cost = 0.0;
};

struct OptimizationTrace {
  std::vector<TracePoint> iterations;
  Params final;
  double final_cost = 0.0;
  double final_fidelity = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct OptimizerAbort : std::runtime_error {
  OptimizationTrace partial;
  OptimizerAbort(const std::string& what, OptimizationTrace trace)
      : std::runtime_error(what), partial(std::move(trace)) {}
};

inline Params initial_params(const AnsatzSpec& ansatz, std::uint64_t seed) {
  CounterRng rng(stream_key(seed, 0x696e6974ULL));  // init stream
  Params p;
  p.theta.resize(static_cast<std::size_t>(ansatz.parameter_count()));
  for (double& th : p.theta) th = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return p;
}

inline OptimizationTrace optimize(const ProblemSpec& prob, const AnsatzSpec& ansatz, CostKind kind,
                                  const EvalMode& mode, const OptimizerConfig& cfg) {
  if (cfg.max_evals < 1) throw std::invalid_argument("max_evals must be >= 1");
  OptimizationTrace trace;
  std::uint64_t eval_index = 0;

  auto f = [&](const std::vector<double>& theta) {
    double value;
    try {
      value = cost(prob, ansatz, Params{theta}, kind, mode, eval_index++).value;
    } catch (const std::exception& e) {
      throw OptimizerAbort(std::string("cost evaluation failed: ") + e.what(), trace);
    }
    if (!std::isfinite(value))
      throw OptimizerAbort("non-finite cost encountered", trace);
    return value;
  };

  NelderMeadOptions nm;
  nm.max_evals = cfg.max_evals;
  nm.tol = cfg.tol;
  nm.initial_step = cfg.initial_step;
  nm.on_iterate = [&](int iter, const std::vector<double>& best_x, double best_f) {
    trace.iterations.push_back({iter, Params{best_x}, best_f});
  };

  const Params start = initial_params(ansatz, cfg.seed);
  const NelderMeadResult result = nelder_mead(f, start.theta, nm);

  trace.final = Params{result.best_x};
  trace.final_cost = result.best_f;
  trace.evaluations = result.evaluations;
  trace.converged = result.converged;

  try {
    const StateVector b = apply_circuit(new_zero_state(prob.spec.n), prob.b_prep);
    const StateVector x_ref = classical_solve(prob.spec, b);
    const StateVector x_num = apply_circuit(new_zero_state(prob.spec.n),
                                            ansatz_circuit(ansatz, trace.final));
    trace.final_fidelity = fidelity(x_num, x_ref);
  } catch (const std::exception&) {
    trace.final_fidelity = std::nan("");  // singular system, no reference
  }
  return trace;
}

}  // namespace vqls
