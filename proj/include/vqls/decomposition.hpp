// Unitary-term decompositions of the constant-coefficient tridiagonal matrix:
// the naive Pauli-string expansion and the SWAP/center-switch scheme.
//
// Off-diagonal structure. The matrix couples neighbouring basis indices
// j <-> j+1. Writing t for the number of trailing ones of an odd j, the pair
// (j, j+1) flips exactly bits 0..t. Even j (t absent) is covered by X on
// qubit 0; odd j with t trailing ones is covered by the span-(t+1)
// center-switch placed on qubits t..0 (span 2 being SWAP), which exchanges
// the middle patterns 01...1 <-> 10...0 of its block for every configuration
// of the higher qubits. Each superdiagonal entry is hit exactly once, so all
// off-diagonal terms carry the coefficient beta.
//
// The SWAP/center-switch terms also contribute superfluous diagonal entries;
// the leftover diagonal alpha*1 - beta*(sum of term diagonals) is expanded
// over Z-type Pauli strings by a Walsh-Hadamard transform. The leftover is
// symmetric under bit complement, so only even-Z-weight strings survive
// (asserted at construction).

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vqls/common.hpp"
#include "vqls/dense_matrix.hpp"
#include "vqls/gates.hpp"
#include "vqls/statevector.hpp"

namespace vqls {

struct TridiagonalSpec {
  int n = 1;
  double alpha = 0.0;
  double beta = 0.0;
};

enum class Scheme { pauli, multiqubit };

inline DenseMatrix assemble_tridiagonal(const TridiagonalSpec& spec) {
  if (spec.n < 1 || spec.n > 10) throw std::invalid_argument("qubit count must be in [1, 10]");
  const std::size_t dim = dim_of(spec.n);
  DenseMatrix a(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    a.at(j, j) = spec.alpha;
    if (j + 1 < dim) {
      a.at(j, j + 1) = spec.beta;
      a.at(j + 1, j) = spec.beta;
    }
  }
  return a;
}

// ---------------------------------------------------------------------------
// Terms

// Center-switch family term: the gate of the given span on qubits
// span-1..0, identity-padded above. Span 2 is the SWAP term of Table-style
// listings.
struct CsTerm {
  int span;
};

struct UnitaryTerm {
  std::variant<PauliString, CsTerm> body;
  int n = 0;  // system qubit count, identity padding included

  static UnitaryTerm pauli(PauliString p) {
    UnitaryTerm t;
    t.n = static_cast<int>(p.size());
    t.body = std::move(p);
    return t;
  }

  static UnitaryTerm center_switch(int span, int n) {
    if (span < 2 || span > n) throw std::invalid_argument("center-switch span out of range");
    UnitaryTerm t;
    t.n = n;
    t.body = CsTerm{span};
    return t;
  }

  bool is_pauli() const { return std::holds_alternative<PauliString>(body); }

  // Table-style name, e.g. "Z2 Z1 I0", "I2 SWAP_(1-0)", "CS^(2)_(3-0)".
  std::string name() const {
    if (const auto* p = std::get_if<PauliString>(&body)) return p->name();
    const int span = std::get<CsTerm>(body).span;
    std::string s;
    for (int q = n - 1; q >= span; --q) s += "I" + std::to_string(q) + " ";
    if (span == 2) {
      s += "SWAP_(1-0)";
    } else {
      s += "CS";
      if (span > 3) s += "^(" + std::to_string(span - 2) + ")";
      s += "_(" + std::to_string(span - 1) + "-0)";
    }
    return s;
  }

  Circuit circuit() const {
    if (const auto* p = std::get_if<PauliString>(&body)) {
      Circuit c = p->circuit();
      c.n = n;
      return c;
    }
    Circuit c(n);
    c.add(gate::center_switch(0, std::get<CsTerm>(body).span));
    return c;
  }

  // Every term is a generalized permutation matrix: row j has its single
  // nonzero entry in column permuted_column(j) with value entry(j).
  std::uint64_t permuted_column(std::uint64_t row) const {
    if (const auto* p = std::get_if<PauliString>(&body)) return row ^ p->x_mask();
    const int span = std::get<CsTerm>(body).span;
    const std::uint64_t span_mask = (std::uint64_t{1} << span) - 1;
    const std::uint64_t lo_pat = (std::uint64_t{1} << (span - 1)) - 1;
    const std::uint64_t in_block = row & span_mask;
    if (in_block == lo_pat || in_block == lo_pat + 1) return row ^ lo_pat ^ (lo_pat + 1);
    return row;
  }

  cdouble entry(std::uint64_t row) const {
    if (const auto* p = std::get_if<PauliString>(&body)) return p->entry(row);
    return 1.0;
  }

  DenseMatrix matrix() const {
    const std::size_t dim = dim_of(n);
    DenseMatrix m(dim);
    for (std::uint64_t j = 0; j < dim; ++j) m.at(j, permuted_column(j)) = entry(j);
    return m;
  }

  // A_l |v> without assembling the dense matrix.
  StateVector apply(const StateVector& v) const {
    if (v.n != n) throw std::invalid_argument("term/state dimension mismatch");
    std::vector<cdouble> out(v.dim());
    for (std::uint64_t i = 0; i < v.dim(); ++i)
      out[i] = entry(i) * v.amplitudes[permuted_column(i)];
    return StateVector(v.n, std::move(out));
  }

  bool operator==(const UnitaryTerm& other) const {
    return n == other.n && body == other.body;
  }
};

inline bool operator==(const CsTerm& a, const CsTerm& b) { return a.span == b.span; }

struct WeightedTerm {
  cdouble coeff;
  UnitaryTerm term;
};

struct Decomposition {
  Scheme scheme = Scheme::pauli;
  int n = 0;
  std::vector<WeightedTerm> terms;
  double residual = 0.0;  // Frobenius norm of A - sum c_l A_l
};

inline DenseMatrix reconstruct(const Decomposition& d) {
  const std::size_t dim = dim_of(d.n);
  DenseMatrix m(dim);
  for (const WeightedTerm& wt : d.terms)
    for (std::uint64_t j = 0; j < dim; ++j)
      m.at(j, wt.term.permuted_column(j)) += wt.coeff * wt.term.entry(j);
  return m;
}

inline int term_counts(Scheme scheme, int n) {
  if (n < 1) throw std::invalid_argument("qubit count must be >= 1");
  if (scheme == Scheme::pauli) return 1 << n;
  if (n < 2) throw std::invalid_argument("multiqubit scheme requires n >= 2");
  return (1 << (n - 1)) + n;
}

namespace detail {

inline void prune_and_finalize(Decomposition& d, const DenseMatrix& target) {
  double max_c = 0.0;
  for (const WeightedTerm& wt : d.terms) max_c = std::max(max_c, std::abs(wt.coeff));
  std::vector<WeightedTerm> kept;
  for (WeightedTerm& wt : d.terms)
    if (max_c > 0.0 && std::abs(wt.coeff) > tol::prune * max_c) kept.push_back(std::move(wt));
  d.terms = std::move(kept);
  d.residual = (reconstruct(d) - target).frobenius_norm();
  if (d.residual > tol::exact)
    throw std::logic_error("decomposition residual exceeds tolerance: " +
                           format_double(d.residual));
}

}  // namespace detail

// c_P = tr(P a) / 2^n over all 4^n strings; real for Hermitian input.
inline Decomposition pauli_decompose_general(const DenseMatrix& a) {
  int n = 0;
  while (dim_of(n) < a.dim) ++n;
  if (dim_of(n) != a.dim) throw std::invalid_argument("matrix dimension must be a power of two");
  if (n > 8) throw std::invalid_argument("general Pauli decomposition limited to 8 qubits");
  if (!is_hermitian(a, 1e-10)) throw std::invalid_argument("matrix is not Hermitian");

  Decomposition d;
  d.scheme = Scheme::pauli;
  d.n = n;
  const std::size_t dim = a.dim;
  PauliString p;
  p.letters.assign(static_cast<std::size_t>(n), Pauli::I);
  const std::uint64_t total = std::uint64_t{1} << (2 * n);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (int k = 0; k < n; ++k, c >>= 2) p.letters[k] = static_cast<Pauli>(c & 3);
    const std::uint64_t xm = p.x_mask();
    cdouble tr = 0.0;
    for (std::uint64_t j = 0; j < dim; ++j) tr += p.entry(j) * a.at(j ^ xm, j);
    d.terms.push_back({tr / static_cast<double>(dim), UnitaryTerm::pauli(p)});
  }
  detail::prune_and_finalize(d, a);
  return d;
}

namespace detail {

// tr(P A)/2^n against the tridiagonal A, visiting only the basis pairs the
// string can couple. P flips exactly bits 0..t (block mask 2^{t+1}-1), so
// adjacent pairs occur at j = 2^t-1, 2^t within each aligned block.
inline cdouble tridiagonal_pauli_coeff(const PauliString& p, const TridiagonalSpec& spec) {
  const std::uint64_t xm = p.x_mask();
  const std::size_t dim = dim_of(spec.n);
  if (xm == 0) {
    cdouble tr = 0.0;
    for (std::uint64_t j = 0; j < dim; ++j) tr += p.entry(j) * spec.alpha;
    return tr / static_cast<double>(dim);
  }
  const std::uint64_t block = xm + 1;  // xm is 2^{t+1}-1 for every candidate string
  cdouble tr = 0.0;
  for (std::uint64_t base = 0; base < dim; base += block) {
    const std::uint64_t j = base + block / 2;  // upper index of the adjacent pair
    tr += p.entry(j) * spec.beta;
    tr += p.entry(j - 1) * spec.beta;
  }
  return tr / static_cast<double>(dim);
}

}  // namespace detail

// Same term set and coefficients as the general scan, but visiting only the
// 2^n strings that can be nonzero: the identity, X on qubit 0, and for each
// block size t+1 >= 2 the X/Y strings on bits 0..t with an even Y count.
inline Decomposition pauli_decompose_tridiagonal(const TridiagonalSpec& spec) {
  if (spec.n < 1 || spec.n > 10) throw std::invalid_argument("qubit count must be in [1, 10]");
  Decomposition d;
  d.scheme = Scheme::pauli;
  d.n = spec.n;

  PauliString p;
  p.letters.assign(static_cast<std::size_t>(spec.n), Pauli::I);
  d.terms.push_back({spec.alpha, UnitaryTerm::pauli(p)});  // identity

  p.letters[0] = Pauli::X;
  d.terms.push_back({detail::tridiagonal_pauli_coeff(p, spec), UnitaryTerm::pauli(p)});

  for (int t = 1; t < spec.n; ++t) {
    // y_sel ascending equals base-4 encoding ascending within the block.
    for (std::uint64_t y_sel = 0; y_sel < (std::uint64_t{1} << (t + 1)); ++y_sel) {
      if (std::popcount(y_sel) & 1) continue;
      for (int b = 0; b <= t; ++b)
        p.letters[b] = (y_sel >> b) & 1 ? Pauli::Y : Pauli::X;
      d.terms.push_back({detail::tridiagonal_pauli_coeff(p, spec), UnitaryTerm::pauli(p)});
    }
  }

  detail::prune_and_finalize(d, assemble_tridiagonal(spec));
  return d;
}

// Off-diagonal coverage by {X0, SWAP, CS(3), ..., CS(n)} each with
// coefficient beta, plus the Walsh-Hadamard expansion of the diagonal
// leftover over even-weight Z strings.
inline Decomposition multiqubit_decompose_tridiagonal(const TridiagonalSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("multiqubit scheme requires n >= 2");
  if (spec.n > 10) throw std::invalid_argument("qubit count must be in [1, 10]");
  const int n = spec.n;
  const std::size_t dim = dim_of(n);

  Decomposition d;
  d.scheme = Scheme::multiqubit;
  d.n = n;

  PauliString x0;
  x0.letters.assign(static_cast<std::size_t>(n), Pauli::I);
  x0.letters[0] = Pauli::X;
  d.terms.push_back({spec.beta, UnitaryTerm::pauli(x0)});
  for (int span = 2; span <= n; ++span)
    d.terms.push_back({spec.beta, UnitaryTerm::center_switch(span, n)});

  // Diagonal leftover: alpha minus the diagonals the spans contribute (each
  // span term has a unit diagonal except at its two swapped patterns).
  std::vector<double> leftover(dim, spec.alpha);
  for (int span = 2; span <= n; ++span) {
    const std::uint64_t block = std::uint64_t{1} << span;
    const std::uint64_t mid = block / 2;
    for (std::uint64_t j = 0; j < dim; ++j) {
      const std::uint64_t r = j & (block - 1);
      if (r != mid - 1 && r != mid) leftover[j] -= spec.beta;
    }
  }

  // In-place Walsh-Hadamard transform: c_s = 2^{-n} sum_j (-1)^{s.j} d_j.
  std::vector<double> coeff = leftover;
  for (std::size_t half = 1; half < dim; half <<= 1)
    for (std::size_t i = 0; i < dim; i += 2 * half)
      for (std::size_t j = i; j < i + half; ++j) {
        const double u = coeff[j], v = coeff[j + half];
        coeff[j] = u + v;
        coeff[j + half] = u - v;
      }
  double max_c = std::abs(spec.beta);
  for (double c : coeff) max_c = std::max(max_c, std::abs(c) / static_cast<double>(dim));
  for (std::uint64_t s = 0; s < dim; ++s) {
    const double c = coeff[s] / static_cast<double>(dim);
    if (std::popcount(s) & 1) {
      // The leftover is bit-complement symmetric; odd-weight components
      // must cancel identically.
      if (max_c > 0.0 && std::abs(c) > tol::prune * max_c)
        throw std::logic_error("odd-weight Z component survived the diagonal expansion");
      continue;
    }
    PauliString zs;
    zs.letters.assign(static_cast<std::size_t>(n), Pauli::I);
    for (int k = 0; k < n; ++k)
      if ((s >> k) & 1) zs.letters[k] = Pauli::Z;
    d.terms.push_back({c, UnitaryTerm::pauli(zs)});
  }

  detail::prune_and_finalize(d, assemble_tridiagonal(spec));
  return d;
}

inline Decomposition decompose(const TridiagonalSpec& spec, Scheme scheme) {
  return scheme == Scheme::pauli ? pauli_decompose_tridiagonal(spec)
                                 : multiqubit_decompose_tridiagonal(spec);
}

// One line per term: `<coefficient> <term-name>`.
inline std::string dump(const Decomposition& d) {
  std::string out;
  for (const WeightedTerm& wt : d.terms) {
    if (std::abs(wt.coeff.imag()) > tol::prune * (1.0 + std::abs(wt.coeff.real()))) {
      out += format_double(wt.coeff.real()) + "+" + format_double(wt.coeff.imag()) + "i";
    } else {
      out += format_double(wt.coeff.real());
    }
    out += " " + wt.term.name() + "\n";
  }
  return out;
}

}  // namespace vqls
