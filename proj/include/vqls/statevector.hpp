// Dense n-qubit statevectors and gate application. Qubit 0 is the least
// significant bit of the basis index throughout.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vqls/common.hpp"
#include "vqls/dense_matrix.hpp"
#include "vqls/gates.hpp"

namespace vqls {

struct StateVector {
  int n = 0;
  std::vector<cdouble> amplitudes;

  StateVector() = default;
  StateVector(int n_qubits, std::vector<cdouble> amps)
      : n(n_qubits), amplitudes(std::move(amps)) {
    if (amplitudes.size() != dim_of(n)) throw std::invalid_argument("amplitude count must be 2^n");
  }

  std::size_t dim() const { return amplitudes.size(); }

  double norm_sq() const {
    double s = 0.0;
    for (const cdouble& a : amplitudes) s += std::norm(a);
    return s;
  }

  double norm() const { return std::sqrt(norm_sq()); }

  StateVector normalized() const {
    const double nrm = norm();
    if (nrm <= 0.0) throw std::invalid_argument("cannot normalize the zero vector");
    StateVector out = *this;
    for (cdouble& a : out.amplitudes) a /= nrm;
    return out;
  }
};

inline StateVector new_zero_state(int n) {
  if (n < 1 || n > 12) throw std::invalid_argument("qubit count must be in [1, 12]");
  std::vector<cdouble> amps(dim_of(n));
  amps[0] = 1.0;
  return StateVector(n, std::move(amps));
}

inline cdouble inner_product(const StateVector& a, const StateVector& b) {
  if (a.n != b.n) throw std::invalid_argument("statevector dimension mismatch");
  cdouble s = 0.0;
  for (std::size_t j = 0; j < a.dim(); ++j) s += std::conj(a.amplitudes[j]) * b.amplitudes[j];
  return s;
}

namespace detail {

inline cdouble one_q_entry(const OneQ& g, int row, int col) {
  switch (g.kind) {
    case OneQKind::I: return row == col ? 1.0 : 0.0;
    case OneQKind::X: return row != col ? 1.0 : 0.0;
    case OneQKind::Y:
      if (row == col) return 0.0;
      return row == 1 ? cdouble{0, 1} : cdouble{0, -1};
    case OneQKind::Z: return row != col ? 0.0 : (row == 1 ? -1.0 : 1.0);
    case OneQKind::H: {
      const double s = 1.0 / std::numbers::sqrt2;
      return (row == 1 && col == 1) ? -s : s;
    }
    case OneQKind::RY: {
      const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
      if (row == 0) return col == 0 ? c : -s;
      return col == 0 ? s : c;
    }
    case OneQKind::Phase:
      if (row != col) return 0.0;
      return row == 1 ? std::polar(1.0, g.angle) : cdouble{1.0};
  }
  return 0.0;
}

// Applies a gate restricted to the subspace where (index & cmask) == cval;
// wrapper controls recurse by extending the mask.
inline void apply_gate_masked(std::vector<cdouble>& amps, int n, const Gate& g,
                              std::uint64_t cmask, std::uint64_t cval) {
  const std::uint64_t dim = std::uint64_t{1} << n;
  const auto in_range = [n](int q) { return q >= 0 && q < n; };

  if (const auto* q = std::get_if<OneQ>(&g.op)) {
    if (!in_range(q->qubit)) throw std::invalid_argument("gate qubit out of range");
    if (cmask & (std::uint64_t{1} << q->qubit))
      throw std::invalid_argument("control qubit collides with gate target");
    if (q->kind == OneQKind::I) return;
    const cdouble u00 = one_q_entry(*q, 0, 0), u01 = one_q_entry(*q, 0, 1);
    const cdouble u10 = one_q_entry(*q, 1, 0), u11 = one_q_entry(*q, 1, 1);
    const std::uint64_t bit = std::uint64_t{1} << q->qubit;
    for (std::uint64_t j = 0; j < dim; ++j) {
      if ((j & bit) || (j & cmask) != cval) continue;
      const cdouble a0 = amps[j], a1 = amps[j | bit];
      amps[j] = u00 * a0 + u01 * a1;
      amps[j | bit] = u10 * a0 + u11 * a1;
    }
    return;
  }
  if (const auto* s = std::get_if<Swap>(&g.op)) {
    if (!in_range(s->a) || !in_range(s->b)) throw std::invalid_argument("gate qubit out of range");
    const std::uint64_t ba = std::uint64_t{1} << s->a, bb = std::uint64_t{1} << s->b;
    if ((cmask & ba) || (cmask & bb))
      throw std::invalid_argument("control qubit collides with gate target");
    for (std::uint64_t j = 0; j < dim; ++j)
      if ((j & ba) && !(j & bb) && (j & cmask) == cval) std::swap(amps[j], amps[(j ^ ba) | bb]);
    return;
  }
  if (const auto* cs = std::get_if<CenterSwitch>(&g.op)) {
    if (cs->lo < 0 || cs->lo + cs->span > n) throw std::invalid_argument("gate qubit out of range");
    const std::uint64_t span_mask = ((std::uint64_t{1} << cs->span) - 1) << cs->lo;
    if (cmask & span_mask) throw std::invalid_argument("control qubit collides with gate target");
    const std::uint64_t lo_pat = ((std::uint64_t{1} << (cs->span - 1)) - 1) << cs->lo;
    const std::uint64_t hi_pat = std::uint64_t{1} << (cs->lo + cs->span - 1);
    for (std::uint64_t j = 0; j < dim; ++j)
      if ((j & span_mask) == lo_pat && (j & cmask) == cval)
        std::swap(amps[j], amps[(j & ~span_mask) | hi_pat]);
    return;
  }
  if (const auto* m = std::get_if<MultiControlledX>(&g.op)) {
    if (!in_range(m->target)) throw std::invalid_argument("gate qubit out of range");
    std::uint64_t mask = cmask, val = cval;
    for (const ControlBit& c : m->controls) {
      if (!in_range(c.qubit)) throw std::invalid_argument("gate qubit out of range");
      const std::uint64_t bit = std::uint64_t{1} << c.qubit;
      if (mask & bit) throw std::invalid_argument("duplicate control qubit");
      mask |= bit;
      if (c.polarity) val |= bit;
    }
    const std::uint64_t tbit = std::uint64_t{1} << m->target;
    if (mask & tbit) throw std::invalid_argument("control qubit collides with gate target");
    for (std::uint64_t j = 0; j < dim; ++j)
      if (!(j & tbit) && (j & mask) == val) std::swap(amps[j], amps[j | tbit]);
    return;
  }
  if (const auto* w = std::get_if<Controlled>(&g.op)) {
    if (!in_range(w->control)) throw std::invalid_argument("gate qubit out of range");
    const std::uint64_t bit = std::uint64_t{1} << w->control;
    if (cmask & bit) throw std::invalid_argument("duplicate control qubit");
    apply_gate_masked(amps, n, *w->inner, cmask | bit, cval | bit);
    return;
  }
  throw std::invalid_argument("unknown gate variant");
}

}  // namespace detail

inline StateVector apply_gate(const StateVector& state, const Gate& g) {
  StateVector out = state;
  detail::apply_gate_masked(out.amplitudes, out.n, g, 0, 0);
  return out;
}

inline StateVector apply_circuit(const StateVector& state, const Circuit& c) {
  if (c.n > state.n) throw std::invalid_argument("circuit wider than the state");
  StateVector out = state;
  for (const Gate& g : c.gates) detail::apply_gate_masked(out.amplitudes, out.n, g, 0, 0);
  return out;
}

inline DenseMatrix circuit_to_matrix(const Circuit& c) {
  if (c.n > 10) throw std::invalid_argument("circuit_to_matrix limited to 10 qubits");
  const std::size_t dim = dim_of(c.n);
  DenseMatrix m(dim);
  std::vector<cdouble> col(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    std::fill(col.begin(), col.end(), cdouble{});
    col[j] = 1.0;
    for (const Gate& g : c.gates) detail::apply_gate_masked(col, c.n, g, 0, 0);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, j) = col[i];
  }
  return m;
}

inline StateVector mat_apply(const DenseMatrix& m, const StateVector& v) {
  if (m.dim != v.dim()) throw std::invalid_argument("matrix/vector dimension mismatch");
  std::vector<cdouble> out(m.dim);
  for (std::size_t i = 0; i < m.dim; ++i) {
    cdouble s = 0.0;
    for (std::size_t j = 0; j < m.dim; ++j) s += m.at(i, j) * v.amplitudes[j];
    out[i] = s;
  }
  return StateVector(v.n, std::move(out));
}

}  // namespace vqls
