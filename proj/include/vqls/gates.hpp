// Typed gate set, Pauli strings, the center-switch gate family with its
// multi-controlled-X lowering, reduction to a CNOT+1q basis, and circuit
// metrics (depth, gate count, textual dump).

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vqls/common.hpp"
#include "vqls/dense_matrix.hpp"

namespace vqls {

// ---------------------------------------------------------------------------
// Gate variants

enum class OneQKind { I, X, Y, Z, H, RY, Phase };

struct OneQ {
  OneQKind kind;
  int qubit;
  double angle = 0.0;  // RY rotation angle or Phase(lambda) = diag(1, e^{i lambda})
};

struct Swap {
  int a;
  int b;
};

// Permutation swapping the two middle computational-basis patterns of the
// contiguous block [lo, lo+span), i.e. 01...1 <-> 10...0 read within the
// block, for every configuration of the remaining qubits. Span 2 is SWAP.
struct CenterSwitch {
  int lo;
  int span;
};

struct ControlBit {
  int qubit;
  int polarity;  // 1: acts when |1> (filled dot), 0: acts when |0> (open dot)
};

struct MultiControlledX {
  std::vector<ControlBit> controls;
  int target;
};

struct Gate;

struct Controlled {
  int control;  // positive control wrapping an arbitrary inner gate
  std::shared_ptr<const Gate> inner;
};

struct Gate {
  std::variant<OneQ, Swap, CenterSwitch, MultiControlledX, Controlled> op;

  // All qubit indices the gate touches, controls included.
  std::vector<int> qubits() const;
  int max_qubit() const;
  Gate adjoint() const;
};

namespace detail {

inline void collect_qubits(const Gate& g, std::vector<int>& out) {
  if (const auto* q = std::get_if<OneQ>(&g.op)) {
    out.push_back(q->qubit);
  } else if (const auto* s = std::get_if<Swap>(&g.op)) {
    out.push_back(s->a);
    out.push_back(s->b);
  } else if (const auto* cs = std::get_if<CenterSwitch>(&g.op)) {
    for (int q2 = cs->lo; q2 < cs->lo + cs->span; ++q2) out.push_back(q2);
  } else if (const auto* m = std::get_if<MultiControlledX>(&g.op)) {
    for (const ControlBit& c : m->controls) out.push_back(c.qubit);
    out.push_back(m->target);
  } else if (const auto* w = std::get_if<Controlled>(&g.op)) {
    out.push_back(w->control);
    collect_qubits(*w->inner, out);
  }
}

}  // namespace detail

inline std::vector<int> Gate::qubits() const {
  std::vector<int> out;
  detail::collect_qubits(*this, out);
  return out;
}

inline int Gate::max_qubit() const {
  int m = -1;
  for (int q : qubits()) m = std::max(m, q);
  return m;
}

// ---------------------------------------------------------------------------
// Factories (validate index invariants at construction)

namespace gate {

inline Gate one_q(OneQKind kind, int qubit, double angle = 0.0) {
  if (qubit < 0) throw std::invalid_argument("negative qubit index");
  return Gate{OneQ{kind, qubit, angle}};
}

inline Gate i(int q) { return one_q(OneQKind::I, q); }
inline Gate x(int q) { return one_q(OneQKind::X, q); }
inline Gate y(int q) { return one_q(OneQKind::Y, q); }
inline Gate z(int q) { return one_q(OneQKind::Z, q); }
inline Gate h(int q) { return one_q(OneQKind::H, q); }
inline Gate ry(int q, double theta) { return one_q(OneQKind::RY, q, theta); }
inline Gate phase(int q, double lambda) { return one_q(OneQKind::Phase, q, lambda); }

inline Gate swap(int a, int b) {
  if (a < 0 || b < 0 || a == b) throw std::invalid_argument("SWAP needs two distinct qubits");
  return Gate{Swap{a, b}};
}

inline Gate center_switch(int lo, int span) {
  if (lo < 0) throw std::invalid_argument("negative qubit index");
  if (span < 2) throw std::invalid_argument("center-switch span must be >= 2");
  return Gate{CenterSwitch{lo, span}};
}

inline Gate mcx(std::vector<ControlBit> controls, int target) {
  if (controls.empty()) throw std::invalid_argument("multi-controlled X needs >= 1 control");
  std::vector<int> seen{target};
  for (const ControlBit& c : controls) {
    if (c.qubit < 0 || target < 0) throw std::invalid_argument("negative qubit index");
    if (c.polarity != 0 && c.polarity != 1) throw std::invalid_argument("control polarity must be 0 or 1");
    if (std::find(seen.begin(), seen.end(), c.qubit) != seen.end())
      throw std::invalid_argument("duplicate qubit in multi-controlled X");
    seen.push_back(c.qubit);
  }
  return Gate{MultiControlledX{std::move(controls), target}};
}

inline Gate cx(int control, int target) { return mcx({{control, 1}}, target); }

inline Gate controlled(int control, Gate inner) {
  auto used = inner.qubits();
  if (std::find(used.begin(), used.end(), control) != used.end())
    throw std::invalid_argument("control qubit collides with the wrapped gate");
  return Gate{Controlled{control, std::make_shared<const Gate>(std::move(inner))}};
}

}  // namespace gate

inline Gate Gate::adjoint() const {
  if (const auto* q = std::get_if<OneQ>(&op)) {
    if (q->kind == OneQKind::RY || q->kind == OneQKind::Phase)
      return gate::one_q(q->kind, q->qubit, -q->angle);
    return *this;  // I, X, Y, Z, H are self-adjoint
  }
  if (const auto* w = std::get_if<Controlled>(&op))
    return gate::controlled(w->control, w->inner->adjoint());
  return *this;  // SWAP, center-switch and multi-controlled X are involutions
}

// ---------------------------------------------------------------------------
// Circuits

struct Circuit {
  int n = 0;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(int n_qubits) : n(n_qubits) {
    if (n_qubits < 0) throw std::invalid_argument("negative qubit count");
  }

  Circuit& add(Gate g) {
    if (g.max_qubit() >= n) throw std::invalid_argument("gate does not fit the circuit width");
    gates.push_back(std::move(g));
    return *this;
  }

  Circuit& append(const Circuit& other) {
    for (const Gate& g : other.gates) add(g);
    return *this;
  }

  Circuit adjoint() const {
    Circuit c(n);
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) c.add(it->adjoint());
    return c;
  }
};

// ---------------------------------------------------------------------------
// Pauli strings

enum class Pauli : std::uint8_t { I, X, Y, Z };

struct PauliString {
  std::vector<Pauli> letters;  // letters[k] acts on qubit k

  std::size_t size() const { return letters.size(); }

  // "IXZ" reads left-to-right from the highest qubit down, matching the
  // usual sigma_{n-1} ... sigma_0 notation.
  static PauliString from_label(const std::string& label) {
    PauliString p;
    p.letters.resize(label.size());
    for (std::size_t i = 0; i < label.size(); ++i) {
      Pauli letter;
      switch (label[i]) {
        case 'I': letter = Pauli::I; break;
        case 'X': letter = Pauli::X; break;
        case 'Y': letter = Pauli::Y; break;
        case 'Z': letter = Pauli::Z; break;
        default: throw std::invalid_argument("unknown Pauli letter in label");
      }
      p.letters[label.size() - 1 - i] = letter;
    }
    return p;
  }

  std::uint64_t x_mask() const {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < letters.size(); ++k)
      if (letters[k] == Pauli::X || letters[k] == Pauli::Y) m |= std::uint64_t{1} << k;
    return m;
  }

  std::uint64_t y_mask() const {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < letters.size(); ++k)
      if (letters[k] == Pauli::Y) m |= std::uint64_t{1} << k;
    return m;
  }

  std::uint64_t z_mask() const {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < letters.size(); ++k)
      if (letters[k] == Pauli::Z || letters[k] == Pauli::Y) m |= std::uint64_t{1} << k;
    return m;
  }

  // Base-4 encoding (I=0, X=1, Y=2, Z=3; qubit k has weight 4^k). Defines
  // the canonical emission order of Pauli terms.
  std::uint64_t encoding() const {
    std::uint64_t e = 0;
    for (std::size_t k = letters.size(); k-- > 0;)
      e = 4 * e + static_cast<std::uint64_t>(letters[k]);
    return e;
  }

  // Row entry of the string's matrix: nonzero only in column row^x_mask.
  cdouble entry(std::uint64_t row) const {
    static constexpr cdouble ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const int n_y = std::popcount(y_mask());
    // Y contributes i * (-1)^{1 + row_bit}; Z contributes (-1)^{row_bit}.
    int sign = (n_y + parity64(row & (y_mask() | z_mask()))) & 1;
    return ipow[n_y & 3] * (sign ? -1.0 : 1.0);
  }

  std::string name() const {
    static constexpr char letter_chars[] = {'I', 'X', 'Y', 'Z'};
    std::string s;
    for (std::size_t k = letters.size(); k-- > 0;) {
      if (!s.empty()) s += ' ';
      s += letter_chars[static_cast<int>(letters[k])];
      s += std::to_string(k);
    }
    return s;
  }

  Circuit circuit() const {
    Circuit c(static_cast<int>(letters.size()));
    for (std::size_t k = 0; k < letters.size(); ++k) {
      switch (letters[k]) {
        case Pauli::I: break;
        case Pauli::X: c.add(gate::x(static_cast<int>(k))); break;
        case Pauli::Y: c.add(gate::y(static_cast<int>(k))); break;
        case Pauli::Z: c.add(gate::z(static_cast<int>(k))); break;
      }
    }
    return c;
  }

  bool operator==(const PauliString& other) const { return letters == other.letters; }
};

inline DenseMatrix pauli_string_matrix(const PauliString& p) {
  if (p.size() > 10) throw std::invalid_argument("Pauli string longer than 10 qubits");
  const std::size_t dim = dim_of(static_cast<int>(p.size()));
  const std::uint64_t xm = p.x_mask();
  DenseMatrix m(dim);
  for (std::uint64_t r = 0; r < dim; ++r) m.at(r, r ^ xm) = p.entry(r);
  return m;
}

// ---------------------------------------------------------------------------
// Center-switch family

inline DenseMatrix center_switch_matrix(int span) {
  if (span < 2) throw std::invalid_argument("center-switch span must be >= 2");
  const std::size_t dim = dim_of(span);
  DenseMatrix m = DenseMatrix::identity(dim);
  const std::size_t hi = dim / 2;
  const std::size_t lo = hi - 1;
  m.at(lo, lo) = 0.0;
  m.at(hi, hi) = 0.0;
  m.at(lo, hi) = 1.0;
  m.at(hi, lo) = 1.0;
  return m;
}

// Expands the transposition (01...1, 10...0) through the intermediate
// bitstrings obtained by clearing the low block from its top bit down to
// bit 0, then flipping the top bit. Each neighbouring pair differs in one
// bit, so each factor is a multi-controlled X; the chain is palindromic
// with exactly 2*span - 1 gates, each carrying span - 1 controls.
inline Circuit lower_center_switch(int span) {
  if (span < 2) throw std::invalid_argument("center-switch span must be >= 2");
  std::vector<std::uint64_t> chain;  // 2^{s-1}-1, 2^{s-2}-1, ..., 0, 2^{s-1}
  for (int k = span - 1; k >= 0; --k) chain.push_back((std::uint64_t{1} << k) - 1);
  chain.push_back(std::uint64_t{1} << (span - 1));

  std::vector<Gate> steps;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const std::uint64_t diff = chain[i - 1] ^ chain[i];
    const int target = std::countr_zero(diff);
    std::vector<ControlBit> controls;
    for (int q = 0; q < span; ++q) {
      if (q == target) continue;
      controls.push_back({q, static_cast<int>((chain[i] >> q) & 1)});
    }
    steps.push_back(gate::mcx(std::move(controls), target));
  }

  Circuit c(span);
  for (const Gate& g : steps) c.add(g);
  for (std::size_t i = steps.size() - 1; i-- > 0;) c.add(steps[i]);
  return c;
}

// ---------------------------------------------------------------------------
// Metrics

inline int gate_count(const Circuit& c) { return static_cast<int>(c.gates.size()); }

// Longest chain under "two gates conflict iff they share a qubit".
inline int depth(const Circuit& c) {
  std::vector<int> level(static_cast<std::size_t>(c.n), 0);
  int d = 0;
  for (const Gate& g : c.gates) {
    int at = 0;
    for (int q : g.qubits()) at = std::max(at, level[static_cast<std::size_t>(q)]);
    ++at;
    for (int q : g.qubits()) level[static_cast<std::size_t>(q)] = at;
    d = std::max(d, at);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Controlled circuits

inline Circuit controlled(const Circuit& c, int control) {
  for (const Gate& g : c.gates) {
    auto used = g.qubits();
    if (std::find(used.begin(), used.end(), control) != used.end())
      throw std::invalid_argument("control qubit collides with the circuit");
  }
  Circuit out(std::max(c.n, control + 1));
  for (const Gate& g : c.gates) out.add(gate::controlled(control, g));
  return out;
}

// ---------------------------------------------------------------------------
// Lowering to the CNOT+1q basis

namespace detail {

inline void lower_gate(const Gate& g, std::vector<Gate>& out);

inline void emit_cphase(int control, int target, double lambda, std::vector<Gate>& out) {
  out.push_back(gate::phase(control, lambda / 2));
  out.push_back(gate::phase(target, lambda / 2));
  out.push_back(gate::cx(control, target));
  out.push_back(gate::phase(target, -lambda / 2));
  out.push_back(gate::cx(control, target));
}

// Controlled X^s for fractional s, via X^s = H Phase(pi s) H.
inline void emit_cx_power(int control, int target, double s, std::vector<Gate>& out) {
  out.push_back(gate::h(target));
  emit_cphase(control, target, std::numbers::pi * s, out);
  out.push_back(gate::h(target));
}

inline void emit_x_power(int target, double s, std::vector<Gate>& out) {
  out.push_back(gate::h(target));
  out.push_back(gate::phase(target, std::numbers::pi * s));
  out.push_back(gate::h(target));
}

// Standard Toffoli over CNOT, H and T = Phase(pi/4).
inline void emit_toffoli(int a, int b, int t, std::vector<Gate>& out) {
  const double q = std::numbers::pi / 4;
  out.push_back(gate::h(t));
  out.push_back(gate::cx(b, t));
  out.push_back(gate::phase(t, -q));
  out.push_back(gate::cx(a, t));
  out.push_back(gate::phase(t, q));
  out.push_back(gate::cx(b, t));
  out.push_back(gate::phase(t, -q));
  out.push_back(gate::cx(a, t));
  out.push_back(gate::phase(b, q));
  out.push_back(gate::phase(t, q));
  out.push_back(gate::h(t));
  out.push_back(gate::cx(a, b));
  out.push_back(gate::phase(a, q));
  out.push_back(gate::phase(b, -q));
  out.push_back(gate::cx(a, b));
}

inline void emit_mcx(const std::vector<int>& controls, int target, std::vector<Gate>& out);

// Multi-controlled X^s (all controls positive), ancilla-free recursion:
// C^m(X^s) = CV(c_m,t) C^{m-1}X(...,c_m) CV^dag(c_m,t) C^{m-1}X(...,c_m)
//            C^{m-1}V(...,t)  with  V = X^{s/2}.
inline void emit_mc_x_power(const std::vector<int>& controls, int target, double s,
                            std::vector<Gate>& out) {
  if (controls.empty()) {
    emit_x_power(target, s, out);
    return;
  }
  if (controls.size() == 1) {
    emit_cx_power(controls[0], target, s, out);
    return;
  }
  const int last = controls.back();
  const std::vector<int> rest(controls.begin(), controls.end() - 1);
  emit_cx_power(last, target, s / 2, out);
  emit_mcx(rest, last, out);
  emit_cx_power(last, target, -s / 2, out);
  emit_mcx(rest, last, out);
  emit_mc_x_power(rest, target, s / 2, out);
}

inline void emit_mcx(const std::vector<int>& controls, int target, std::vector<Gate>& out) {
  if (controls.size() == 1) {
    out.push_back(gate::cx(controls[0], target));
    return;
  }
  if (controls.size() == 2) {
    emit_toffoli(controls[0], controls[1], target, out);
    return;
  }
  const int last = controls.back();
  const std::vector<int> rest(controls.begin(), controls.end() - 1);
  emit_cx_power(last, target, 0.5, out);
  emit_mcx(rest, last, out);
  emit_cx_power(last, target, -0.5, out);
  emit_mcx(rest, last, out);
  emit_mc_x_power(rest, target, 0.5, out);
}

inline void lower_mcx(const MultiControlledX& m, std::vector<Gate>& out) {
  // Negative controls become X-conjugation of that control line.
  std::vector<int> flips;
  std::vector<int> controls;
  for (const ControlBit& c : m.controls) {
    if (c.polarity == 0) flips.push_back(c.qubit);
    controls.push_back(c.qubit);
  }
  for (int q : flips) out.push_back(gate::x(q));
  emit_mcx(controls, m.target, out);
  for (int q : flips) out.push_back(gate::x(q));
}

// Exact controlled constructions for each 1q kind. Exactness (not just
// equality up to phase) matters: lowered gates get re-wrapped when nested
// controls are expanded.
inline void lower_controlled_one_q(int control, const OneQ& g, std::vector<Gate>& out) {
  const int t = g.qubit;
  const double pi = std::numbers::pi;
  switch (g.kind) {
    case OneQKind::I:
      break;
    case OneQKind::X:
      out.push_back(gate::cx(control, t));
      break;
    case OneQKind::Y:  // Y = S X S^dag
      out.push_back(gate::phase(t, -pi / 2));
      out.push_back(gate::cx(control, t));
      out.push_back(gate::phase(t, pi / 2));
      break;
    case OneQKind::Z:  // Z = H X H
      out.push_back(gate::h(t));
      out.push_back(gate::cx(control, t));
      out.push_back(gate::h(t));
      break;
    case OneQKind::H:  // H = RY(-pi/4) X RY(pi/4)
      out.push_back(gate::ry(t, pi / 4));
      out.push_back(gate::cx(control, t));
      out.push_back(gate::ry(t, -pi / 4));
      break;
    case OneQKind::RY:
      out.push_back(gate::ry(t, g.angle / 2));
      out.push_back(gate::cx(control, t));
      out.push_back(gate::ry(t, -g.angle / 2));
      out.push_back(gate::cx(control, t));
      break;
    case OneQKind::Phase:
      emit_cphase(control, t, g.angle, out);
      break;
  }
}

inline void lower_controlled(const Controlled& w, std::vector<Gate>& out) {
  const Gate& inner = *w.inner;
  if (const auto* q = std::get_if<OneQ>(&inner.op)) {
    lower_controlled_one_q(w.control, *q, out);
    return;
  }
  if (const auto* m = std::get_if<MultiControlledX>(&inner.op)) {
    auto controls = m->controls;
    controls.push_back({w.control, 1});
    lower_mcx(MultiControlledX{std::move(controls), m->target}, out);
    return;
  }
  // SWAP, center-switch, nested wrappers: lower the inner gate first (all
  // rules are exact, so re-wrapping each basis gate preserves semantics).
  std::vector<Gate> lowered_inner;
  lower_gate(inner, lowered_inner);
  for (const Gate& g : lowered_inner) lower_gate(gate::controlled(w.control, g), out);
}

inline void lower_gate(const Gate& g, std::vector<Gate>& out) {
  if (std::holds_alternative<OneQ>(g.op)) {
    out.push_back(g);
    return;
  }
  if (const auto* s = std::get_if<Swap>(&g.op)) {
    out.push_back(gate::cx(s->a, s->b));
    out.push_back(gate::cx(s->b, s->a));
    out.push_back(gate::cx(s->a, s->b));
    return;
  }
  if (const auto* cs = std::get_if<CenterSwitch>(&g.op)) {
    const Circuit mcx_form = lower_center_switch(cs->span);
    for (const Gate& step : mcx_form.gates) {
      const auto& m = std::get<MultiControlledX>(step.op);
      std::vector<ControlBit> shifted;
      for (const ControlBit& c : m.controls) shifted.push_back({c.qubit + cs->lo, c.polarity});
      lower_mcx(MultiControlledX{std::move(shifted), m.target + cs->lo}, out);
    }
    return;
  }
  if (const auto* m = std::get_if<MultiControlledX>(&g.op)) {
    if (m->controls.size() == 1 && m->controls[0].polarity == 1) {
      out.push_back(g);  // already a basis gate
    } else {
      lower_mcx(*m, out);
    }
    return;
  }
  if (const auto* w = std::get_if<Controlled>(&g.op)) {
    lower_controlled(*w, out);
    return;
  }
  throw std::invalid_argument("unknown gate variant");
}

}  // namespace detail

inline Circuit lower_to_basis(const Circuit& c) {
  Circuit out(c.n);
  std::vector<Gate> gates;
  for (const Gate& g : c.gates) detail::lower_gate(g, gates);
  for (Gate& g : gates) out.add(std::move(g));
  return out;
}

inline bool is_basis_gate(const Gate& g) {
  if (std::holds_alternative<OneQ>(g.op)) return true;
  if (const auto* m = std::get_if<MultiControlledX>(&g.op))
    return m->controls.size() == 1 && m->controls[0].polarity == 1;
  return false;
}

// ---------------------------------------------------------------------------
// Textual dump: one gate per line, `GATE q... [angle] [polarities]`.

inline std::string dump_gate(const Gate& g) {
  std::ostringstream os;
  if (const auto* q = std::get_if<OneQ>(&g.op)) {
    static constexpr const char* names[] = {"I", "X", "Y", "Z", "H", "RY", "PHASE"};
    os << names[static_cast<int>(q->kind)] << ' ' << q->qubit;
    if (q->kind == OneQKind::RY || q->kind == OneQKind::Phase)
      os << ' ' << format_double(q->angle);
  } else if (const auto* s = std::get_if<Swap>(&g.op)) {
    os << "SWAP " << s->a << ' ' << s->b;
  } else if (const auto* cs = std::get_if<CenterSwitch>(&g.op)) {
    os << "CS " << (cs->lo + cs->span - 1) << ' ' << cs->lo;
  } else if (const auto* m = std::get_if<MultiControlledX>(&g.op)) {
    os << "MCX " << m->target;
    for (const ControlBit& c : m->controls) os << ' ' << c.qubit;
    os << ' ';
    for (const ControlBit& c : m->controls) os << (c.polarity ? '1' : '0');
  } else if (const auto* w = std::get_if<Controlled>(&g.op)) {
    os << "C " << w->control << ' ' << dump_gate(*w->inner);
  }
  return os.str();
}

inline std::string dump(const Circuit& c) {
  std::string s;
  for (const Gate& g : c.gates) {
    s += dump_gate(g);
    s += '\n';
  }
  return s;
}

}  // namespace vqls
