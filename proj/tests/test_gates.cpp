#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "helpers.hpp"
#include "vqls/gates.hpp"
#include "vqls/statevector.hpp"

using namespace vqls;

namespace {

DenseMatrix gate_matrix(int n, const Gate& g) {
  Circuit c(n);
  c.add(g);
  return circuit_to_matrix(c);
}

}  // namespace

TEST_CASE("pauli_string_matrix against the Kronecker oracle", "[gates]") {
  SECTION("I1 X0 golden") {
    const DenseMatrix m = pauli_string_matrix(PauliString::from_label("IX"));
    DenseMatrix expected(4);
    expected.at(0, 1) = expected.at(1, 0) = expected.at(2, 3) = expected.at(3, 2) = 1.0;
    REQUIRE(max_abs_diff(m, expected) == 0.0);
  }
  SECTION("Z golden") {
    const DenseMatrix m = pauli_string_matrix(PauliString::from_label("Z"));
    REQUIRE(m.at(0, 0) == cdouble{1.0});
    REQUIRE(m.at(1, 1) == cdouble{-1.0});
    REQUIRE(m.at(0, 1) == cdouble{0.0});
  }
  SECTION("X1X0 + Y1Y0 couples only the middle pair") {
    const DenseMatrix sum = pauli_string_matrix(PauliString::from_label("XX")) +
                            pauli_string_matrix(PauliString::from_label("YY"));
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) {
        const bool coupled = (r == 1 && c == 2) || (r == 2 && c == 1);
        REQUIRE(std::abs(sum.at(r, c) - (coupled ? 2.0 : 0.0)) < tol::exact);
      }
  }
  SECTION("random labels match the oracle") {
    auto r = test::rng(7);
    const char letters[] = {'I', 'X', 'Y', 'Z'};
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 1 + static_cast<int>(r.uniform(0.0, 5.0));
      std::string label;
      for (int k = 0; k < n; ++k) label += letters[static_cast<int>(r.uniform(0.0, 4.0))];
      REQUIRE(max_abs_diff(pauli_string_matrix(PauliString::from_label(label)),
                           test::kron_oracle(label)) == 0.0);
    }
  }
  SECTION("length overflow") {
    PauliString p;
    p.letters.assign(11, Pauli::I);
    REQUIRE_THROWS_AS(pauli_string_matrix(p), std::invalid_argument);
  }
}

TEST_CASE("center_switch_matrix", "[gates]") {
  SECTION("span 2 is SWAP") {
    REQUIRE(max_abs_diff(center_switch_matrix(2), test::permutation_matrix({0, 2, 1, 3})) == 0.0);
  }
  SECTION("span 3 golden (8x8, indices 3 and 4 exchanged)") {
    REQUIRE(max_abs_diff(center_switch_matrix(3),
                         test::permutation_matrix({0, 1, 2, 4, 3, 5, 6, 7})) == 0.0);
  }
  SECTION("span 4 via the permutation oracle") {
    std::vector<std::size_t> image(16);
    for (std::size_t j = 0; j < 16; ++j) image[j] = j;
    std::swap(image[7], image[8]);
    REQUIRE(max_abs_diff(center_switch_matrix(4), test::permutation_matrix(image)) == 0.0);
  }
  SECTION("involution, exactly") {
    for (int span = 2; span <= 6; ++span) {
      const DenseMatrix u = center_switch_matrix(span);
      REQUIRE(max_abs_diff(u * u, DenseMatrix::identity(u.dim)) == 0.0);
    }
  }
  SECTION("span below 2 rejected") {
    REQUIRE_THROWS_AS(center_switch_matrix(1), std::invalid_argument);
    REQUIRE_THROWS_AS(lower_center_switch(1), std::invalid_argument);
  }
}

TEST_CASE("lower_center_switch", "[gates]") {
  SECTION("2span-1 gates with span-1 controls, matrix-exact for span 2..8") {
    for (int span = 2; span <= 8; ++span) {
      const Circuit c = lower_center_switch(span);
      REQUIRE(gate_count(c) == 2 * span - 1);
      for (const Gate& g : c.gates) {
        const auto& m = std::get<MultiControlledX>(g.op);
        REQUIRE(static_cast<int>(m.controls.size()) == span - 1);
      }
      REQUIRE(max_abs_diff(circuit_to_matrix(c), center_switch_matrix(span)) == 0.0);
    }
  }
  SECTION("span 3 realizes the five-transposition chain") {
    // (011,001)(001,000)(000,100)(001,000)(011,001): targets 1,0,2,0,1 with
    // the control patterns of the retained bits.
    const Circuit c = lower_center_switch(3);
    REQUIRE(gate_count(c) == 5);
    const int expect_target[5] = {1, 0, 2, 0, 1};
    const std::map<int, int> expect_controls[5] = {
        {{0, 1}, {2, 0}}, {{1, 0}, {2, 0}}, {{0, 0}, {1, 0}}, {{1, 0}, {2, 0}}, {{0, 1}, {2, 0}}};
    for (int i = 0; i < 5; ++i) {
      const auto& m = std::get<MultiControlledX>(c.gates[static_cast<std::size_t>(i)].op);
      REQUIRE(m.target == expect_target[i]);
      std::map<int, int> got;
      for (const ControlBit& cb : m.controls) got[cb.qubit] = cb.polarity;
      REQUIRE(got == expect_controls[i]);
    }
  }
  SECTION("span 2 is the three-gate SWAP construction") {
    const Circuit c = lower_center_switch(2);
    REQUIRE(gate_count(c) == 3);
    for (const Gate& g : c.gates)
      REQUIRE(std::get<MultiControlledX>(g.op).controls.size() == 1);
    REQUIRE(max_abs_diff(circuit_to_matrix(c), test::permutation_matrix({0, 2, 1, 3})) == 0.0);
  }
  SECTION("span 4 has 7 gates of 3 controls") {
    const Circuit c = lower_center_switch(4);
    REQUIRE(gate_count(c) == 7);
    for (const Gate& g : c.gates)
      REQUIRE(std::get<MultiControlledX>(g.op).controls.size() == 3);
  }
}

TEST_CASE("lower_to_basis preserves semantics", "[gates]") {
  SECTION("1q gates pass through") {
    Circuit c(1);
    c.add(gate::h(0));
    const Circuit low = lower_to_basis(c);
    REQUIRE(gate_count(low) == 1);
    REQUIRE(std::get<OneQ>(low.gates[0].op).kind == OneQKind::H);
  }
  SECTION("SWAP lowers to three controlled-X") {
    Circuit c(2);
    c.add(gate::swap(0, 1));
    const Circuit low = lower_to_basis(c);
    REQUIRE(gate_count(low) == 3);
    REQUIRE(max_abs_diff(circuit_to_matrix(low), circuit_to_matrix(c)) < tol::exact);
  }
  SECTION("per-variant matrix equality up to global phase, n <= 5") {
    std::vector<std::pair<int, Gate>> cases;
    cases.emplace_back(1, gate::x(0));
    cases.emplace_back(1, gate::y(0));
    cases.emplace_back(1, gate::z(0));
    cases.emplace_back(1, gate::h(0));
    cases.emplace_back(1, gate::ry(0, 0.77));
    cases.emplace_back(1, gate::phase(0, 1.3));
    cases.emplace_back(2, gate::swap(1, 0));
    cases.emplace_back(3, gate::swap(2, 0));
    cases.emplace_back(2, gate::center_switch(0, 2));
    cases.emplace_back(3, gate::center_switch(0, 3));
    cases.emplace_back(4, gate::center_switch(1, 3));
    cases.emplace_back(4, gate::center_switch(0, 4));
    cases.emplace_back(2, gate::mcx({{1, 0}}, 0));
    cases.emplace_back(3, gate::mcx({{0, 1}, {2, 0}}, 1));
    cases.emplace_back(4, gate::mcx({{0, 1}, {1, 1}, {3, 0}}, 2));
    cases.emplace_back(5, gate::mcx({{0, 0}, {1, 1}, {2, 0}, {4, 1}}, 3));
    cases.emplace_back(2, gate::controlled(1, gate::h(0)));
    cases.emplace_back(2, gate::controlled(1, gate::ry(0, -0.9)));
    cases.emplace_back(2, gate::controlled(1, gate::y(0)));
    cases.emplace_back(2, gate::controlled(1, gate::phase(0, 0.4)));
    cases.emplace_back(3, gate::controlled(2, gate::swap(1, 0)));
    cases.emplace_back(4, gate::controlled(3, gate::center_switch(0, 3)));
    cases.emplace_back(3, gate::controlled(2, gate::controlled(1, gate::x(0))));
    cases.emplace_back(4, gate::controlled(3, gate::controlled(2, gate::h(0))));
    for (const auto& [n, g] : cases) {
      Circuit c(n);
      c.add(g);
      const Circuit low = lower_to_basis(c);
      for (const Gate& lg : low.gates) REQUIRE(is_basis_gate(lg));
      REQUIRE(phase_insensitive_distance(circuit_to_matrix(c), circuit_to_matrix(low)) <
              tol::composed);
    }
  }
  SECTION("center switch basis circuit matches the 8x8 golden up to phase") {
    Circuit c(3);
    c.add(gate::center_switch(0, 3));
    REQUIRE(phase_insensitive_distance(center_switch_matrix(3),
                                       circuit_to_matrix(lower_to_basis(c))) < tol::composed);
  }
}

TEST_CASE("depth and gate_count", "[gates]") {
  SECTION("disjoint gates stack") {
    Circuit c(2);
    c.add(gate::h(0));
    c.add(gate::h(1));
    REQUIRE(depth(c) == 1);
    REQUIRE(gate_count(c) == 2);
  }
  SECTION("same-qubit gates chain") {
    Circuit c(1);
    c.add(gate::h(0));
    c.add(gate::x(0));
    REQUIRE(depth(c) == 2);
  }
  SECTION("lowered SWAP is depth 3, count 3") {
    Circuit c(2);
    c.add(gate::swap(0, 1));
    const Circuit low = lower_to_basis(c);
    REQUIRE(depth(low) == 3);
    REQUIRE(gate_count(low) == 3);
  }
  SECTION("depth is invariant under qubit relabeling") {
    Circuit c(4);
    c.add(gate::h(0));
    c.add(gate::cx(0, 2));
    c.add(gate::swap(1, 3));
    c.add(gate::mcx({{0, 1}, {3, 0}}, 2));
    c.add(gate::ry(1, 0.3));
    // relabel via conjugation by an outer permutation of the labels
    Circuit relabeled(4);
    const int perm[4] = {2, 0, 3, 1};
    for (const Gate& g : c.gates) {
      if (const auto* q = std::get_if<OneQ>(&g.op)) {
        relabeled.add(gate::one_q(q->kind, perm[q->qubit], q->angle));
      } else if (const auto* s = std::get_if<Swap>(&g.op)) {
        relabeled.add(gate::swap(perm[s->a], perm[s->b]));
      } else if (const auto* m = std::get_if<MultiControlledX>(&g.op)) {
        std::vector<ControlBit> ctrls;
        for (const ControlBit& cb : m->controls) ctrls.push_back({perm[cb.qubit], cb.polarity});
        relabeled.add(gate::mcx(ctrls, perm[m->target]));
      }
    }
    REQUIRE(depth(relabeled) == depth(c));
  }
  SECTION("lowering never shrinks multi-qubit circuits") {
    Circuit c(3);
    c.add(gate::center_switch(0, 3));
    c.add(gate::swap(0, 2));
    c.add(gate::mcx({{0, 0}, {1, 1}}, 2));
    REQUIRE(gate_count(lower_to_basis(c)) >= gate_count(c));
  }
}

TEST_CASE("controlled circuits", "[gates]") {
  SECTION("controlled empty circuit is the identity") {
    const Circuit wrapped = controlled(Circuit(2), 2);
    REQUIRE(wrapped.n == 3);
    REQUIRE(max_abs_diff(circuit_to_matrix(wrapped), DenseMatrix::identity(8)) == 0.0);
  }
  SECTION("controlled X golden") {
    Circuit c(1);
    c.add(gate::x(0));
    const DenseMatrix m = circuit_to_matrix(controlled(c, 1));
    REQUIRE(max_abs_diff(m, test::permutation_matrix({0, 1, 3, 2})) == 0.0);
  }
  SECTION("controlled SWAP equals the Fredkin permutation") {
    Circuit c(2);
    c.add(gate::swap(1, 0));
    std::vector<std::size_t> image = {0, 1, 2, 3, 4, 6, 5, 7};  // swap |101> <-> |110>
    REQUIRE(max_abs_diff(circuit_to_matrix(controlled(c, 2)),
                         test::permutation_matrix(image)) == 0.0);
  }
  SECTION("block structure [I 0; 0 U]") {
    Circuit c(2);
    c.add(gate::ry(0, 1.1));
    c.add(gate::cx(0, 1));
    c.add(gate::h(1));
    const DenseMatrix u = circuit_to_matrix(c);
    const DenseMatrix w = circuit_to_matrix(controlled(c, 2));
    for (std::size_t rr = 0; rr < 4; ++rr)
      for (std::size_t cc = 0; cc < 4; ++cc) {
        REQUIRE(std::abs(w.at(rr, cc) - (rr == cc ? 1.0 : 0.0)) < tol::exact);
        REQUIRE(std::abs(w.at(rr + 4, cc + 4) - u.at(rr, cc)) < tol::exact);
        REQUIRE(std::abs(w.at(rr, cc + 4)) < tol::exact);
        REQUIRE(std::abs(w.at(rr + 4, cc)) < tol::exact);
      }
  }
  SECTION("control collision") {
    Circuit c(2);
    c.add(gate::cx(0, 1));
    REQUIRE_THROWS_AS(controlled(c, 1), std::invalid_argument);
  }
}

TEST_CASE("every gate variant assembles to a unitary", "[gates]") {
  std::vector<std::pair<int, Gate>> cases;
  cases.emplace_back(2, gate::i(0));
  cases.emplace_back(2, gate::x(1));
  cases.emplace_back(2, gate::y(0));
  cases.emplace_back(2, gate::z(1));
  cases.emplace_back(2, gate::h(0));
  cases.emplace_back(2, gate::ry(1, 2.2));
  cases.emplace_back(2, gate::phase(0, -0.8));
  cases.emplace_back(3, gate::swap(0, 2));
  cases.emplace_back(4, gate::center_switch(0, 4));
  cases.emplace_back(5, gate::center_switch(2, 3));
  cases.emplace_back(5, gate::mcx({{0, 1}, {1, 0}, {4, 1}}, 2));
  cases.emplace_back(3, gate::controlled(2, gate::ry(0, 0.5)));
  for (const auto& [n, g] : cases) {
    Circuit c(n);
    c.add(g);
    REQUIRE(is_unitary(circuit_to_matrix(c), tol::exact));
  }
}

TEST_CASE("adjoint reverses a circuit", "[gates]") {
  Circuit c(3);
  c.add(gate::ry(0, 0.9));
  c.add(gate::center_switch(0, 3));
  c.add(gate::phase(2, 0.3));
  c.add(gate::cx(1, 2));
  const DenseMatrix u = circuit_to_matrix(c);
  const DenseMatrix udag = circuit_to_matrix(c.adjoint());
  REQUIRE(max_abs_diff(u * udag, DenseMatrix::identity(8)) < tol::exact);
}

TEST_CASE("circuit dump format", "[gates]") {
  Circuit c(3);
  c.add(gate::h(0));
  c.add(gate::ry(1, 0.5));
  c.add(gate::swap(2, 0));
  c.add(gate::center_switch(0, 3));
  c.add(gate::mcx({{0, 1}, {2, 0}}, 1));
  c.add(gate::controlled(2, gate::x(0)));
  const std::string text = dump(c);
  REQUIRE(text ==
          "H 0\n"
          "RY 1 0.5\n"
          "SWAP 2 0\n"
          "CS 2 0\n"
          "MCX 1 0 2 10\n"
          "C 2 X 0\n");
}
