// Test-only utilities: seeded generators and independent oracles (Kronecker
// expansion, permutation matrices, dense solves) kept separate from the
// implementation paths they check.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vqls/common.hpp"
#include "vqls/dense_matrix.hpp"
#include "vqls/statevector.hpp"

namespace test {

using vqls::cdouble;
using vqls::DenseMatrix;
using vqls::StateVector;

inline vqls::CounterRng rng(std::uint64_t seed) { return vqls::CounterRng(vqls::stream_key(seed)); }

inline StateVector random_state(int n, vqls::CounterRng& r) {
  std::vector<cdouble> amps(vqls::dim_of(n));
  for (cdouble& a : amps) a = {r.uniform(-1.0, 1.0), r.uniform(-1.0, 1.0)};
  return StateVector(n, std::move(amps)).normalized();
}

// Kronecker product, right factor least significant (qubit 0 rightmost).
inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.dim * b.dim);
  for (std::size_t ar = 0; ar < a.dim; ++ar)
    for (std::size_t ac = 0; ac < a.dim; ++ac)
      for (std::size_t br = 0; br < b.dim; ++br)
        for (std::size_t bc = 0; bc < b.dim; ++bc)
          out.at(ar * b.dim + br, ac * b.dim + bc) = a.at(ar, ac) * b.at(br, bc);
  return out;
}

inline DenseMatrix pauli_2x2(char letter) {
  DenseMatrix m(2);
  switch (letter) {
    case 'I': m.at(0, 0) = 1; m.at(1, 1) = 1; break;
    case 'X': m.at(0, 1) = 1; m.at(1, 0) = 1; break;
    case 'Y': m.at(0, 1) = {0, -1}; m.at(1, 0) = {0, 1}; break;
    case 'Z': m.at(0, 0) = 1; m.at(1, 1) = -1; break;
    default: throw std::invalid_argument("bad Pauli letter");
  }
  return m;
}

// Oracle: direct Kronecker expansion of a label read highest qubit first.
inline DenseMatrix kron_oracle(const std::string& label) {
  DenseMatrix m = pauli_2x2(label[0]);
  for (std::size_t i = 1; i < label.size(); ++i) m = kron(m, pauli_2x2(label[i]));
  return m;
}

// Oracle: permutation matrix from an index map.
inline DenseMatrix permutation_matrix(const std::vector<std::size_t>& image) {
  DenseMatrix m(image.size());
  for (std::size_t col = 0; col < image.size(); ++col) m.at(image[col], col) = 1.0;
  return m;
}

// Oracle: dense solve by Gaussian elimination with partial pivoting.
inline std::vector<cdouble> dense_solve(DenseMatrix a, std::vector<cdouble> b) {
  const std::size_t n = a.dim;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a.at(r, col)) > std::abs(a.at(piv, col))) piv = r;
    if (std::abs(a.at(piv, col)) < 1e-14) throw std::runtime_error("singular system in oracle");
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a.at(piv, c), a.at(col, c));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const cdouble f = a.at(r, col) / a.at(col, col);
      for (std::size_t c = col; c < n; ++c) a.at(r, c) -= f * a.at(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<cdouble> x(n);
  for (std::size_t r = n; r-- > 0;) {
    cdouble s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a.at(r, c) * x[c];
    x[r] = s / a.at(r, r);
  }
  return x;
}

inline double max_amp_diff(const StateVector& a, const StateVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    m = std::max(m, std::abs(a.amplitudes[i] - b.amplitudes[i]));
  return m;
}

}  // namespace test
