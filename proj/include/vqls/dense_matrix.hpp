// Dense row-major complex matrices, sized for verification work (dim <= 2^10).

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vqls/common.hpp"

namespace vqls {

struct DenseMatrix {
  std::size_t dim = 0;
  std::vector<cdouble> entries;  // row-major

  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t d) : dim(d), entries(d * d) {}

  static DenseMatrix identity(std::size_t d) {
    DenseMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) m.at(i, i) = 1.0;
    return m;
  }

  cdouble& at(std::size_t r, std::size_t c) { return entries[r * dim + c]; }
  const cdouble& at(std::size_t r, std::size_t c) const { return entries[r * dim + c]; }

  DenseMatrix adjoint() const {
    DenseMatrix m(dim);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) m.at(c, r) = std::conj(at(r, c));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const cdouble& e : entries) s += std::norm(e);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const cdouble& e : entries) m = std::max(m, std::abs(e));
    return m;
  }
};

inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.dim != b.dim) throw std::invalid_argument("matrix dimension mismatch");
  DenseMatrix r(a.dim);
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t k = 0; k < a.dim; ++k) {
      const cdouble aik = a.at(i, k);
      if (aik == cdouble{}) continue;
      for (std::size_t j = 0; j < a.dim; ++j) r.at(i, j) += aik * b.at(k, j);
    }
  return r;
}

inline DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.dim != b.dim) throw std::invalid_argument("matrix dimension mismatch");
  DenseMatrix r(a.dim);
  for (std::size_t i = 0; i < r.entries.size(); ++i) r.entries[i] = a.entries[i] + b.entries[i];
  return r;
}

inline DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.dim != b.dim) throw std::invalid_argument("matrix dimension mismatch");
  DenseMatrix r(a.dim);
  for (std::size_t i = 0; i < r.entries.size(); ++i) r.entries[i] = a.entries[i] - b.entries[i];
  return r;
}

inline DenseMatrix operator*(cdouble s, const DenseMatrix& a) {
  DenseMatrix r(a.dim);
  for (std::size_t i = 0; i < r.entries.size(); ++i) r.entries[i] = s * a.entries[i];
  return r;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.dim != b.dim) throw std::invalid_argument("matrix dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    m = std::max(m, std::abs(a.entries[i] - b.entries[i]));
  return m;
}

inline bool is_hermitian(const DenseMatrix& a, double tolerance) {
  for (std::size_t r = 0; r < a.dim; ++r)
    for (std::size_t c = r; c < a.dim; ++c)
      if (std::abs(a.at(r, c) - std::conj(a.at(c, r))) > tolerance) return false;
  return true;
}

inline bool is_unitary(const DenseMatrix& a, double tolerance) {
  return max_abs_diff(a.adjoint() * a, DenseMatrix::identity(a.dim)) <= tolerance;
}

// Entrywise distance after cancelling a global phase; the phase is read off
// the first entry of `a` whose modulus is significant.
inline double phase_insensitive_distance(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.dim != b.dim) throw std::invalid_argument("matrix dimension mismatch");
  const double scale = a.max_abs();
  if (scale == 0.0) return b.max_abs();
  std::size_t pivot = 0;
  while (pivot < a.entries.size() && std::abs(a.entries[pivot]) < 0.5 * scale) ++pivot;
  const cdouble ratio = b.entries[pivot] / a.entries[pivot];
  const double mod = std::abs(ratio);
  const cdouble phase = (mod > 0.0) ? ratio / mod : cdouble{1.0};
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    m = std::max(m, std::abs(phase * a.entries[i] - b.entries[i]));
  return m;
}

}  // namespace vqls
