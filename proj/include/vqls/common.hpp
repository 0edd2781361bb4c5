// Shared scalar types, centralized tolerances, bit utilities and the
// counter-based RNG that backs all shot-sampling streams.

#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <string>

namespace vqls {

using cdouble = std::complex<double>;

namespace tol {
// Exact algebra: assembly, reconstruction residuals, unitarity.
inline constexpr double exact = 1e-12;
// Composed pipelines: lowered circuits, multi-step cost identities.
inline constexpr double composed = 1e-10;
// Zero-coefficient pruning, relative to the largest |c| in a decomposition.
inline constexpr double prune = 1e-12;
}  // namespace tol

inline std::size_t dim_of(int n_qubits) { return std::size_t{1} << n_qubits; }

inline int parity64(std::uint64_t x) { return std::popcount(x) & 1; }

// SplitMix64 finalizer. Bijective, so distinct counters give distinct draws.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double unit_double(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;  // [0, 1)
}

// Derives an independent stream key from up to four components.
inline std::uint64_t stream_key(std::uint64_t a, std::uint64_t b = 0,
                                std::uint64_t c = 0, std::uint64_t d = 0) {
  std::uint64_t k = mix64(a);
  k = mix64(k ^ (b + 0xd1b54a32d192ed03ULL));
  k = mix64(k ^ (c + 0x8cb92ba72f3d8dd7ULL));
  k = mix64(k ^ (d + 0x2545f4914f6cdd1dULL));
  return k;
}

// Stateless counter stream: draw i of stream `key` is always the same value.
struct CounterRng {
  std::uint64_t key = 0;
  std::uint64_t counter = 0;

  explicit CounterRng(std::uint64_t k) : key(k) {}

  double uniform() { return unit_double(mix64(key + 0x9e3779b97f4a7c15ULL * ++counter)); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

// Round-trippable float formatting (17 significant digits, '.' decimal).
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace vqls
