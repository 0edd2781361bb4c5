// Nelder-Mead downhill simplex with the standard coefficients (reflection 1,
// expansion 2, contraction 0.5, shrink 0.5).

#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace vqls {

struct NelderMeadOptions {
  int max_evals = 500;
  double tol = 1e-6;        // stop when f_worst - f_best < tol
  double initial_step = 0.5;
  // Called once per iteration with the current best vertex.
  std::function<void(int iter, const std::vector<double>& best_x, double best_f)> on_iterate;
};

struct NelderMeadResult {
  std::vector<double> best_x;
  double best_f = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;  // tolerance met before the evaluation budget ran out
};

inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& x0,
                                    const NelderMeadOptions& opts) {
  if (x0.empty()) throw std::invalid_argument("empty initial point");
  if (opts.max_evals < 1) throw std::invalid_argument("max_evals must be >= 1");
  const std::size_t d = x0.size();

  NelderMeadResult res;
  res.best_x = x0;
  res.best_f = std::numeric_limits<double>::infinity();
  struct BudgetExhausted {};
  auto eval = [&](const std::vector<double>& x) {
    if (res.evaluations >= opts.max_evals) throw BudgetExhausted{};
    ++res.evaluations;
    const double v = f(x);
    if (v < res.best_f) {
      res.best_f = v;
      res.best_x = x;
    }
    return v;
  };

  std::vector<std::vector<double>> verts(d + 1, x0);
  for (std::size_t k = 0; k < d; ++k) verts[k + 1][k] += opts.initial_step;
  std::vector<double> fv(d + 1, std::numeric_limits<double>::infinity());

  auto order = [&]() {
    std::vector<std::size_t> idx(d + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> v2(d + 1);
    std::vector<double> f2(d + 1);
    for (std::size_t k = 0; k <= d; ++k) {
      v2[k] = verts[idx[k]];
      f2[k] = fv[idx[k]];
    }
    verts.swap(v2);
    fv.swap(f2);
  };

  try {
    for (std::size_t k = 0; k <= d; ++k) fv[k] = eval(verts[k]);
    order();
    if (opts.on_iterate) opts.on_iterate(res.iterations, verts[0], fv[0]);

    while (fv[d] - fv[0] >= opts.tol) {
      std::vector<double> centroid(d, 0.0);
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = 0; i < d; ++i) centroid[i] += verts[k][i] / static_cast<double>(d);

      auto blend = [&](const std::vector<double>& from, double c) {
        std::vector<double> p(d);
        for (std::size_t i = 0; i < d; ++i) p[i] = centroid[i] + c * (centroid[i] - from[i]);
        return p;
      };

      const std::vector<double> xr = blend(verts[d], 1.0);
      const double fr = eval(xr);
      if (fr < fv[0]) {
        const std::vector<double> xe = blend(verts[d], 2.0);
        const double fe = eval(xe);
        if (fe < fr) {
          verts[d] = xe;
          fv[d] = fe;
        } else {
          verts[d] = xr;
          fv[d] = fr;
        }
      } else if (fr < fv[d - 1]) {
        verts[d] = xr;
        fv[d] = fr;
      } else {
        const bool outside = fr < fv[d];
        const std::vector<double> xc = outside ? blend(verts[d], 0.5) : blend(verts[d], -0.5);
        const double fc = eval(xc);
        if (fc < (outside ? fr : fv[d])) {
          verts[d] = xc;
          fv[d] = fc;
        } else {
          for (std::size_t k = 1; k <= d; ++k) {
            for (std::size_t i = 0; i < d; ++i)
              verts[k][i] = verts[0][i] + 0.5 * (verts[k][i] - verts[0][i]);
            fv[k] = eval(verts[k]);
          }
        }
      }
      order();
      ++res.iterations;
      if (opts.on_iterate) opts.on_iterate(res.iterations, verts[0], fv[0]);
    }
    res.converged = true;
  } catch (const BudgetExhausted&) {
    // Budget ran out mid-step; the tracked best stands.
  }

  return res;
}

}  // namespace vqls
