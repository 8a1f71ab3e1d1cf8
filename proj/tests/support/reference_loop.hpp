#pragma once

// Straight-line reference implementation of the fully parallel update on a
// lasso instance: every coordinate recomputes its exact scalar best response
// from the running residual, then the damped step is applied to all of them.
// No sampling, no greedy filter, no worker pool. Expressions mirror the
// production formulas exactly so the two paths can be compared bit for bit.

#include <cmath>
#include <vector>

#include "hyflexa/lasso.hpp"

namespace testsupport {

struct ReferenceRow {
  double objective;
  double residual;
  double gamma;
};

struct ReferenceRun {
  std::vector<ReferenceRow> rows;
  hyflexa::Vec x;
};

inline ReferenceRun reference_full_update(const hyflexa::LassoProblem& p,
                                          const std::vector<double>& tau, double gamma0,
                                          double theta, int iters) {
  using hyflexa::SpMat;
  using hyflexa::Vec;
  const int n = p.n();
  const int m = p.m();

  Vec x = Vec::Zero(n);
  Vec r = -p.b;  // A*0 - b
  Vec z(n);
  double gamma = gamma0;

  ReferenceRun out;
  out.rows.reserve(static_cast<std::size_t>(iters));

  for (int k = 0; k < iters; ++k) {
    double f = 0.0;
    for (int j = 0; j < m; ++j) f += r[j] * r[j];
    double g1 = 0.0;
    for (int i = 0; i < n; ++i) g1 += std::abs(x[i]);
    const double objective = f + p.c * g1;

    double residual = 0.0;
    for (int i = 0; i < n; ++i) {
      const double csq = p.column_sq_norms[i];
      const double ti = tau[static_cast<std::size_t>(i)];
      const double q = 2.0 * csq + ti;
      const double xi = x[i];
      double atr = 0.0;
      for (SpMat::InnerIterator it(p.A, i); it; ++it) atr += it.value() * r[it.row()];
      const double u = (2.0 * (csq * xi - atr) + ti * xi) / q;
      z[i] = std::copysign(std::max(std::abs(u) - p.c / q, 0.0), u);
      residual = std::max(residual, std::abs(z[i] - xi));
    }

    out.rows.push_back({objective, residual, gamma});

    for (int i = 0; i < n; ++i) {
      const double delta = gamma * (z[i] - x[i]);
      x[i] += delta;
      for (SpMat::InnerIterator it(p.A, i); it; ++it) r[it.row()] += it.value() * delta;
    }

    gamma = gamma * (1.0 - theta * gamma);
  }

  out.x = std::move(x);
  return out;
}

}  // namespace testsupport
