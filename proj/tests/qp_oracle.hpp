#pragma once

// Reference C-SVC dual solver for cross-checking the production solver:
// projected-gradient descent with an exact projection onto the feasible set
// {0 <= alpha <= c, y'alpha = 0} (bisection on the dual shift). Slow and
// simple on purpose; shares no code with the solver under test.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rtc/svm.hpp"

namespace oracle {

struct QpResult {
  std::vector<double> alpha;
  double objective = 0.0;
  double bias = 0.0;
};

inline std::vector<double> project_box_hyperplane(const std::vector<double>& v,
                                                  const std::vector<int>& y, double c) {
  const auto clip = [c](double a) { return std::min(c, std::max(0.0, a)); };
  const auto constraint = [&](double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += y[i] * clip(v[i] - t * y[i]);
    return s;
  };
  double bound = c + 1.0;
  for (double x : v) bound = std::max(bound, std::fabs(x) + c + 1.0);
  double lo = -bound, hi = bound;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (constraint(mid) > 0.0 ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = clip(v[i] - t * y[i]);
  return out;
}

inline QpResult qp_reference(const std::vector<std::vector<double>>& x,
                             const std::vector<int>& y, double c,
                             const rtc::KernelSpec& kernel, int iterations = 200000) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> q(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      q[i][j] = y[i] * y[j] * rtc::kernel_eval(kernel, x[i], x[j]);
    }
  }
  // Gershgorin bound on the largest eigenvalue fixes a safe step size.
  double lmax = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::fabs(q[i][j]);
    lmax = std::max(lmax, row);
  }
  const double step = 1.0 / lmax;

  std::vector<double> alpha(n, 0.0), grad(n), next(n);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double g = -1.0;
      for (std::size_t j = 0; j < n; ++j) g += q[i][j] * alpha[j];
      grad[i] = g;
    }
    for (std::size_t i = 0; i < n; ++i) next[i] = alpha[i] - step * grad[i];
    next = project_box_hyperplane(next, y, c);
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) moved += std::fabs(next[i] - alpha[i]);
    alpha.swap(next);
    if (moved < 1e-14) break;
  }

  QpResult res;
  double quad = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lin += alpha[i];
    for (std::size_t j = 0; j < n; ++j) quad += alpha[i] * alpha[j] * q[i][j];
  }
  res.objective = 0.5 * quad - lin;

  // The iterates park within rounding error of the box bounds; snap before the
  // KKT bookkeeping so the bound/free classification below is exact.
  for (double& a : alpha) {
    if (a < 1e-9 * c) {
      a = 0.0;
    } else if (a > (1.0 - 1e-9) * c) {
      a = c;
    }
  }
  res.alpha = alpha;

  // Bias from the free vectors; fall back to the KKT interval midpoint.
  double free_sum = 0.0;
  int free_count = 0;
  std::vector<double> u(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      u[i] += alpha[j] * y[j] * rtc::kernel_eval(kernel, x[j], x[i]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > 1e-8 * c && alpha[i] < (1.0 - 1e-8) * c) {
      free_sum += y[i] - u[i];
      ++free_count;
    }
  }
  if (free_count > 0) {
    res.bias = free_sum / free_count;
  } else {
    double up = -std::numeric_limits<double>::infinity();
    double low = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double v = y[i] - u[i];
      const bool can_grow = y[i] == +1 ? alpha[i] < c : alpha[i] > 0.0;
      const bool can_shrink = y[i] == +1 ? alpha[i] > 0.0 : alpha[i] < c;
      if (can_grow) up = std::max(up, v);
      if (can_shrink) low = std::min(low, v);
    }
    res.bias = 0.5 * (up + low);
  }
  return res;
}

inline double oracle_decision(const QpResult& r, const std::vector<std::vector<double>>& x,
                              const std::vector<int>& y, const rtc::KernelSpec& kernel,
                              const std::vector<double>& query) {
  double v = r.bias;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (r.alpha[i] > 0.0) v += r.alpha[i] * y[i] * rtc::kernel_eval(kernel, x[i], query);
  }
  return v;
}

}  // namespace oracle
