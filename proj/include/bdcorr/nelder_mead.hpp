#pragma once

// Derivative-free downhill simplex minimization.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "bdcorr/error.hpp"

namespace bdcorr {

struct OptimizerConfig {
  int starts = 32;
  int max_iters = 2000;
  double f_tol = 1e-12;
  double x_tol = 1e-10;
  std::uint64_t seed = 42;
  // Seed the oracles with the closed-form witnesses in addition to the
  // random starts. Turning it off gives a cold, fully independent search.
  bool analytic_warm_start = true;

  void validate() const {
    if (starts < 1) throw Error(ErrorKind::InvalidState, "optimizer needs at least one start");
    if (max_iters < 1) throw Error(ErrorKind::InvalidState, "optimizer needs max_iters >= 1");
    if (!(f_tol > 0.0) || !(x_tol > 0.0)) {
      throw Error(ErrorKind::InvalidState, "optimizer tolerances must be positive");
    }
  }
};

struct MinimizeResult {
  std::vector<double> argmin;
  double min = 0.0;
  int iterations = 0;
  bool converged = false;  // false when max_iters was hit
};

// Standard coefficients: reflection 1, expansion 2, contraction 1/2,
// shrink 1/2. The initial simplex offsets each coordinate of `start` by
// `step`. Deterministic in (objective, start, cfg, step).
template <class Objective>
MinimizeResult nelder_mead(Objective&& objective, std::span<const double> start,
                           const OptimizerConfig& cfg, double step = 0.25) {
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  const std::size_t n = start.size();
  std::vector<std::vector<double>> x(n + 1, std::vector<double>(start.begin(), start.end()));
  for (std::size_t i = 0; i < n; ++i) x[i + 1][i] += step;
  std::vector<double> fx(n + 1);
  for (std::size_t j = 0; j <= n; ++j) fx[j] = objective(std::span<const double>(x[j]));

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  auto eval = [&](const std::vector<double>& p) { return objective(std::span<const double>(p)); };

  MinimizeResult result;
  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double diameter = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(x[j][i] - x[best][i]));
      diameter = std::max(diameter, d);
    }
    if (fx[worst] - fx[best] < cfg.f_tol || diameter < cfg.x_tol) {
      result.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t j = 0; j <= n; ++j) {
      if (j == worst) continue;
      for (std::size_t i = 0; i < n; ++i) centroid[i] += x[j][i];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    for (std::size_t i = 0; i < n; ++i) trial[i] = centroid[i] + kReflect * (centroid[i] - x[worst][i]);
    const double fr = eval(trial);

    if (fr < fx[best]) {
      for (std::size_t i = 0; i < n; ++i) trial2[i] = centroid[i] + kExpand * (trial[i] - centroid[i]);
      const double fe = eval(trial2);
      if (fe < fr) {
        x[worst] = trial2;
        fx[worst] = fe;
      } else {
        x[worst] = trial;
        fx[worst] = fr;
      }
      continue;
    }
    if (fr < fx[second]) {
      x[worst] = trial;
      fx[worst] = fr;
      continue;
    }

    const bool outside = fr < fx[worst];
    const std::vector<double>& towards = outside ? trial : x[worst];
    for (std::size_t i = 0; i < n; ++i) trial2[i] = centroid[i] + kContract * (towards[i] - centroid[i]);
    const double fc = eval(trial2);
    if (fc < (outside ? fr : fx[worst])) {
      x[worst] = trial2;
      fx[worst] = fc;
      continue;
    }

    for (std::size_t j = 0; j <= n; ++j) {
      if (j == best) continue;
      for (std::size_t i = 0; i < n; ++i) x[j][i] = x[best][i] + kShrink * (x[j][i] - x[best][i]);
      fx[j] = eval(x[j]);
    }
  }

  const auto best_it = std::min_element(fx.begin(), fx.end());
  const auto best = static_cast<std::size_t>(best_it - fx.begin());
  result.argmin = x[best];
  result.min = fx[best];
  result.iterations = iter;
  return result;
}

// Runs nelder_mead repeatedly from its own optimum with a shrinking step
// until a restart no longer improves. Restarts help on non-smooth
// objectives where the simplex collapses on a kink.
template <class Objective>
MinimizeResult nelder_mead_restarted(Objective&& objective, std::span<const double> start,
                                     const OptimizerConfig& cfg, double step = 0.25,
                                     int max_restarts = 4) {
  MinimizeResult best = nelder_mead(objective, start, cfg, step);
  for (int k = 0; k < max_restarts; ++k) {
    step *= 0.25;
    MinimizeResult next = nelder_mead(objective, std::span<const double>(best.argmin), cfg, step);
    const bool improved = next.min < best.min - 1e-14;
    next.iterations += best.iterations;
    if (next.min <= best.min) best = std::move(next);
    if (!improved) break;
  }
  return best;
}

}  // namespace bdcorr
