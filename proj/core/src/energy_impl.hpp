#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace ptorsion::detail {

template <class FG>
SpgOutcome spg_minimize(FG&& fg, std::vector<double>& u, const SpgOptions& opts) {
  constexpr double kArmijo = 1e-4;
  constexpr double kStepMin = 1e-30;
  constexpr double kStepMax = 1e30;
  constexpr double kRoundoff = 1e-12;

  const std::size_t n = u.size();
  const LaplacianMetric* metric = opts.metric;
  for (auto& v : u) v = std::max(v, 0.0);

  std::vector<double> g(n), mg(n), trial(n), g_trial(n), d(n), s(n);
  auto precondition = [&] {
    if (metric)
      metric->solve(g, mg);
    else
      std::copy(g.begin(), g.end(), mg.begin());
  };

  double f = fg(std::span<const double>(u), std::span<double>(g));
  std::deque<double> history{f};

  SpgOutcome out;
  out.residual = projected_gradient_norm(u, g);
  precondition();
  auto restart_step = [&] {
    if (metric) return 1.0;
    return out.residual > 0.0 ? 1.0 / out.residual : 1.0;
  };
  double step = restart_step();

  while (out.residual > opts.tol) {
    if (out.iterations >= opts.max_iter) return out;
    ++out.iterations;

    double gtd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = std::max(u[i] - step * mg[i], 0.0) - u[i];
      gtd += g[i] * d[i];
    }
    const double f_ref = *std::max_element(history.begin(), history.end());
    // Near the optimum f changes drown in rounding; allow that much slack.
    const double slack = kRoundoff * std::abs(f_ref);

    double lambda = 1.0;
    double f_trial = 0.0;
    for (;;) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = std::max(u[i] + lambda * d[i], 0.0);
      f_trial = fg(std::span<const double>(trial), std::span<double>(g_trial));
      if (f_trial <= f_ref + kArmijo * lambda * gtd + slack) break;
      if (lambda < 1e-10) break;
      const double denom = f_trial - f - lambda * gtd;
      double next = denom > 0.0 ? -0.5 * lambda * lambda * gtd / denom : 0.5 * lambda;
      if (!(next >= 0.1 * lambda && next <= 0.9 * lambda)) next = 0.5 * lambda;
      lambda = next;
    }

    double sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = trial[i] - u[i];
      sy += s[i] * (g_trial[i] - g[i]);
    }
    double ss = 0.0;
    if (metric) {
      ss = metric->norm_sq(s);
    } else {
      for (double v : s) ss += v * v;
    }
    u.swap(trial);
    g.swap(g_trial);
    f = f_trial;
    history.push_back(f);
    if (history.size() > static_cast<std::size_t>(opts.memory)) history.pop_front();

    out.residual = projected_gradient_norm(u, g);
    precondition();
    step = sy > 0.0 ? std::clamp(ss / sy, kStepMin, kStepMax) : restart_step();
  }
  out.converged = true;
  return out;
}

}  // namespace ptorsion::detail
