#include "ptorsion/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "energy.hpp"
#include "ptorsion/error.hpp"

namespace ptorsion {

namespace {

double power_sum(std::span<const double> u, double q) {
  double s = 0.0;
  for (double v : u) s += std::pow(std::abs(v), q);
  return s;
}

// Scales u to Σ|u|^q = 1 and returns the factor used.
double normalize(std::vector<double>& u, double q) {
  const double c = std::pow(power_sum(u, q), -1.0 / q);
  for (auto& v : u) v *= c;
  return c;
}

}  // namespace

double rayleigh_quotient(const ScalarField& u, double p, double q) {
  if (q < 1.0) throw InvalidArgument("q must be at least 1");
  const double norm = lp_norm(u, q);
  if (norm == 0.0) throw InvalidArgument("Rayleigh quotient of the zero field");
  return dirichlet_energy(u, p) / std::pow(norm, p);
}

PoincareResult poincare_constant(std::shared_ptr<const Grid> grid, double p, double q,
                                 const PoincareOptions& opts) {
  if (!grid) throw InvalidArgument("grid missing");
  auto w = solve_torsion(grid, p, opts.torsion);
  return poincare_constant(w.w, p, q, opts);
}

PoincareResult poincare_constant(const ScalarField& initial, double p, double q,
                                 const PoincareOptions& opts) {
  if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
  if (q < 1.0 || q > p) throw InvalidArgument("q must lie in [1, p]");
  const Grid& grid = initial.grid();
  if (grid.interior_count() == 0) throw DomainError("empty mask");

  constexpr double kArmijo = 1e-4;
  constexpr double kRoundoff = 1e-12;
  constexpr int kMemory = 10;
  constexpr int kQuietSteps = 3;

  const detail::EnergyOperator op(grid, p);
  const detail::LaplacianMetric metric(op);
  const std::size_t n = op.size();
  // λ = F(u) h^{N(1-p/q)} with F = S / (Σu^q)^{p/q}.
  const double scale = std::pow(grid.cell_volume(), 1.0 - p / q);

  std::vector<double> u(initial.values().begin(), initial.values().end());
  for (auto& v : u) {
    if (v < 0.0) throw InvalidArgument("initial field must be nonnegative");
  }
  if (power_sum(u, q) == 0.0) throw InvalidArgument("initial field must be nonzero");
  normalize(u, q);

  // On the normalized sphere Σu^q = 1 the gradient of F is ∇S - pS u^{q-1}.
  auto fg = [&](std::span<const double> x, std::span<double> g) {
    const double s = op.value_and_grad(x, g);
    const double qs = power_sum(x, q);
    const double f = s / std::pow(qs, p / q);
    const double k = p * s / qs;
    const double inv = std::pow(qs, -p / q);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = q == 1.0 ? 1.0 : std::pow(x[i], q - 1.0);
      g[i] = (g[i] - k * d) * inv;
    }
    return f;
  };

  std::vector<double> g(n), mg(n), trial(n), g_trial(n), d(n), s(n);
  double f = fg(u, g);
  metric.solve(g, mg);
  std::deque<double> history{f};
  double step = 1.0 / p;  // inverse iteration when p = q = 2
  double change = INFINITY;
  int quiet = 0;
  long it = 0;

  while (it < opts.max_outer) {
    ++it;
    double gtd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = std::max(u[i] - step * mg[i], 0.0) - u[i];
      gtd += g[i] * d[i];
    }
    const double f_ref = *std::max_element(history.begin(), history.end());
    const double slack = kRoundoff * std::abs(f_ref);
    double lambda = 1.0;
    double f_trial = 0.0;
    for (;;) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = std::max(u[i] + lambda * d[i], 0.0);
      if (power_sum(trial, q) > 0.0) {
        f_trial = fg(trial, g_trial);
        if (f_trial <= f_ref + kArmijo * lambda * gtd + slack) break;
      }
      if (lambda < 1e-10) break;
      lambda *= 0.5;
    }
    if (power_sum(trial, q) == 0.0) throw SolverError("Poincare iteration collapsed to zero", change, it);

    const double c = normalize(trial, q);
    for (auto& v : g_trial) v /= c;

    double sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = trial[i] - u[i];
      sy += s[i] * (g_trial[i] - g[i]);
    }
    const double ss = metric.norm_sq(s);
    u.swap(trial);
    g.swap(g_trial);
    change = std::abs(f_trial - f) / f_trial;
    f = f_trial;
    history.push_back(f);
    if (history.size() > kMemory) history.pop_front();
    metric.solve(g, mg);
    step = sy > 0.0 ? std::clamp(ss / sy, 1e-30, 1e30) : 1.0 / p;

    quiet = change < opts.rel_tol ? quiet + 1 : 0;
    if (quiet >= kQuietSteps) break;
  }
  if (quiet < kQuietSteps) {
    std::ostringstream msg;
    msg << "Poincare iteration did not converge (last lambda " << f * scale << ")";
    throw SolverError(msg.str(), change, it);
  }

  // Unit L^q norm with the h^N weight.
  const double to_unit = std::pow(grid.cell_volume(), -1.0 / q);
  for (auto& v : u) v *= to_unit;

  PoincareResult res{f * scale, ScalarField(initial.grid_ptr(), std::move(u)), it, change, {}, {}};
  const auto labels = component_labels(grid);
  const auto count = static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end()) + 1);
  res.component_masses.assign(count, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i)
    res.component_masses[static_cast<std::size_t>(labels[i])] +=
        std::pow(res.minimizer[i], q) * grid.cell_volume();
  for (std::size_t c = 0; c < count; ++c)
    if (res.component_masses[c] >= 1e-6) res.supporting_components.push_back(static_cast<int>(c));
  return res;
}

}  // namespace ptorsion
