#include "ptorsion/torsion.hpp"

#include <algorithm>
#include <cmath>

#include "energy.hpp"
#include "ptorsion/error.hpp"

namespace ptorsion {

namespace {

// Solves one component; u enters as the start point and leaves as the result.
detail::SpgOutcome solve_component(const detail::EnergyOperator& op, std::vector<double>& u,
                                   const SolverOptions& opts) {
  const double inv_p = 1.0 / op.p();
  auto fg = [&](std::span<const double> x, std::span<double> g) {
    const double s = op.value_and_grad(x, g);
    double lin = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      g[i] = g[i] * inv_p - 1.0;
      lin += x[i];
    }
    return s * inv_p - lin;
  };
  const detail::LaplacianMetric metric(op);
  detail::SpgOptions so;
  so.tol = opts.tol;
  so.max_iter = opts.max_iter;
  so.memory = opts.memory;
  so.metric = &metric;
  return detail::spg_minimize(fg, u, so);
}

}  // namespace

TorsionResult make_torsion_result(ScalarField w, double p, long iterations, double residual) {
  if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
  TorsionResult r{std::move(w), p};
  r.integral = integral(r.w);
  r.rigidity = std::pow(r.integral, p - 1.0);
  r.sup_norm = lp_norm(r.w, INFINITY);
  r.iterations = iterations;
  r.final_gradient_norm = residual;
  return r;
}

double torsion_norm(const TorsionResult& result, double s) { return lp_norm(result.w, s); }

double ball_torsion_value(double radius, int dimension, double p, double r) {
  const double pc = p / (p - 1.0);
  const double a = pc * std::pow(static_cast<double>(dimension), 1.0 / (p - 1.0));
  return std::max(std::pow(radius, pc) - std::pow(r, pc), 0.0) / a;
}

ScalarField exact_ball_torsion(double radius, double p, std::shared_ptr<const Grid> grid,
                               std::vector<double> center) {
  if (!grid) throw InvalidArgument("grid missing");
  if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
  if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
  const int dim = grid->dimension();
  if (center.empty()) center.assign(static_cast<std::size_t>(dim), 0.0);
  if (static_cast<int>(center.size()) != dim)
    throw InvalidArgument("ball center dimension differs from the grid");
  std::vector<double> v(grid->interior_count());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto x = grid->interior_position(i);
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) r2 += (x[a] - center[a]) * (x[a] - center[a]);
    const double r = std::sqrt(r2);
    if (r >= radius) throw DomainError("grid has interior nodes outside the ball");
    v[i] = ball_torsion_value(radius, dim, p, r);
  }
  return ScalarField(std::move(grid), std::move(v));
}

TorsionResult solve_torsion(std::shared_ptr<const Grid> grid, double p, const SolverOptions& opts) {
  if (!grid) throw InvalidArgument("grid missing");
  if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
  if (grid->interior_count() == 0) throw DomainError("empty mask");

  const auto labels = component_labels(*grid);
  const std::int32_t components = *std::max_element(labels.begin(), labels.end()) + 1;

  std::vector<double> w(grid->interior_count(), 0.0);
  long iterations = 0;
  double residual = 0.0;
  bool converged = true;

  if (components == 1) {
    detail::EnergyOperator op(*grid, p);
    auto out = solve_component(op, w, opts);
    iterations = out.iterations;
    residual = out.residual;
    converged = out.converged;
  } else {
    std::vector<std::size_t> nodes;
    for (std::int32_t c = 0; c < components; ++c) {
      detail::EnergyOperator op(*grid, p, labels, c, nodes);
      std::vector<double> u(nodes.size(), 0.0);
      auto out = solve_component(op, u, opts);
      for (std::size_t k = 0; k < nodes.size(); ++k) w[nodes[k]] = u[k];
      iterations = std::max(iterations, out.iterations);
      residual = std::max(residual, out.residual);
      converged = converged && out.converged;
    }
  }
  if (!converged)
    throw SolverError("torsion solver did not converge within max_iter", residual, iterations);
  return make_torsion_result(ScalarField(grid, std::move(w)), p, iterations, residual);
}

double weak_residual(const ScalarField& w, double p) {
  detail::EnergyOperator op(w.grid(), p);
  std::vector<double> g(w.size());
  op.value_and_grad(w.values(), g);
  for (auto& x : g) x = x / p - 1.0;
  return detail::projected_gradient_norm(w.values(), g);
}

ReportPair energy_identity_check(const TorsionResult& result, double tol) {
  const double e = dirichlet_energy(result.w, result.p);
  const double i = result.integral;
  ReportPair pair{InequalityReport::make("energy_identity_lower", i, e, tol),
                  InequalityReport::make("energy_identity_upper", e, i, tol)};
  pair.lower.with("p", result.p);
  pair.upper.with("p", result.p);
  return pair;
}

std::vector<TorsionResult> exhaustion_sequence(const Domain& domain, double p,
                                               const std::vector<double>& radii, double h,
                                               const SolverOptions& opts) {
  if (radii.empty()) throw InvalidArgument("exhaustion needs at least one cut radius");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw InvalidArgument("cut radii must be strictly increasing");

  std::vector<std::shared_ptr<const Grid>> grids;
  for (double r : radii) grids.push_back(discretize(domain, h, r));
  const auto& final_grid = grids.back();

  std::vector<TorsionResult> out;
  for (const auto& g : grids) {
    auto res = solve_torsion(g, p, opts);
    auto w = extend_to(res.w, final_grid);
    out.push_back(make_torsion_result(std::move(w), p, res.iterations, res.final_gradient_norm));
  }
  return out;
}

InequalityReport linfty_l1_check(const TorsionResult& result, std::optional<double> sobolev_const,
                                 double tol) {
  const double p = result.p;
  const int dim = result.w.grid().dimension();
  const double n = dim;
  if (!(p < n)) {
    auto r = InequalityReport::unchecked("linfty_l1", result.sup_norm,
                                         "bound stated only for p < N");
    r.with("p", p).with("N", n);
    return r;
  }
  if (!sobolev_const) {
    auto r = InequalityReport::unchecked("linfty_l1", result.sup_norm,
                                         "sobolev_const not configured");
    r.with("p", p).with("N", n);
    return r;
  }
  if (!(*sobolev_const > 0.0)) throw InvalidArgument("sobolev_const must be positive");
  const double pc = p / (p - 1.0);
  const double c = (n + pc) / pc * std::pow(*sobolev_const, n / (n * (p - 1.0) + p));
  const double rhs = c * std::pow(std::max(result.integral, 0.0), pc / (n + pc));
  auto r = InequalityReport::make("linfty_l1", result.sup_norm, rhs, tol);
  r.with("p", p).with("N", n).with("sobolev_const", *sobolev_const);
  return r;
}

std::string to_string(ProbeVerdict verdict) {
  switch (verdict) {
    case ProbeVerdict::divergent: return "divergent";
    case ProbeVerdict::convergent: return "convergent";
    case ProbeVerdict::inconclusive: break;
  }
  return "inconclusive";
}

ProbeResult composition_probe(const std::vector<ScalarField>& torsions, double p, double beta,
                              double growth) {
  if (torsions.size() < 4) throw InvalidArgument("composition probe needs at least 4 refinements");
  if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");
  ProbeResult r;
  r.beta = beta;
  for (const auto& w : torsions) {
    r.spacings.push_back(w.grid().spacing());
    r.energies.push_back(dirichlet_energy(power(w, beta), p));
  }
  for (std::size_t i = 1; i < r.spacings.size(); ++i)
    if (std::abs(r.spacings[i] * 2.0 - r.spacings[i - 1]) > 1e-12 * r.spacings[i - 1])
      throw InvalidArgument("probe spacings must halve at every step");
  bool all_grow = true;
  for (std::size_t i = 1; i < r.energies.size(); ++i) {
    const double g = r.energies[i] / r.energies[i - 1];
    r.growth.push_back(g);
    all_grow = all_grow && g >= growth;
  }
  const double last = r.energies.back();
  const double prev = r.energies[r.energies.size() - 2];
  if (all_grow)
    r.verdict = ProbeVerdict::divergent;
  else if (std::abs(last - prev) <= 0.02 * std::abs(last))
    r.verdict = ProbeVerdict::convergent;
  return r;
}

ProbeResult composition_probe(const Domain& domain, double p, double beta,
                              const std::vector<double>& h_list, const SolverOptions& opts) {
  if (h_list.size() < 4) throw InvalidArgument("composition probe needs at least 4 refinements");
  std::vector<ScalarField> fields;
  for (double h : h_list) fields.push_back(solve_torsion(discretize(domain, h), p, opts).w);
  return composition_probe(fields, p, beta, opts.growth);
}

}  // namespace ptorsion
