#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ptorsion/fields.hpp"
#include "ptorsion/geometry.hpp"
#include "ptorsion/report.hpp"

namespace ptorsion {

struct SolverOptions {
  /// Bound on the projected-gradient sup-norm of J, in units of h^N.
  double tol = 1e-8;
  long max_iter = 200000;
  /// Nonmonotone line-search memory.
  int memory = 10;
  /// Per-refinement energy growth that marks a composition probe divergent.
  double growth = 1.15;
};

struct TorsionResult {
  ScalarField w;
  double p = 2.0;
  double integral = 0.0;   ///< ∫w
  double rigidity = 0.0;   ///< (∫w)^{p-1}
  double sup_norm = 0.0;
  long iterations = 0;
  double final_gradient_norm = 0.0;  ///< projected-gradient sup-norm / h^N
};

/// Wraps a field (solved or closed-form) with its derived scalars.
TorsionResult make_torsion_result(ScalarField w, double p, long iterations = 0,
                                  double residual = 0.0);

/// ‖w‖_{L^s} for the result's field.
double torsion_norm(const TorsionResult& result, double s);

/// (R^{p'} - r^{p'})_+ / A_{N,p} with A_{N,p} = p' N^{1/(p-1)}.
double ball_torsion_value(double radius, int dimension, double p, double r);

/// Closed-form torsion of B_R(center) sampled on the grid (center defaults to
/// the origin). Throws DomainError if an interior node lies outside the ball.
ScalarField exact_ball_torsion(double radius, double p, std::shared_ptr<const Grid> grid,
                               std::vector<double> center = {});

/// Minimizes (1/p)Σ|∇u|^p h^N - Σu h^N over u >= 0, one connected component at
/// a time. Throws SolverError carrying the residual on non-convergence.
TorsionResult solve_torsion(std::shared_ptr<const Grid> grid, double p,
                            const SolverOptions& opts = {});

/// Projected-gradient sup-norm of the discrete energy at w, divided by h^N:
/// the residual of the discrete weak equation tested with coordinate vectors.
double weak_residual(const ScalarField& w, double p);

/// Energy identity Σ|∇w|^p h^N = ∫w as a report pair with relative tolerance.
ReportPair energy_identity_check(const TorsionResult& result, double tol);

/// Torsion on Ω ∩ B_R for each cut radius, every field extended by zero to the
/// grid of the largest radius.
std::vector<TorsionResult> exhaustion_sequence(const Domain& domain, double p,
                                               const std::vector<double>& radii, double h,
                                               const SolverOptions& opts = {});

/// ‖w‖_∞ <= C (∫w)^{p'/(N+p')} with C = ((N+p')/p') S^{N/(N(p-1)+p)}.
/// Without a Sobolev constant, or for p >= N, the report is unchecked.
InequalityReport linfty_l1_check(const TorsionResult& result, std::optional<double> sobolev_const,
                                 double tol = 0.0);

enum class ProbeVerdict { divergent, convergent, inconclusive };

std::string to_string(ProbeVerdict verdict);

struct ProbeResult {
  double beta = 0.0;
  std::vector<double> spacings;
  std::vector<double> energies;  ///< Σ|∇(w_h^β)|^p h^N per spacing
  std::vector<double> growth;    ///< energies[i+1]/energies[i]
  ProbeVerdict verdict = ProbeVerdict::inconclusive;
};

/// Energy of w_h^β along halving spacings. Divergent if every refinement grows
/// the energy by at least opts.growth, convergent if the last two agree
/// within 2%.
ProbeResult composition_probe(const Domain& domain, double p, double beta,
                              const std::vector<double>& h_list, const SolverOptions& opts = {});

/// Same, reusing torsion fields already solved at each spacing.
ProbeResult composition_probe(const std::vector<ScalarField>& torsions, double p, double beta,
                              double growth = 1.15);

}  // namespace ptorsion
