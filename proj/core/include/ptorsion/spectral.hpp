#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "ptorsion/fields.hpp"
#include "ptorsion/torsion.hpp"

namespace ptorsion {

struct PoincareOptions {
  double rel_tol = 1e-8;
  long max_outer = 50000;
  /// Options of the torsion solve that seeds the iteration.
  SolverOptions torsion{};
};

struct PoincareResult {
  double lambda = 0.0;
  ScalarField minimizer;  ///< nonnegative, unit L^q norm
  long iterations = 0;
  double residual = 0.0;  ///< relative change of lambda at termination
  /// Σ|u|^q h^N per connected component (labels from component_labels).
  std::vector<double> component_masses;
  /// Components carrying at least 1e-6 of the mass.
  std::vector<int> supporting_components;
};

/// Σ|∇u|^p h^N / ‖u‖_q^p. Throws InvalidArgument for the zero field.
double rayleigh_quotient(const ScalarField& u, double p, double q);

/// λ_{p,q} of the grid by projected descent on the L^q unit sphere, seeded with
/// the normalized torsion function. Throws SolverError on non-convergence.
PoincareResult poincare_constant(std::shared_ptr<const Grid> grid, double p, double q,
                                 const PoincareOptions& opts = {});

/// Same, seeded with a given nonnegative, nonzero field.
PoincareResult poincare_constant(const ScalarField& initial, double p, double q,
                                 const PoincareOptions& opts = {});

}  // namespace ptorsion
