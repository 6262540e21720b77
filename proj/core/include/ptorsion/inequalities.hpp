#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ptorsion/fields.hpp"
#include "ptorsion/report.hpp"
#include "ptorsion/spectral.hpp"
#include "ptorsion/torsion.hpp"

namespace ptorsion {

/// Hardy weights built from a torsion field w.
///
/// Cell quantities use the forward-difference gradient of w and the mean w̄ of
/// w over the cell stencil (base node plus one step along each axis, zero
/// off the interior): A = |∇w|^p / w̄^p and ∇w/w̄. Node quantities are
/// B = w^{1-p}. Nodes and cells whose w (resp. w̄) falls below
/// rel_floor·sup w are excluded and counted.
struct HardyWeights {
  std::shared_ptr<const Grid> grid;
  double p = 2.0;
  double floor = 0.0;
  std::vector<double> A;
  std::vector<std::array<double, 3>> grad_log;
  std::vector<std::uint8_t> cell_ok;
  std::vector<double> B;
  std::vector<std::uint8_t> node_ok;
  std::size_t excluded_nodes = 0;
  std::size_t excluded_cells = 0;

  static HardyWeights build(const ScalarField& w, double p, double rel_floor = 1e-12);
};

/// X = Σ_cells A|ū|^p h^N and Y = Σ_nodes B|u|^p h^N, with ū the stencil mean
/// of |u|. Throws DomainError when u carries mass on excluded nodes or cells.
struct HardyMoments {
  double X = 0.0;
  double Y = 0.0;
};
HardyMoments hardy_moments(const ScalarField& u, const HardyWeights& weights);

/// Σ|u|^p / w^{p-1} h^N <= Σ|∇u|^p h^N.
InequalityReport hardy_simple(const ScalarField& u, const HardyWeights& weights, double tol = 0.02);
InequalityReport hardy_simple(const ScalarField& u, const ScalarField& w, double p,
                              double tol = 0.02);

/// (p-1)/δ [(1-δ^{-1/(p-1)}) X + Y/(p-1)] <= Σ|∇u|^p h^N.
InequalityReport hardy_delta(const ScalarField& u, const HardyWeights& weights, double delta,
                             double tol = 0.02);
InequalityReport hardy_delta(const ScalarField& u, const ScalarField& w, double p, double delta,
                             double tol = 0.02);

/// ((p-1)/p)^p [X + p/(p-1) Y] <= Σ|∇u|^p h^N, evaluated directly.
InequalityReport hardy_suboptimal(const ScalarField& u, const HardyWeights& weights,
                                  double tol = 0.02);

/// ((p-1)/p)^p (X + Y/(p-1))^p / X^{p-1} <= Σ|∇u|^p h^N. Throws
/// InvalidArgument when X vanishes.
InequalityReport hardy_optimized(const ScalarField& u, const HardyWeights& weights,
                                 double tol = 0.02);
InequalityReport hardy_optimized(const ScalarField& u, const ScalarField& w, double p,
                                 double tol = 0.02);

/// c·w^{δ^{-1/(p-1)}} nodewise.
ScalarField extremal_field(const ScalarField& w, double p, double delta, double c);

/// Remainder of the δ-inequality, cell by cell with ū paired with the cell
/// gradient. For p >= 2: Σ|δ^{1/p}∇u - δ^{-1/(p(p-1))} ū ∇w/w̄|^p h^N. For
/// p < 2: Σ[δ^{2/p}|∇u|² + δ^{-2/(p(p-1))} ū²|∇w/w̄|²]^{(p-2)/2}
///        |δ^{1/p}∇u - δ^{-1/(p(p-1))} ū ∇w/w̄|² h^N.
double hardy_remainder(const ScalarField& u, const HardyWeights& weights, double delta);

struct SharpnessSample {
  ScalarField u;
  double quotient = 0.0;
  double exponent = 0.0;
};

/// u_n = w^{(p-1)/p + 1/n} and Σ|∇u_n|^p h^N / Σ[A + pB/(p-1)]|u_n|^p h^N.
SharpnessSample sharpness_sequence(const HardyWeights& weights, const ScalarField& w, int n);

/// Upper end of the proof bracket ((p-1)/p + 1/n)^p; the lower end is ((p-1)/p)^p.
double sharpness_upper(double p, int n);

/// Deterministic test fields: products of coordinate bumps and powers of w,
/// vanishing within 2h of the mask boundary.
class TestFieldSuite {
 public:
  TestFieldSuite(const ScalarField& w, std::uint64_t seed);
  std::uint64_t seed() const noexcept { return seed_; }
  /// The k-th field of the suite.
  ScalarField field(std::size_t k) const;

 private:
  ScalarField w_;
  std::uint64_t seed_;
  std::vector<std::size_t> deep_;  // interior nodes at least 2h inside
};

struct SandwichResult {
  ReportPair reports;
  double M = 0.0;
  double lambda = 0.0;
  double bound = 0.0;
};

/// 1 <= λ_{p,q} (∫w^γ)^{(p-q)/q} <= (1/q)((p-1)/(p-q))^{p-1}, q < p.
SandwichResult theorem_main_sandwich(const TorsionResult& torsion, double lambda, double q,
                                     double tol);
SandwichResult theorem_main_sandwich(std::shared_ptr<const Grid> grid, double p, double q,
                                     double tol, const PoincareOptions& opts = {});
double main_sandwich_bound(double p, double q);

/// 1 <= λ_{p,p} ‖w‖_∞^{p-1} <= D_{N,2} = 4 + 3N log 2 (upper end only at p = 2).
SandwichResult theorem_pp_sandwich(const TorsionResult& torsion, double lambda, double tol);
SandwichResult theorem_pp_sandwich(std::shared_ptr<const Grid> grid, double p, double tol,
                                   const PoincareOptions& opts = {});
double pp_sandwich_bound(int dimension);

/// ⟨ξ,z⟩ <= |z|^p/p + |ξ|^{p'}/p' - (2/p) C (|z|² + |ξ|^{2/(p-1)})^{(p-2)/2} |z - |ξ|^{p'-2}ξ|²,
/// passing when lhs <= rhs + 1e-12.
InequalityReport young_check(std::span<const double> z, std::span<const double> xi, double p,
                             double C);

/// ½|z|^p + ½|v|^p >= |(z+v)/2|^p + C (|z|² + |v|²)^{(p-2)/2} |z-v|², reported
/// as right side <= left side + 1e-12.
InequalityReport convexity_check(std::span<const double> z, std::span<const double> v, double p,
                                 double C);

/// Point k of the 4-D Halton sequence (bases 2, 3, 5, 7) mapped to a pair of
/// planar vectors in [-2, 2]².
std::array<double, 4> halton_pair(std::uint64_t k);

/// Largest C passing young_check on the first `samples` Halton pairs.
double estimate_young_constant(double p, std::size_t samples);
/// Largest C passing convexity_check on the first `samples` Halton pairs.
double estimate_convexity_constant(double p, std::size_t samples);

}  // namespace ptorsion
