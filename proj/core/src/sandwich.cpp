#include <cmath>

#include "ptorsion/error.hpp"
#include "ptorsion/inequalities.hpp"

namespace ptorsion {

double main_sandwich_bound(double p, double q) {
  return std::pow((p - 1.0) / (p - q), p - 1.0) / q;
}

double pp_sandwich_bound(int dimension) { return 4.0 + 3.0 * dimension * std::log(2.0); }

SandwichResult theorem_main_sandwich(const TorsionResult& torsion, double lambda, double q,
                                     double tol) {
  const double p = torsion.p;
  if (!(q >= 1.0 && q < p)) throw InvalidArgument("main sandwich needs 1 <= q < p");
  const double gamma = q * (p - 1.0) / (p - q);
  const double moment = std::pow(lp_norm(torsion.w, gamma), gamma);
  SandwichResult r;
  r.lambda = lambda;
  r.M = lambda * std::pow(moment, (p - q) / q);
  r.bound = main_sandwich_bound(p, q);
  r.reports.lower = InequalityReport::make("main_sandwich_lower", 1.0, r.M, tol);
  r.reports.upper = InequalityReport::make("main_sandwich_upper", r.M, r.bound, tol);
  for (auto* rep : {&r.reports.lower, &r.reports.upper}) rep->with("p", p).with("q", q);
  return r;
}

SandwichResult theorem_main_sandwich(std::shared_ptr<const Grid> grid, double p, double q,
                                     double tol, const PoincareOptions& opts) {
  const auto torsion = solve_torsion(std::move(grid), p, opts.torsion);
  const auto pc = poincare_constant(torsion.w, p, q, opts);
  return theorem_main_sandwich(torsion, pc.lambda, q, tol);
}

SandwichResult theorem_pp_sandwich(const TorsionResult& torsion, double lambda, double tol) {
  const double p = torsion.p;
  const int dim = torsion.w.grid().dimension();
  SandwichResult r;
  r.lambda = lambda;
  r.M = lambda * std::pow(torsion.sup_norm, p - 1.0);
  r.reports.lower = InequalityReport::make("pp_sandwich_lower", 1.0, r.M, tol);
  if (p == 2.0) {
    r.bound = pp_sandwich_bound(dim);
    r.reports.upper = InequalityReport::make("pp_sandwich_upper", r.M, r.bound, tol);
  } else {
    r.bound = std::nan("");
    r.reports.upper = InequalityReport::unchecked("pp_sandwich_upper", r.M,
                                                  "constant not explicit for p != 2");
  }
  for (auto* rep : {&r.reports.lower, &r.reports.upper})
    rep->with("p", p).with("q", p).with("N", dim);
  return r;
}

SandwichResult theorem_pp_sandwich(std::shared_ptr<const Grid> grid, double p, double tol,
                                   const PoincareOptions& opts) {
  const auto torsion = solve_torsion(std::move(grid), p, opts.torsion);
  const auto pc = poincare_constant(torsion.w, p, p, opts);
  return theorem_pp_sandwich(torsion, pc.lambda, tol);
}

}  // namespace ptorsion
