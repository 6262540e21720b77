#include "ptorsion/report.hpp"

#include <cmath>
#include <limits>

namespace ptorsion {

InequalityReport InequalityReport::make(std::string name, double lhs, double rhs, double tol,
                                        double abs_tol) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::quiet_NaN();
  r.tol = tol;
  r.abs_tol = abs_tol;
  r.pass = lhs <= rhs * (1.0 + tol) + abs_tol;
  return r;
}

InequalityReport InequalityReport::unchecked(std::string name, double lhs, std::string note) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = std::numeric_limits<double>::quiet_NaN();
  r.ratio = std::numeric_limits<double>::quiet_NaN();
  r.status = CheckStatus::unchecked;
  r.note = std::move(note);
  return r;
}

}  // namespace ptorsion
