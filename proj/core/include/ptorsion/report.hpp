#pragma once

#include <map>
#include <string>

namespace ptorsion {

enum class CheckStatus { checked, unchecked };

/// One side-by-side evaluation of an inequality lhs <= rhs.
///
/// For checked reports pass is exactly lhs <= rhs*(1+tol) + abs_tol.
/// Unchecked reports carry the computed lhs, a NaN rhs and pass = true.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  ///< lhs/rhs when rhs > 0, NaN otherwise
  double tol = 0.0;
  double abs_tol = 0.0;
  bool pass = true;
  CheckStatus status = CheckStatus::checked;
  std::string note;
  std::string domain;
  std::map<std::string, double> params;

  static InequalityReport make(std::string name, double lhs, double rhs, double tol,
                               double abs_tol = 0.0);
  static InequalityReport unchecked(std::string name, double lhs, std::string note);

  InequalityReport& with(const std::string& key, double value) {
    params[key] = value;
    return *this;
  }
};

/// The pair (lhs <= rhs, rhs <= lhs) used for equalities and two-sided bounds.
struct ReportPair {
  InequalityReport lower;
  InequalityReport upper;
  bool pass() const noexcept { return lower.pass && upper.pass; }
};

}  // namespace ptorsion
