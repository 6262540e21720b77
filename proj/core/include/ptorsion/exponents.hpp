#pragma once

#include <optional>

namespace ptorsion {

/// Exponents shared by the inequalities. Construction validates every
/// constraint; derived quantities are computed on demand.
class ExponentSet {
 public:
  /// Throws InvalidArgument naming the violated constraint.
  explicit ExponentSet(double p, std::optional<double> q = std::nullopt, double delta = 1.0,
                       double beta = 1.0);

  double p() const noexcept { return p_; }
  /// Defaults to p when not given.
  double q() const noexcept { return q_; }
  double delta() const noexcept { return delta_; }
  double beta() const noexcept { return beta_; }

  /// q(p-1)/(p-q); empty when q == p.
  std::optional<double> gamma() const noexcept;
  /// p/(p-1).
  double conjugate() const noexcept { return conjugate_exponent(p_); }
  /// (p/(p-1))^{p-1}, the critical Hardy parameter.
  double delta_star() const noexcept { return critical_delta(p_); }
  /// (p-1)/p, the critical composition power.
  double beta_star() const noexcept { return (p_ - 1.0) / p_; }

  static double conjugate_exponent(double p) noexcept { return p / (p - 1.0); }
  static double critical_delta(double p) noexcept;
  static double gamma_of(double p, double q) noexcept { return q * (p - 1.0) / (p - q); }

 private:
  double p_;
  double q_;
  double delta_;
  double beta_;
};

}  // namespace ptorsion
