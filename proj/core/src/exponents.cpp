#include "ptorsion/exponents.hpp"

#include <cmath>

#include "ptorsion/error.hpp"

namespace ptorsion {

ExponentSet::ExponentSet(double p, std::optional<double> q, double delta, double beta)
    : p_(p), q_(q.value_or(p)), delta_(delta), beta_(beta) {
  if (!std::isfinite(p) || !(p > 1.0)) throw InvalidArgument("p must exceed 1");
  if (!std::isfinite(q_) || q_ < 1.0 || q_ > p) throw InvalidArgument("q must lie in [1, p]");
  if (!std::isfinite(delta) || !(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (!std::isfinite(beta) || beta < 0.0) throw InvalidArgument("beta must be nonnegative");
}

std::optional<double> ExponentSet::gamma() const noexcept {
  if (q_ == p_) return std::nullopt;
  return gamma_of(p_, q_);
}

double ExponentSet::critical_delta(double p) noexcept {
  return std::pow(p / (p - 1.0), p - 1.0);
}

}  // namespace ptorsion
