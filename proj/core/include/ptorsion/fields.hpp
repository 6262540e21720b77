#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "ptorsion/grid.hpp"

namespace ptorsion {

/// Nodal values on the interior of a grid; zero everywhere else.
class ScalarField {
 public:
  /// Throws InvalidArgument on a size mismatch or a non-finite value.
  ScalarField(std::shared_ptr<const Grid> grid, std::vector<double> values);

  static ScalarField zeros(std::shared_ptr<const Grid> grid);
  /// Samples f at the interior node positions.
  static ScalarField sample(std::shared_ptr<const Grid> grid,
                            const std::function<double(const std::array<double, 3>&)>& f);

  const Grid& grid() const noexcept { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Value at a lattice position; zero off the interior.
  double at(const LatticeIndex& index) const;

  ScalarField scaled(double alpha) const;
  ScalarField operator+(const ScalarField& other) const;
  ScalarField operator-(const ScalarField& other) const;
  /// Nodewise product.
  ScalarField operator*(const ScalarField& other) const;

 private:
  std::shared_ptr<const Grid> grid_;
  std::vector<double> values_;
};

/// |∇u|² per cell (forward differences, zero extension), in Grid::cells order.
std::vector<double> gradient_sq(const ScalarField& u);

/// Σ_cells |∇u|^p h^N.
double dirichlet_energy(const ScalarField& u, double p);

/// (Σ |u_i|^s h^N)^{1/s}; s = +inf gives max |u_i|. Also evaluated for s < 1.
double lp_norm(const ScalarField& u, double s);

/// Σ u_i h^N in interior order.
double integral(const ScalarField& u);

/// Nodewise u_i^beta; beta > 0, u >= 0.
ScalarField power(const ScalarField& u, double beta);

/// Gagliardo-Nirenberg quotient ‖u‖_r / (‖u‖_q^{1-θ} ‖∇u‖_p^θ) for p != N, and
/// ‖u‖_r / ((∫|∇u|^N)^{(r-q)/(Nr)} (∫|u|^q)^{1/r}) for p == N. The dimension is
/// taken from the grid. r may be +inf when p > N.
double gn_ratio(const ScalarField& u, double p, double q, double r);

/// Exponent θ of the non-conformal case.
double gn_theta(int dimension, double p, double q, double r);

/// Re-expresses u on `target` (same lattice) by zero extension. Throws
/// DomainError if u is nonzero on a node that is not interior in `target`.
ScalarField extend_to(const ScalarField& u, std::shared_ptr<const Grid> target);

}  // namespace ptorsion
