#pragma once

// Internal: the discrete p-energy on a (sub)set of interior nodes, the
// Laplacian metric, and the projected gradient driver.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "ptorsion/grid.hpp"

namespace ptorsion::detail {

/// S(u) = Σ_cells |∇u|^p over a set of nodes numbered 0..size-1.
class EnergyOperator {
 public:
  /// Whole interior of the grid.
  EnergyOperator(const Grid& grid, double p);
  /// Interior nodes carrying `label`; `nodes` receives their grid interior
  /// indices in ascending order.
  EnergyOperator(const Grid& grid, double p, std::span<const std::int32_t> labels,
                 std::int32_t label, std::vector<std::size_t>& nodes);

  std::size_t size() const noexcept { return size_; }
  int dimension() const noexcept { return dim_; }
  double p() const noexcept { return p_; }
  double spacing() const noexcept { return 1.0 / inv_h_; }
  std::span<const Cell> cells() const noexcept { return cells_; }

  double value(std::span<const double> u) const;
  /// Returns S(u) and writes ∂S/∂u into grad.
  double value_and_grad(std::span<const double> u, std::span<double> grad) const;

 private:
  void build(const Grid& grid, const std::vector<std::int32_t>& local);

  int dim_;
  double p_;
  double inv_h_;
  std::size_t size_ = 0;
  std::vector<Cell> cells_;
};

/// The matrix L of ½Σ|∇u|² (zero extension) on the operator's nodes, with a
/// sparse Cholesky factorization. Used as the metric of the gradient method.
class LaplacianMetric {
 public:
  explicit LaplacianMetric(const EnergyOperator& op);
  ~LaplacianMetric();
  LaplacianMetric(const LaplacianMetric&) = delete;
  LaplacianMetric& operator=(const LaplacianMetric&) = delete;

  /// out = L^{-1} r.
  void solve(std::span<const double> r, std::span<double> out) const;
  /// sᵀ L s.
  double norm_sq(std::span<const double> s) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SpgOptions {
  double tol = 1e-8;
  long max_iter = 200000;
  int memory = 10;
  /// Metric for the search direction; Euclidean when null.
  const LaplacianMetric* metric = nullptr;
};

struct SpgOutcome {
  long iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// ‖P(u - g) - u‖_∞ for the projection P onto u >= 0.
double projected_gradient_norm(std::span<const double> u, std::span<const double> g);

/// Projected gradient for min f(u) subject to u >= 0: direction from the
/// metric gradient, Barzilai-Borwein step, nonmonotone Armijo search over the
/// last `memory` values. Stops on the Euclidean projected-gradient sup-norm.
/// `fg(u, grad)` returns f(u) and fills grad. u is updated in place.
template <class FG>
SpgOutcome spg_minimize(FG&& fg, std::vector<double>& u, const SpgOptions& opts);

}  // namespace ptorsion::detail

#include "energy_impl.hpp"
