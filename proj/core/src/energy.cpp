#include "energy.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "ptorsion/error.hpp"

namespace ptorsion::detail {

EnergyOperator::EnergyOperator(const Grid& grid, double p)
    : dim_(grid.dimension()), p_(p), inv_h_(1.0 / grid.spacing()) {
  size_ = grid.interior_count();
  cells_.assign(grid.cells().begin(), grid.cells().end());
}

EnergyOperator::EnergyOperator(const Grid& grid, double p, std::span<const std::int32_t> labels,
                               std::int32_t label, std::vector<std::size_t>& nodes)
    : dim_(grid.dimension()), p_(p), inv_h_(1.0 / grid.spacing()) {
  std::vector<std::int32_t> local(grid.interior_count(), kExterior);
  nodes.clear();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != label) continue;
    local[i] = static_cast<std::int32_t>(nodes.size());
    nodes.push_back(i);
  }
  size_ = nodes.size();
  build(grid, local);
}

void EnergyOperator::build(const Grid& grid, const std::vector<std::int32_t>& local) {
  auto map = [&](std::int32_t i) { return i == kExterior ? kExterior : local[static_cast<std::size_t>(i)]; };
  for (const auto& c : grid.cells()) {
    Cell m;
    m.base = map(c.base);
    bool any = m.base != kExterior;
    for (int a = 0; a < dim_; ++a) {
      m.next[a] = map(c.next[a]);
      any = any || m.next[a] != kExterior;
    }
    if (any) cells_.push_back(m);
  }
}

double EnergyOperator::value(std::span<const double> u) const {
  const double half_p = 0.5 * p_;
  double sum = 0.0;
  for (const auto& c : cells_) {
    const double ub = c.base == kExterior ? 0.0 : u[static_cast<std::size_t>(c.base)];
    double s = 0.0;
    for (int a = 0; a < dim_; ++a) {
      const double un = c.next[a] == kExterior ? 0.0 : u[static_cast<std::size_t>(c.next[a])];
      const double d = (un - ub) * inv_h_;
      s += d * d;
    }
    sum += std::pow(s, half_p);
  }
  return sum;
}

double EnergyOperator::value_and_grad(std::span<const double> u, std::span<double> grad) const {
  const double half_p = 0.5 * p_;
  const bool quadratic = p_ == 2.0;
  std::fill(grad.begin(), grad.end(), 0.0);
  double sum = 0.0;
  std::array<double, 3> d{};
  for (const auto& c : cells_) {
    const double ub = c.base == kExterior ? 0.0 : u[static_cast<std::size_t>(c.base)];
    double s = 0.0;
    for (int a = 0; a < dim_; ++a) {
      const double un = c.next[a] == kExterior ? 0.0 : u[static_cast<std::size_t>(c.next[a])];
      d[a] = (un - ub) * inv_h_;
      s += d[a] * d[a];
    }
    if (s == 0.0) continue;
    double weight;  // p |∇u|^{p-2} / h
    if (quadratic) {
      sum += s;
      weight = 2.0 * inv_h_;
    } else {
      const double ps = std::pow(s, half_p);
      sum += ps;
      weight = p_ * ps / s * inv_h_;
    }
    double base_acc = 0.0;
    for (int a = 0; a < dim_; ++a) {
      const double t = weight * d[a];
      if (c.next[a] != kExterior) grad[static_cast<std::size_t>(c.next[a])] += t;
      base_acc += t;
    }
    if (c.base != kExterior) grad[static_cast<std::size_t>(c.base)] -= base_acc;
  }
  return sum;
}

struct LaplacianMetric::Impl {
  Eigen::SparseMatrix<double> scaled;  // h² L
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
  double h2 = 1.0;
};

LaplacianMetric::LaplacianMetric(const EnergyOperator& op) : impl_(std::make_unique<Impl>()) {
  const auto n = static_cast<Eigen::Index>(op.size());
  const double h = op.spacing();
  impl_->h2 = h * h;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(op.cells().size() * static_cast<std::size_t>(4 * op.dimension()));
  for (const auto& c : op.cells()) {
    for (int a = 0; a < op.dimension(); ++a) {
      const auto i = c.base, j = c.next[a];
      if (i != kExterior) t.emplace_back(i, i, 1.0);
      if (j != kExterior) t.emplace_back(j, j, 1.0);
      if (i != kExterior && j != kExterior) {
        t.emplace_back(i, j, -1.0);
        t.emplace_back(j, i, -1.0);
      }
    }
  }
  impl_->scaled.resize(n, n);
  impl_->scaled.setFromTriplets(t.begin(), t.end());
  impl_->llt.compute(impl_->scaled);
  if (impl_->llt.info() != Eigen::Success)
    throw SolverError("Laplacian factorization failed", 0.0, 0);
}

LaplacianMetric::~LaplacianMetric() = default;

void LaplacianMetric::solve(std::span<const double> r, std::span<double> out) const {
  const auto n = static_cast<Eigen::Index>(r.size());
  Eigen::Map<const Eigen::VectorXd> rv(r.data(), n);
  Eigen::Map<Eigen::VectorXd> ov(out.data(), n);
  ov = impl_->llt.solve(rv) * impl_->h2;
}

double LaplacianMetric::norm_sq(std::span<const double> s) const {
  const auto n = static_cast<Eigen::Index>(s.size());
  Eigen::Map<const Eigen::VectorXd> sv(s.data(), n);
  return sv.dot(impl_->scaled * sv) / impl_->h2;
}

double projected_gradient_norm(std::span<const double> u, std::span<const double> g) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    m = std::max(m, std::abs(std::max(u[i] - g[i], 0.0) - u[i]));
  return m;
}

}  // namespace ptorsion::detail
