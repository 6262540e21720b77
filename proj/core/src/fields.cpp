#include "ptorsion/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ptorsion/error.hpp"

namespace ptorsion {

namespace {

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.grid_ptr() != b.grid_ptr() && !(a.grid() == b.grid()))
    throw InvalidArgument("fields live on different grids");
}

// |t|^e with |t|^0 treated as 1 only for e == 0.
double abs_pow(double t, double e) { return std::pow(std::abs(t), e); }

}  // namespace

ScalarField::ScalarField(std::shared_ptr<const Grid> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidArgument("field needs a grid");
  if (values_.size() != grid_->interior_count())
    throw InvalidArgument("field size does not match the interior node count");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("field values must be finite");
}

ScalarField ScalarField::zeros(std::shared_ptr<const Grid> grid) {
  const auto n = grid ? grid->interior_count() : 0;
  return ScalarField(std::move(grid), std::vector<double>(n, 0.0));
}

ScalarField ScalarField::sample(std::shared_ptr<const Grid> grid,
                                const std::function<double(const std::array<double, 3>&)>& f) {
  if (!grid) throw InvalidArgument("field needs a grid");
  std::vector<double> v(grid->interior_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->interior_position(i));
  return ScalarField(std::move(grid), std::move(v));
}

double ScalarField::at(const LatticeIndex& index) const {
  const auto i = grid_->interior_at(index);
  return i == kExterior ? 0.0 : values_[static_cast<std::size_t>(i)];
}

ScalarField ScalarField::scaled(double alpha) const {
  std::vector<double> v(values_);
  for (auto& x : v) x *= alpha;
  return ScalarField(grid_, std::move(v));
}

ScalarField ScalarField::operator+(const ScalarField& other) const {
  require_same_grid(*this, other);
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
  return ScalarField(grid_, std::move(v));
}

ScalarField ScalarField::operator-(const ScalarField& other) const {
  require_same_grid(*this, other);
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= other.values_[i];
  return ScalarField(grid_, std::move(v));
}

ScalarField ScalarField::operator*(const ScalarField& other) const {
  require_same_grid(*this, other);
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= other.values_[i];
  return ScalarField(grid_, std::move(v));
}

std::vector<double> gradient_sq(const ScalarField& u) {
  const Grid& g = u.grid();
  const int dim = g.dimension();
  const double inv_h = 1.0 / g.spacing();
  const auto vals = u.values();
  std::vector<double> out;
  out.reserve(g.cells().size());
  for (const auto& c : g.cells()) {
    const double ub = c.base == kExterior ? 0.0 : vals[static_cast<std::size_t>(c.base)];
    double s = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double un = c.next[a] == kExterior ? 0.0 : vals[static_cast<std::size_t>(c.next[a])];
      const double d = (un - ub) * inv_h;
      s += d * d;
    }
    out.push_back(s);
  }
  return out;
}

double dirichlet_energy(const ScalarField& u, double p) {
  if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
  const double half_p = 0.5 * p;
  double sum = 0.0;
  for (double g2 : gradient_sq(u)) sum += std::pow(g2, half_p);
  return sum * u.grid().cell_volume();
}

double lp_norm(const ScalarField& u, double s) {
  if (!(s > 0.0)) throw InvalidArgument("norm exponent must be positive");
  if (std::isinf(s)) {
    double m = 0.0;
    for (double v : u.values()) m = std::max(m, std::abs(v));
    return m;
  }
  double sum = 0.0;
  for (double v : u.values()) sum += abs_pow(v, s);
  return std::pow(sum * u.grid().cell_volume(), 1.0 / s);
}

double integral(const ScalarField& u) {
  double sum = 0.0;
  for (double v : u.values()) sum += v;
  return sum * u.grid().cell_volume();
}

ScalarField power(const ScalarField& u, double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("power exponent must be positive");
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (u[i] < 0.0) throw DomainError("power of a field with a negative nodal value");
    v[i] = beta == 1.0 ? u[i] : std::pow(u[i], beta);
  }
  return ScalarField(u.grid_ptr(), std::move(v));
}

double gn_theta(int dimension, double p, double q, double r) {
  const double n = dimension;
  const double lead = std::isinf(r) ? 1.0 : 1.0 - q / r;
  return lead * n * p / (n * p + p * q - n * q);
}

double gn_ratio(const ScalarField& u, double p, double q, double r) {
  const int dim = u.grid().dimension();
  const double n = dim;
  if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
  if (q < 1.0 || q > p) throw InvalidArgument("q must lie in [1, p]");
  if (!(r > q)) throw InvalidArgument("r must exceed q");
  const bool conformal = p == n;
  if (conformal) {
    if (std::isinf(r)) throw InvalidArgument("r must be finite when p = N");
  } else if (p < n) {
    const double crit = n * p / (n - p);
    if (r > crit) throw InvalidArgument("r must not exceed the Sobolev exponent Np/(N-p)");
  }

  const double num = lp_norm(u, r);
  if (num == 0.0) throw InvalidArgument("gn_ratio needs a nonzero field");
  const double energy = dirichlet_energy(u, p);
  if (conformal) {
    const double uq = std::pow(lp_norm(u, q), q);
    return num / (std::pow(energy, (r - q) / (n * r)) * std::pow(uq, 1.0 / r));
  }
  const double theta = gn_theta(dim, p, q, r);
  return num / (std::pow(lp_norm(u, q), 1.0 - theta) * std::pow(energy, theta / p));
}

ScalarField extend_to(const ScalarField& u, std::shared_ptr<const Grid> target) {
  if (!target) throw InvalidArgument("target grid missing");
  if (!u.grid().same_lattice(*target))
    throw InvalidArgument("extension needs grids on the same lattice");
  std::vector<double> v(target->interior_count(), 0.0);
  const Grid& src = u.grid();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto j = target->interior_at(src.interior_lattice_index(i));
    if (j == kExterior) {
      if (u[i] != 0.0) throw DomainError("field is nonzero outside the target mask");
      continue;
    }
    v[static_cast<std::size_t>(j)] = u[i];
  }
  return ScalarField(std::move(target), std::move(v));
}

}  // namespace ptorsion
