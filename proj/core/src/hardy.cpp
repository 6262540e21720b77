#include <algorithm>
#include <cmath>
#include <random>

#include "ptorsion/error.hpp"
#include "ptorsion/inequalities.hpp"

namespace ptorsion {

namespace {

double node_value(std::span<const double> v, std::int32_t i) {
  return i == kExterior ? 0.0 : v[static_cast<std::size_t>(i)];
}

// Forward-difference gradient and stencil mean of a field on one cell.
struct CellSample {
  std::array<double, 3> grad{0.0, 0.0, 0.0};
  double mean = 0.0;
  double abs_mean = 0.0;
};

CellSample sample_cell(std::span<const double> v, const Cell& c, int dim, double inv_h) {
  CellSample s;
  const double b = node_value(v, c.base);
  s.mean = b;
  s.abs_mean = std::abs(b);
  for (int a = 0; a < dim; ++a) {
    const double x = node_value(v, c.next[a]);
    s.grad[a] = (x - b) * inv_h;
    s.mean += x;
    s.abs_mean += std::abs(x);
  }
  s.mean /= dim + 1;
  s.abs_mean /= dim + 1;
  return s;
}

void require_matching(const ScalarField& u, const HardyWeights& hw) {
  if (u.grid_ptr() != hw.grid && !(u.grid() == *hw.grid))
    throw InvalidArgument("field and Hardy weights live on different grids");
}

double energy_of(const ScalarField& u, double p) { return dirichlet_energy(u, p); }

InequalityReport tagged(InequalityReport r, double p, std::optional<double> delta = std::nullopt) {
  r.with("p", p);
  if (delta) r.with("delta", *delta);
  return r;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

HardyWeights HardyWeights::build(const ScalarField& w, double p, double rel_floor) {
  if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
  const Grid& g = w.grid();
  const int dim = g.dimension();
  const double inv_h = 1.0 / g.spacing();
  for (double v : w.values())
    if (v < 0.0) throw InvalidArgument("torsion field must be nonnegative");

  HardyWeights hw;
  hw.grid = w.grid_ptr();
  hw.p = p;
  hw.floor = rel_floor * lp_norm(w, INFINITY);

  const auto vals = w.values();
  hw.B.resize(w.size());
  hw.node_ok.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const bool ok = vals[i] > hw.floor && vals[i] > 0.0;
    hw.node_ok[i] = ok;
    hw.B[i] = ok ? std::pow(vals[i], 1.0 - p) : 0.0;
    if (!ok) ++hw.excluded_nodes;
  }

  const auto cells = g.cells();
  hw.A.resize(cells.size());
  hw.grad_log.resize(cells.size());
  hw.cell_ok.resize(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto s = sample_cell(vals, cells[k], dim, inv_h);
    const bool ok = s.mean > hw.floor && s.mean > 0.0;
    hw.cell_ok[k] = ok;
    if (!ok) {
      ++hw.excluded_cells;
      hw.A[k] = 0.0;
      hw.grad_log[k] = {0.0, 0.0, 0.0};
      continue;
    }
    double g2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      hw.grad_log[k][a] = s.grad[a] / s.mean;
      g2 += hw.grad_log[k][a] * hw.grad_log[k][a];
    }
    hw.A[k] = std::pow(g2, 0.5 * p);
  }
  return hw;
}

HardyMoments hardy_moments(const ScalarField& u, const HardyWeights& hw) {
  require_matching(u, hw);
  const Grid& g = *hw.grid;
  const int dim = g.dimension();
  const double inv_h = 1.0 / g.spacing();
  const double p = hw.p;
  const auto vals = u.values();

  HardyMoments m;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] == 0.0) continue;
    if (!hw.node_ok[i]) throw DomainError("test field has mass where w is below the floor");
    m.Y += hw.B[i] * std::pow(std::abs(vals[i]), p);
  }
  const auto cells = g.cells();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto s = sample_cell(vals, cells[k], dim, inv_h);
    if (s.abs_mean == 0.0) continue;
    if (!hw.cell_ok[k]) throw DomainError("test field has mass on a cell where w is below the floor");
    m.X += hw.A[k] * std::pow(s.abs_mean, p);
  }
  m.X *= g.cell_volume();
  m.Y *= g.cell_volume();
  return m;
}

InequalityReport hardy_simple(const ScalarField& u, const HardyWeights& hw, double tol) {
  const auto m = hardy_moments(u, hw);
  return tagged(InequalityReport::make("hardy_simple", m.Y, energy_of(u, hw.p), tol), hw.p);
}

InequalityReport hardy_simple(const ScalarField& u, const ScalarField& w, double p, double tol) {
  return hardy_simple(u, HardyWeights::build(w, p), tol);
}

InequalityReport hardy_delta(const ScalarField& u, const HardyWeights& hw, double delta,
                             double tol) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  const double p = hw.p;
  const auto m = hardy_moments(u, hw);
  const double a = 1.0 - std::pow(delta, -1.0 / (p - 1.0));
  const double lhs = (p - 1.0) / delta * (a * m.X + m.Y / (p - 1.0));
  return tagged(InequalityReport::make("hardy_delta", lhs, energy_of(u, p), tol), p, delta);
}

InequalityReport hardy_delta(const ScalarField& u, const ScalarField& w, double p, double delta,
                             double tol) {
  return hardy_delta(u, HardyWeights::build(w, p), delta, tol);
}

InequalityReport hardy_suboptimal(const ScalarField& u, const HardyWeights& hw, double tol) {
  const double p = hw.p;
  const auto m = hardy_moments(u, hw);
  const double lhs = std::pow((p - 1.0) / p, p) * (m.X + p / (p - 1.0) * m.Y);
  return tagged(InequalityReport::make("hardy_suboptimal", lhs, energy_of(u, p), tol), p,
                std::pow(p / (p - 1.0), p - 1.0));
}

InequalityReport hardy_optimized(const ScalarField& u, const HardyWeights& hw, double tol) {
  const double p = hw.p;
  const auto m = hardy_moments(u, hw);
  if (!(m.X > 0.0)) throw InvalidArgument("optimized Hardy form needs a nonzero gradient moment");
  const double lhs =
      std::pow((p - 1.0) / p, p) * std::pow(m.X + m.Y / (p - 1.0), p) / std::pow(m.X, p - 1.0);
  return tagged(InequalityReport::make("hardy_optimized", lhs, energy_of(u, p), tol), p);
}

InequalityReport hardy_optimized(const ScalarField& u, const ScalarField& w, double p, double tol) {
  return hardy_optimized(u, HardyWeights::build(w, p), tol);
}

ScalarField extremal_field(const ScalarField& w, double p, double delta, double c) {
  if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (c == 0.0) return ScalarField::zeros(w.grid_ptr());
  return power(w, std::pow(delta, -1.0 / (p - 1.0))).scaled(c);
}

double hardy_remainder(const ScalarField& u, const HardyWeights& hw, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  require_matching(u, hw);
  const Grid& g = *hw.grid;
  const int dim = g.dimension();
  const double inv_h = 1.0 / g.spacing();
  const double p = hw.p;
  const double cu = std::pow(delta, 1.0 / p);
  const double cw = std::pow(delta, -1.0 / (p * (p - 1.0)));
  const auto vals = u.values();
  const auto cells = g.cells();

  double sum = 0.0;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto s = sample_cell(vals, cells[k], dim, inv_h);
    if (s.abs_mean == 0.0) continue;
    if (!hw.cell_ok[k]) throw DomainError("test field has mass on a cell where w is below the floor");
    double diff2 = 0.0, gu2 = 0.0, gl2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double d = cu * s.grad[a] - cw * s.mean * hw.grad_log[k][a];
      diff2 += d * d;
      gu2 += s.grad[a] * s.grad[a];
      gl2 += hw.grad_log[k][a] * hw.grad_log[k][a];
    }
    if (p >= 2.0) {
      sum += std::pow(diff2, 0.5 * p);
    } else {
      const double bracket = cu * cu * gu2 + cw * cw * s.mean * s.mean * gl2;
      if (bracket > 0.0) sum += std::pow(bracket, 0.5 * (p - 2.0)) * diff2;
    }
  }
  return sum * g.cell_volume();
}

double sharpness_upper(double p, int n) { return std::pow((p - 1.0) / p + 1.0 / n, p); }

SharpnessSample sharpness_sequence(const HardyWeights& hw, const ScalarField& w, int n) {
  if (n < 1) throw InvalidArgument("sequence index n must be at least 1");
  const double p = hw.p;
  SharpnessSample s{power(w, (p - 1.0) / p + 1.0 / n), 0.0, (p - 1.0) / p + 1.0 / n};
  const auto m = hardy_moments(s.u, hw);
  s.quotient = dirichlet_energy(s.u, p) / (m.X + p / (p - 1.0) * m.Y);
  return s;
}

TestFieldSuite::TestFieldSuite(const ScalarField& w, std::uint64_t seed) : w_(w), seed_(seed) {
  const Grid& g = w.grid();
  const int dim = g.dimension();
  for (std::size_t i = 0; i < g.interior_count(); ++i) {
    const auto idx = g.interior_lattice_index(i);
    bool deep = true;
    LatticeIndex o{0, 0, 0};
    const int r1 = dim > 1 ? 2 : 0, r2 = dim > 2 ? 2 : 0;
    for (int a = -2; a <= 2 && deep; ++a)
      for (int b = -r1; b <= r1 && deep; ++b)
        for (int c = -r2; c <= r2 && deep; ++c) {
          o = {idx[0] + a, idx[1] + b, idx[2] + c};
          deep = g.interior_at(o) != kExterior;
        }
    if (deep) deep_.push_back(i);
  }
  if (deep_.empty()) throw DomainError("mask too thin for test fields at least 2h inside");
}

ScalarField TestFieldSuite::field(std::size_t k) const {
  const Grid& g = w_.grid();
  const int dim = g.dimension();
  const double h = g.spacing();
  double extent = INFINITY;
  for (int a = 0; a < dim; ++a)
    extent = std::min(extent, static_cast<double>(g.extents()[a] - 2) * h);

  std::mt19937_64 rng(seed_ + 0x9E3779B97F4A7C15ULL * (k + 1));
  const double wmax = lp_norm(w_, INFINITY);
  for (;;) {
    const int bumps = 1 + static_cast<int>(uniform01(rng) * 2.0);
    const double wpow = 0.5 + 2.0 * uniform01(rng);
    std::vector<double> v(g.interior_count(), 0.0);
    for (int b = 0; b < bumps; ++b) {
      const auto centre = g.interior_position(
          deep_[std::min(deep_.size() - 1, static_cast<std::size_t>(uniform01(rng) * deep_.size()))]);
      const double radius = 4.0 * h + uniform01(rng) * 0.5 * extent;
      const int order = 1 + static_cast<int>(uniform01(rng) * 3.0);
      const double amp = (uniform01(rng) < 0.3 ? -1.0 : 1.0) * (0.5 + 1.5 * uniform01(rng));
      for (std::size_t j : deep_) {
        const auto x = g.interior_position(j);
        double prod = 1.0;
        for (int a = 0; a < dim && prod > 0.0; ++a) {
          const double t = (x[a] - centre[a]) / radius;
          prod *= std::pow(std::max(0.0, 1.0 - t * t), order);
        }
        if (prod > 0.0) v[j] += amp * prod * std::pow(w_[j] / wmax, wpow);
      }
    }
    if (std::any_of(v.begin(), v.end(), [](double x) { return x != 0.0; }))
      return ScalarField(w_.grid_ptr(), std::move(v));
  }
}

}  // namespace ptorsion
