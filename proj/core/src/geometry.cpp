#include "ptorsion/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "ptorsion/error.hpp"

namespace ptorsion {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be finite");
}

// Axis-aligned box of lattice indices [lo, hi] (inclusive).
struct IndexBox {
  LatticeIndex lo{0, 0, 0};
  LatticeIndex hi{0, 0, 0};
};

// Lattice nodes whose cube could fit strictly inside [low, high].
IndexBox index_box(const std::vector<double>& low, const std::vector<double>& high, double h,
                   int dim) {
  IndexBox box;
  for (int a = 0; a < dim; ++a) {
    box.lo[a] = static_cast<std::int64_t>(std::floor(low[a] / h)) - 1;
    box.hi[a] = static_cast<std::int64_t>(std::ceil(high[a] / h)) + 1;
  }
  return box;
}

IndexBox merge(const IndexBox& a, const IndexBox& b, int dim) {
  IndexBox m = a;
  for (int k = 0; k < dim; ++k) {
    m.lo[k] = std::min(a.lo[k], b.lo[k]);
    m.hi[k] = std::max(a.hi[k], b.hi[k]);
  }
  return m;
}

using CubeTest = std::function<bool(const std::array<double, 3>&)>;

class MaskBuilder {
 public:
  MaskBuilder(int dim, double h, const IndexBox& box) : dim_(dim), h_(h), box_(box) {
    for (int a = 0; a < kMaxDimension; ++a)
      extents_[a] = a < dim ? box.hi[a] - box.lo[a] + 1 : 1;
    mask_.assign(static_cast<std::size_t>(extents_[0] * extents_[1] * extents_[2]), 0);
  }

  // Marks nodes inside `sub` (clamped to the full box) that pass `test`.
  void fill(const IndexBox& sub, const CubeTest& test) {
    LatticeIndex lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < dim_; ++a) {
      lo[a] = std::max(sub.lo[a], box_.lo[a]);
      hi[a] = std::min(sub.hi[a], box_.hi[a]);
    }
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (std::int64_t i = lo[0]; i <= hi[0]; ++i) {
      x[0] = static_cast<double>(i) * h_;
      for (std::int64_t j = lo[1]; j <= hi[1]; ++j) {
        if (dim_ > 1) x[1] = static_cast<double>(j) * h_;
        for (std::int64_t k = lo[2]; k <= hi[2]; ++k) {
          if (dim_ > 2) x[2] = static_cast<double>(k) * h_;
          if (!test(x)) continue;
          const std::int64_t li = i - box_.lo[0];
          const std::int64_t lj = dim_ > 1 ? j - box_.lo[1] : 0;
          const std::int64_t lk = dim_ > 2 ? k - box_.lo[2] : 0;
          mask_[static_cast<std::size_t>((li * extents_[1] + lj) * extents_[2] + lk)] = 1;
        }
      }
    }
  }

  bool empty() const { return std::none_of(mask_.begin(), mask_.end(), [](auto v) { return v; }); }

  std::shared_ptr<const Grid> build() {
    LatticeIndex lower{0, 0, 0};
    for (int a = 0; a < dim_; ++a) lower[a] = box_.lo[a];
    return std::make_shared<const Grid>(dim_, h_, lower, extents_, std::move(mask_));
  }

 private:
  int dim_;
  double h_;
  IndexBox box_;
  LatticeIndex extents_{1, 1, 1};
  std::vector<std::uint8_t> mask_;
};

// Closed cube of side h around x inside the open ball (c, r).
bool cube_in_ball(const std::array<double, 3>& x, const double* c, double r, double h,
                  int dim) {
  double far = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double d = std::abs(x[a] - (c ? c[a] : 0.0)) + 0.5 * h;
    far += d * d;
  }
  return far < r * r;
}

bool cube_in_box(const std::array<double, 3>& x, const std::vector<double>& low,
                 const std::vector<double>& high, double h, int dim) {
  for (int a = 0; a < dim; ++a)
    if (!(x[a] - 0.5 * h > low[a] && x[a] + 0.5 * h < high[a])) return false;
  return true;
}

std::string format_threshold(const char* what, double value) {
  std::ostringstream os;
  os.precision(6);
  os << what << value;
  return os.str();
}

}  // namespace

std::vector<double> BallChain::center(std::size_t i) const {
  if (i >= radii.size()) throw InvalidArgument("ball chain index out of range");
  std::vector<double> c(static_cast<std::size_t>(dimension), 0.0);
  for (std::size_t k = 0; k < i; ++k) c[0] += radii[k] + radii[k + 1];
  return c;
}

double BallChain::outer_reach(std::size_t i) const { return center(i)[0] + radii[i]; }

Domain Domain::interval(double a, double b) {
  require_finite(a, "interval endpoint");
  require_finite(b, "interval endpoint");
  if (!(b > a)) throw InvalidArgument("interval requires a < b");
  return Domain(Interval{a, b}, 1);
}

Domain Domain::box(std::vector<double> low, std::vector<double> high) {
  if (low.empty() || low.size() != high.size())
    throw InvalidArgument("box corners must have the same positive dimension");
  for (std::size_t a = 0; a < low.size(); ++a) {
    require_finite(low[a], "box corner");
    require_finite(high[a], "box corner");
    if (!(high[a] > low[a])) throw InvalidArgument("box extents must be positive on every axis");
  }
  const int dim = static_cast<int>(low.size());
  return Domain(Box{std::move(low), std::move(high)}, dim);
}

Domain Domain::ball(std::vector<double> center, double radius) {
  if (center.empty()) throw InvalidArgument("ball center must have positive dimension");
  for (double c : center) require_finite(c, "ball center");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw InvalidArgument("ball radius must be positive");
  const int dim = static_cast<int>(center.size());
  return Domain(Ball{std::move(center), radius}, dim);
}

Domain Domain::ball_chain(std::vector<double> radii, int dimension) {
  if (dimension < 1) throw InvalidArgument("ball chain dimension must be positive");
  if (radii.empty()) throw InvalidArgument("ball chain needs at least one radius");
  for (double r : radii)
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("chain radii must be positive");
  return Domain(BallChain{std::move(radii), dimension}, dimension);
}

Domain Domain::masked(std::shared_ptr<const Grid> grid) {
  if (!grid) throw InvalidArgument("masked domain needs a grid");
  const int dim = grid->dimension();
  return Domain(MaskedGrid{std::move(grid)}, dim);
}

std::string Domain::kind() const {
  struct Visitor {
    std::string operator()(const Interval&) const { return "interval"; }
    std::string operator()(const Box&) const { return "box"; }
    std::string operator()(const Ball&) const { return "ball"; }
    std::string operator()(const BallChain&) const { return "ball_chain"; }
    std::string operator()(const MaskedGrid&) const { return "masked"; }
  };
  return std::visit(Visitor{}, shape_);
}

std::shared_ptr<const Grid> discretize(const Domain& domain, double h,
                                       std::optional<double> clip_radius) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("spacing h must be positive");
  const int dim = domain.dimension();
  if (dim > kMaxDimension)
    throw InvalidArgument("rasterization supports dimensions 1 to 3 only");
  if (clip_radius && !(*clip_radius > 0.0))
    throw InvalidArgument("cut radius must be positive");

  auto clip_ok = [&](const std::array<double, 3>& x) {
    return !clip_radius || cube_in_ball(x, nullptr, *clip_radius, h, dim);
  };

  const auto& shape = domain.shape();

  if (const auto* mg = std::get_if<MaskedGrid>(&shape)) {
    const Grid& g = *mg->grid;
    if (g.spacing() != h)
      throw InvalidArgument("masked grid spacing differs from requested h");
    if (!clip_radius) return mg->grid;
    IndexBox box;
    for (int a = 0; a < dim; ++a) {
      box.lo[a] = g.lower()[a];
      box.hi[a] = g.lower()[a] + g.extents()[a] - 1;
    }
    MaskBuilder builder(dim, h, box);
    builder.fill(box, [&](const std::array<double, 3>& x) {
      LatticeIndex idx{0, 0, 0};
      for (int a = 0; a < dim; ++a) idx[a] = std::llround(x[a] / h);
      return g.interior_at(idx) != kExterior && clip_ok(x);
    });
    if (builder.empty()) throw DomainError("masked grid does not meet the cut ball");
    return builder.build();
  }

  std::vector<IndexBox> parts;
  std::vector<CubeTest> tests;
  std::string threshold;

  if (const auto* iv = std::get_if<Interval>(&shape)) {
    std::vector<double> lo{iv->a}, hi{iv->b};
    parts.push_back(index_box(lo, hi, h, 1));
    tests.push_back([lo, hi, h](const auto& x) { return cube_in_box(x, lo, hi, h, 1); });
    threshold = format_threshold("h < (b - a)/2 = ", 0.5 * (iv->b - iv->a));
  } else if (const auto* bx = std::get_if<Box>(&shape)) {
    parts.push_back(index_box(bx->low, bx->high, h, dim));
    tests.push_back([bx, h, dim](const auto& x) {
      return cube_in_box(x, bx->low, bx->high, h, dim);
    });
    double m = bx->high[0] - bx->low[0];
    for (int a = 1; a < dim; ++a) m = std::min(m, bx->high[a] - bx->low[a]);
    threshold = format_threshold("h < min extent/2 = ", 0.5 * m);
  } else if (const auto* bl = std::get_if<Ball>(&shape)) {
    std::vector<double> lo(bl->center), hi(bl->center);
    for (int a = 0; a < dim; ++a) {
      lo[a] -= bl->radius;
      hi[a] += bl->radius;
    }
    parts.push_back(index_box(lo, hi, h, dim));
    tests.push_back([bl, h, dim](const auto& x) {
      return cube_in_ball(x, bl->center.data(), bl->radius, h, dim);
    });
    threshold = format_threshold("h < R/sqrt(N) = ", bl->radius / std::sqrt(double(dim)));
  } else if (const auto* ch = std::get_if<BallChain>(&shape)) {
    double rmax = 0.0;
    std::vector<double> c(static_cast<std::size_t>(dim), 0.0);
    for (std::size_t i = 0; i < ch->radii.size(); ++i) {
      if (i > 0) c[0] += ch->radii[i - 1] + ch->radii[i];
      const double r = ch->radii[i];
      if (clip_radius && c[0] - r >= *clip_radius) break;
      std::vector<double> lo(c), hi(c);
      for (int a = 0; a < dim; ++a) {
        lo[a] -= r;
        hi[a] += r;
      }
      parts.push_back(index_box(lo, hi, h, dim));
      tests.push_back([c, r, h, dim](const auto& x) { return cube_in_ball(x, c.data(), r, h, dim); });
      rmax = std::max(rmax, r);
    }
    threshold = format_threshold("h < max radius/sqrt(N) = ", rmax / std::sqrt(double(dim)));
  }

  if (parts.empty()) throw DomainError("empty mask: cut radius misses the domain");
  IndexBox all = parts.front();
  for (const auto& p : parts) all = merge(all, p, dim);

  MaskBuilder builder(dim, h, all);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& test = tests[i];
    builder.fill(parts[i], [&](const auto& x) { return test(x) && clip_ok(x); });
  }
  if (builder.empty())
    throw DomainError("empty mask for " + domain.kind() + " (spacing too coarse; need " +
                      threshold + (clip_radius ? ", or a larger cut radius)" : ")"));
  return builder.build();
}

std::vector<double> chain_radii(double s, std::size_t count, int dimension) {
  if (!(s > 0.0 && s < 1.0)) throw InvalidArgument("chain exponent s must lie in (0,1)");
  if (count < 1) throw InvalidArgument("chain needs at least one ball");
  if (dimension < 1) throw InvalidArgument("dimension must be positive");
  const double e = -1.0 / (2.0 * s + dimension);
  std::vector<double> r(count);
  for (std::size_t i = 0; i < count; ++i) r[i] = std::pow(static_cast<double>(i + 1), e);
  return r;
}

std::string to_string(SeriesVerdict verdict) {
  switch (verdict) {
    case SeriesVerdict::converges: return "converges";
    case SeriesVerdict::diverges: return "diverges";
    case SeriesVerdict::inconclusive: break;
  }
  return "inconclusive";
}

SummabilityResult series_verdict(std::span<const double> terms, double margin) {
  SummabilityResult res;
  for (double t : terms) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("series terms must be nonnegative");
    res.partial_sum += t;
  }
  const std::size_t n = terms.size();
  if (n < 4) return res;

  // Fit log t_i = c + slope*log i over the tail; underflowed terms are skipped.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0, zeros = 0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = n / 2; i < n; ++i) {
    if (terms[i] == 0.0) {
      ++zeros;
      continue;
    }
    const double x = std::log(static_cast<double>(i + 1));
    const double y = std::log(terms[i]);
    pts.emplace_back(x, y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) {
    res.verdict = zeros > 0 ? SeriesVerdict::converges : SeriesVerdict::inconclusive;
    res.tail_slope = -INFINITY;
    return res;
  }
  const double md = static_cast<double>(m);
  const double denom = md * sxx - sx * sx;
  res.tail_slope = (md * sxy - sx * sy) / denom;
  const double icept = (sy - res.tail_slope * sx) / md;
  double worst = 0.0;
  for (const auto& [x, y] : pts) worst = std::max(worst, std::abs(y - icept - res.tail_slope * x));

  if (res.tail_slope < -1.0 - margin)
    res.verdict = SeriesVerdict::converges;
  else if (res.tail_slope > -1.0 + margin)
    res.verdict = SeriesVerdict::diverges;
  else if (worst < 1e-9)
    res.verdict = res.tail_slope >= -1.0 - 1e-9 ? SeriesVerdict::diverges : SeriesVerdict::converges;
  return res;
}

SummabilityResult chain_lebesgue_summability(std::span<const double> radii, double s,
                                             int dimension) {
  if (!(s > 0.0)) throw InvalidArgument("summability exponent must be positive");
  const double e = 2.0 * s + dimension;
  std::vector<double> terms;
  terms.reserve(radii.size());
  for (double r : radii) {
    if (!(r > 0.0)) throw InvalidArgument("chain radii must be positive");
    terms.push_back(std::pow(r, e));
  }
  auto res = series_verdict(terms);
  res.exponent = e;
  return res;
}

SummabilityResult chain_summability(std::span<const double> radii, double q, int dimension) {
  if (!(q >= 1.0 && q < 2.0)) throw InvalidArgument("q must lie in [1,2) for the chain criterion");
  return chain_lebesgue_summability(radii, q / (2.0 - q), dimension);
}

}  // namespace ptorsion
