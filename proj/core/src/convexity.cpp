#include <algorithm>
#include <cmath>
#include <limits>

#include "ptorsion/error.hpp"
#include "ptorsion/inequalities.hpp"

namespace ptorsion {

namespace {

constexpr double kAbsSlack = 1e-12;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void check_pair(std::span<const double> a, std::span<const double> b, double p) {
  if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
  if (a.size() != b.size() || a.empty()) throw InvalidArgument("vectors must share a dimension");
  if (p < 2.0 && dot(a, a) + dot(b, b) == 0.0)
    throw InvalidArgument("degenerate pair: both vectors vanish with p < 2");
}

struct YoungParts {
  double lhs;       // ⟨ξ,z⟩
  double bound;     // |z|^p/p + |ξ|^{p'}/p'
  double factor;    // (2/p)(|z|² + |ξ|^{2/(p-1)})^{(p-2)/2} |z - |ξ|^{p'-2}ξ|²
};

YoungParts young_parts(std::span<const double> z, std::span<const double> xi, double p) {
  const double pc = p / (p - 1.0);
  const double nz = norm(z), nx = norm(xi);
  const double scale = nx > 0.0 ? std::pow(nx, pc - 2.0) : 0.0;
  double diff2 = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double d = z[i] - scale * xi[i];
    diff2 += d * d;
  }
  const double base = nz * nz + std::pow(nx, 2.0 / (p - 1.0));
  const double weight = base > 0.0 ? std::pow(base, 0.5 * (p - 2.0)) : 0.0;
  return {dot(xi, z), std::pow(nz, p) / p + std::pow(nx, pc) / pc, 2.0 / p * weight * diff2};
}

struct ConvexParts {
  double gap;     // ½|z|^p + ½|v|^p - |(z+v)/2|^p
  double factor;  // (|z|² + |v|²)^{(p-2)/2} |z-v|²
  double mean;    // ½|z|^p + ½|v|^p
  double mid;     // |(z+v)/2|^p
};

ConvexParts convex_parts(std::span<const double> z, std::span<const double> v, double p) {
  double mid2 = 0.0, diff2 = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double m = 0.5 * (z[i] + v[i]);
    const double d = z[i] - v[i];
    mid2 += m * m;
    diff2 += d * d;
  }
  const double nz2 = dot(z, z), nv2 = dot(v, v);
  const double mean = 0.5 * std::pow(nz2, 0.5 * p) + 0.5 * std::pow(nv2, 0.5 * p);
  const double mid = std::pow(mid2, 0.5 * p);
  const double base = nz2 + nv2;
  const double factor = base > 0.0 ? std::pow(base, 0.5 * (p - 2.0)) * diff2 : 0.0;
  return {mean - mid, factor, mean, mid};
}

double radical_inverse(std::uint64_t k, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base), f = inv, r = 0.0;
  while (k > 0) {
    r += f * static_cast<double>(k % base);
    k /= base;
    f *= inv;
  }
  return r;
}

template <class Ratio>
double sampled_infimum(std::size_t samples, Ratio&& ratio) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples; ++k) {
    const auto h = halton_pair(k + 1);
    const std::array<double, 2> a{h[0], h[1]}, b{h[2], h[3]};
    if (const auto r = ratio(std::span<const double>(a), std::span<const double>(b)))
      best = std::min(best, *r);
  }
  return best;
}

}  // namespace

std::array<double, 4> halton_pair(std::uint64_t k) {
  constexpr std::array<std::uint64_t, 4> bases{2, 3, 5, 7};
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) out[i] = 4.0 * radical_inverse(k, bases[i]) - 2.0;
  return out;
}

InequalityReport young_check(std::span<const double> z, std::span<const double> xi, double p,
                             double C) {
  check_pair(z, xi, p);
  const auto y = young_parts(z, xi, p);
  auto r = InequalityReport::make("young", y.lhs, y.bound - C * y.factor, 0.0, kAbsSlack);
  r.with("p", p).with("C", C);
  return r;
}

InequalityReport convexity_check(std::span<const double> z, std::span<const double> v, double p,
                                 double C) {
  check_pair(z, v, p);
  const auto c = convex_parts(z, v, p);
  auto r = InequalityReport::make("convexity", c.mid + C * c.factor, c.mean, 0.0, kAbsSlack);
  r.with("p", p).with("C", C);
  return r;
}

double estimate_young_constant(double p, std::size_t samples) {
  if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
  return sampled_infimum(samples, [p](auto z, auto xi) -> std::optional<double> {
    const auto y = young_parts(z, xi, p);
    // Near the equality ray both gap and factor are rounding noise.
    if (!(y.factor > 1e-8 * std::max(y.bound, 1e-300))) return std::nullopt;
    return (y.bound - y.lhs) / y.factor;
  });
}

double estimate_convexity_constant(double p, std::size_t samples) {
  if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
  return sampled_infimum(samples, [p](auto z, auto v) -> std::optional<double> {
    const auto c = convex_parts(z, v, p);
    if (!(c.factor > 1e-8 * std::max(c.mean, 1e-300))) return std::nullopt;
    return c.gap / c.factor;
  });
}

}  // namespace ptorsion
