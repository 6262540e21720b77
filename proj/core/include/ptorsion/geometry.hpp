#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ptorsion/grid.hpp"

namespace ptorsion {

struct Interval {
  double a = 0.0;
  double b = 1.0;
};

struct Box {
  std::vector<double> low;
  std::vector<double> high;
};

struct Ball {
  std::vector<double> center;
  double radius = 1.0;
};

/// Disjoint union of tangent balls along the first axis. Centers are derived:
/// the first ball sits at the origin and each next ball touches its
/// predecessor.
struct BallChain {
  std::vector<double> radii;
  int dimension = 2;

  std::vector<double> center(std::size_t i) const;
  /// Euclidean norm of the i-th center plus its radius: the smallest cut
  /// radius B_R (centered at the origin) containing the whole ball.
  double outer_reach(std::size_t i) const;
};

/// A domain given directly by a discrete mask.
struct MaskedGrid {
  std::shared_ptr<const Grid> grid;
};

/// Continuous domain descriptor in dimension N.
class Domain {
 public:
  using Shape = std::variant<Interval, Box, Ball, BallChain, MaskedGrid>;

  static Domain interval(double a, double b);
  static Domain box(std::vector<double> low, std::vector<double> high);
  static Domain ball(std::vector<double> center, double radius);
  static Domain ball_chain(std::vector<double> radii, int dimension);
  static Domain masked(std::shared_ptr<const Grid> grid);

  int dimension() const noexcept { return dimension_; }
  const Shape& shape() const noexcept { return shape_; }
  /// Short human-readable tag ("ball", "box", ...).
  std::string kind() const;

 private:
  Domain(Shape shape, int dimension) : shape_(std::move(shape)), dimension_(dimension) {}

  Shape shape_;
  int dimension_;
};

/// Conservative rasterization: a lattice node is interior iff the closed cube
/// of side h centered at it lies in the open domain (and, when `clip_radius`
/// is set, in the open ball of that radius about the origin).
///
/// Throws DomainError when the resulting mask is empty, naming the spacing
/// threshold that guarantees a nonempty mask.
std::shared_ptr<const Grid> discretize(const Domain& domain, double h,
                                       std::optional<double> clip_radius = std::nullopt);

/// r_i = i^{-1/(2s+N)}, i = 1..count.
std::vector<double> chain_radii(double s, std::size_t count, int dimension);

enum class SeriesVerdict { converges, diverges, inconclusive };

std::string to_string(SeriesVerdict verdict);

struct SummabilityResult {
  double exponent = 0.0;      ///< power applied to each radius
  double partial_sum = 0.0;   ///< sum of radius^exponent over the list
  double tail_slope = 0.0;    ///< fitted log-log slope of the terms
  SeriesVerdict verdict = SeriesVerdict::inconclusive;
};

/// Tail behaviour of a positive series from its terms: log-log slope fit over
/// the last half of the terms. Slope below -1-margin converges, above
/// -1+margin diverges. When the terms lie on an exact power law the sign of
/// slope+1 decides (the harmonic series diverges).
SummabilityResult series_verdict(std::span<const double> terms, double margin = 0.1);

/// Summability of the chain's torsion in L^s: the series of r_i^{2s+N}.
SummabilityResult chain_lebesgue_summability(std::span<const double> radii, double s,
                                             int dimension);

/// p = 2 criterion for w in L^{q/(2-q)}: the series of r_i^{2q/(2-q)+N}.
/// Requires 1 <= q < 2.
SummabilityResult chain_summability(std::span<const double> radii, double q, int dimension);

}  // namespace ptorsion
