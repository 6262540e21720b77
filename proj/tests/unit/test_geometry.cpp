#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ptorsion/error.hpp"
#include "ptorsion/geometry.hpp"

using namespace ptorsion;

TEST_CASE("interval rasterization") {
  const auto g = discretize(Domain::interval(0.0, 1.0), 0.25);
  REQUIRE(g->interior_count() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(g->interior_position(i)[0] == doctest::Approx(0.25 * static_cast<double>(i + 1)));
}

TEST_CASE("ball mask lies inside the ball and is reflection symmetric") {
  const double h = 0.5;
  const auto g = discretize(Domain::ball({0.0, 0.0}, 1.0), h);
  REQUIRE(g->interior_count() > 0);
  for (std::size_t i = 0; i < g->interior_count(); ++i) {
    const auto x = g->interior_position(i);
    CHECK(std::hypot(x[0], x[1]) < 1.0);
    const auto idx = g->interior_lattice_index(i);
    CHECK(g->interior_at({-idx[0], idx[1], 0}) >= 0);
    CHECK(g->interior_at({idx[0], -idx[1], 0}) >= 0);
  }
}

TEST_CASE("every interior cube lies in the open domain") {
  for (double h : {0.3, 0.1, 0.05}) {
    const auto g = discretize(Domain::ball({0.2, -0.1}, 0.9), h);
    for (std::size_t i = 0; i < g->interior_count(); ++i) {
      const auto x = g->interior_position(i);
      const double dx = std::abs(x[0] - 0.2) + h / 2, dy = std::abs(x[1] + 0.1) + h / 2;
      CHECK(dx * dx + dy * dy < 0.81);
    }
    const auto b = discretize(Domain::box({0.0, 0.0}, {1.0, 0.5}), h);
    for (std::size_t i = 0; i < b->interior_count(); ++i) {
      const auto x = b->interior_position(i);
      CHECK(x[0] - h / 2 > 0.0);
      CHECK(x[0] + h / 2 < 1.0);
      CHECK(x[1] - h / 2 > 0.0);
      CHECK(x[1] + h / 2 < 0.5);
    }
  }
}

TEST_CASE("node count grows by about 2^N when h halves") {
  const auto c1 = discretize(Domain::ball({0.0, 0.0}, 1.0), 1.0 / 64)->interior_count();
  const auto c2 = discretize(Domain::ball({0.0, 0.0}, 1.0), 1.0 / 128)->interior_count();
  CHECK(static_cast<double>(c2) / static_cast<double>(c1) == doctest::Approx(4.0).epsilon(0.05));
  const auto d1 = discretize(Domain::ball({0.0, 0.0, 0.0}, 1.0), 1.0 / 16)->interior_count();
  const auto d2 = discretize(Domain::ball({0.0, 0.0, 0.0}, 1.0), 1.0 / 32)->interior_count();
  CHECK(static_cast<double>(d2) / static_cast<double>(d1) == doctest::Approx(8.0).epsilon(0.15));
}

TEST_CASE("empty masks name the spacing threshold") {
  CHECK_THROWS_WITH_AS(discretize(Domain::interval(0.0, 1.0), 1.5),
                       doctest::Contains("h < (b - a)/2"), DomainError);
  CHECK_THROWS_WITH_AS(discretize(Domain::ball({0.0, 0.0}, 0.1), 1.0),
                       doctest::Contains("R/sqrt(N)"), DomainError);
  CHECK_THROWS_AS(discretize(Domain::box({0.0, 0.0}, {1.0, 0.1}), 0.5), DomainError);
}

TEST_CASE("descriptor validation") {
  CHECK_THROWS_AS(Domain::interval(1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Domain::ball({0.0, 0.0}, -1.0), InvalidArgument);
  CHECK_THROWS_AS(Domain::box({0.0, 0.0}, {1.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(Domain::ball_chain({1.0, 0.0}, 2), InvalidArgument);
  CHECK(Domain::ball({0.0, 0.0}, 1.0).kind() == "ball");
}

TEST_CASE("chain centers are tangent and pairwise disjoint") {
  const BallChain chain{{0.5, 0.25, 0.125, 0.0625, 0.03125}, 2};
  CHECK(chain.center(0)[0] == 0.0);
  for (std::size_t i = 0; i < chain.radii.size(); ++i)
    for (std::size_t j = i + 1; j < chain.radii.size(); ++j) {
      const double dist = std::abs(chain.center(j)[0] - chain.center(i)[0]);
      CHECK(dist >= chain.radii[i] + chain.radii[j] - 1e-15);
    }
  CHECK(chain.center(1)[0] == 0.75);
  CHECK(chain.outer_reach(1) == 1.0);
}

TEST_CASE("chain discretization splits into disjoint components") {
  const auto g = discretize(Domain::ball_chain({0.5, 0.25, 0.125}, 2), 1.0 / 64);
  const auto labels = component_labels(*g);
  CHECK(*std::max_element(labels.begin(), labels.end()) == 2);
}

TEST_CASE("chain radii law") {
  const auto r = chain_radii(0.5, 8, 2);
  CHECK(r[0] == 1.0);
  CHECK(r[7] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(chain_radii(1.0, 8, 2), InvalidArgument);
  CHECK_THROWS_AS(chain_radii(0.0, 8, 2), InvalidArgument);
}

TEST_CASE("summability of geometric chains") {
  std::vector<double> radii;
  for (int i = 1; i <= 40; ++i) radii.push_back(std::pow(0.5, i));
  const auto s = chain_summability(radii, 1.0, 2);
  CHECK(s.exponent == 4.0);
  CHECK(s.partial_sum == doctest::Approx(1.0 / 15.0).epsilon(1e-12));
  CHECK(s.verdict == SeriesVerdict::converges);
  CHECK_THROWS_AS(chain_summability(radii, 2.0, 2), InvalidArgument);
}

TEST_CASE("equal radii diverge") {
  const std::vector<double> radii(200, 1.0);
  CHECK(chain_summability(radii, 1.0, 2).verdict == SeriesVerdict::diverges);
}

TEST_CASE("critical chain is in L^1 but not L^s") {
  const auto radii = chain_radii(0.5, 4000, 2);
  CHECK(chain_lebesgue_summability(radii, 1.0, 2).verdict == SeriesVerdict::converges);
  CHECK(chain_lebesgue_summability(radii, 0.5, 2).verdict == SeriesVerdict::diverges);
  // q with q/(2-q) = 1/2 is 2/3, outside the criterion's range.
  CHECK_THROWS_AS(chain_summability(radii, 2.0 / 3.0, 2), InvalidArgument);
  CHECK(chain_summability(radii, 1.0, 2).verdict == SeriesVerdict::converges);
}

TEST_CASE("series verdicts on power laws") {
  std::vector<double> harmonic, square;
  for (int i = 1; i <= 1000; ++i) {
    harmonic.push_back(1.0 / i);
    square.push_back(1.0 / (static_cast<double>(i) * i));
  }
  CHECK(series_verdict(harmonic).verdict == SeriesVerdict::diverges);
  CHECK(series_verdict(square).verdict == SeriesVerdict::converges);
  CHECK(series_verdict(square).tail_slope == doctest::Approx(-2.0));
  CHECK(to_string(SeriesVerdict::inconclusive) == "inconclusive");
}

TEST_CASE("cut radius clips the chain") {
  const auto d = Domain::ball_chain({0.5, 0.25, 0.125}, 2);
  const auto full = discretize(d, 1.0 / 64);
  const auto cut = discretize(d, 1.0 / 64, 0.9);
  CHECK(cut->interior_count() < full->interior_count());
  for (std::size_t i = 0; i < cut->interior_count(); ++i) {
    const auto x = cut->interior_position(i);
    CHECK(std::hypot(x[0], x[1]) < 0.9);
  }
}
