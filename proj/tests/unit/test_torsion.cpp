#include <doctest.h>

#include <cmath>

#include "ptorsion/error.hpp"
#include "ptorsion/geometry.hpp"
#include "ptorsion/torsion.hpp"

using namespace ptorsion;

namespace {

double rel_sup_error(const ScalarField& a, const ScalarField& b) {
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    err = std::max(err, std::abs(a[i] - b[i]));
    ref = std::max(ref, std::abs(b[i]));
  }
  return err / ref;
}

// Center value of the torsion function of the unit square, by its double sine series.
double square_center_oracle() {
  double s = 0.0;
  for (int m = 1; m < 400; m += 2)
    for (int n = 1; n < 400; n += 2) {
      const double sign = ((m + n) / 2 - 1) % 2 == 0 ? 1.0 : -1.0;
      s += sign / (m * n * (double(m) * m + double(n) * n));
    }
  return 16.0 / std::pow(M_PI, 4) * s;
}

}  // namespace

TEST_CASE("closed-form ball torsion") {
  for (int n : {1, 2, 3})
    for (double p : {1.5, 2.0, 3.0, 4.0})
      CHECK(ball_torsion_value(1.0, n, p, 0.0) ==
            doctest::Approx((p - 1.0) / p * std::pow(n, -1.0 / (p - 1.0))).epsilon(1e-14));
  CHECK(ball_torsion_value(1.0, 2, 2.0, 0.5) == doctest::Approx(0.75 / 4.0));
  CHECK(ball_torsion_value(1.0, 2, 2.0, 1.0) == 0.0);
  CHECK(ball_torsion_value(1.0, 2, 2.0, 1.5) == 0.0);
  // Torsion of B_{2R} at 2x is 2^{p'} times torsion of B_R at x.
  for (double p : {1.5, 2.0, 3.0})
    for (double r : {0.0, 0.3, 0.7}) {
      const double pc = p / (p - 1.0);
      CHECK(ball_torsion_value(2.0, 2, p, 2.0 * r) ==
            doctest::Approx(std::pow(2.0, pc) * ball_torsion_value(1.0, 2, p, r)).epsilon(1e-13));
    }
}

TEST_CASE("exact profile sampled on a grid") {
  const auto g = discretize(Domain::ball({0.0, 0.0}, 1.0), 1.0 / 16);
  const auto w = exact_ball_torsion(1.0, 2.0, g);
  CHECK(lp_norm(w, INFINITY) == doctest::Approx(0.25));
  const auto big = discretize(Domain::ball({0.0, 0.0}, 2.0), 1.0 / 16);
  CHECK_THROWS_AS(exact_ball_torsion(1.0, 2.0, big), DomainError);
}

TEST_CASE("interval torsion is exact at the nodes for p = 2") {
  const auto g = discretize(Domain::interval(0.0, 1.0), 1.0 / 32);
  const auto t = solve_torsion(g, 2.0);
  for (std::size_t i = 0; i < t.w.size(); ++i) {
    const double x = g->interior_position(i)[0];
    CHECK(t.w[i] == doctest::Approx(x * (1.0 - x) / 2.0).epsilon(1e-9));
  }
  CHECK(t.integral == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("unit square center value") {
  const double oracle = square_center_oracle();
  CHECK(oracle == doctest::Approx(0.0736713).epsilon(1e-5));
  const auto t = solve_torsion(discretize(Domain::box({0.0, 0.0}, {1.0, 1.0}), 1.0 / 128), 2.0);
  CHECK(t.sup_norm == doctest::Approx(oracle).epsilon(0.02));
}

TEST_CASE("ball solve against the closed form") {
  for (double p : {2.0, 3.0}) {
    const auto g = discretize(Domain::ball({0.0, 0.0}, 1.0), 1.0 / 64);
    const auto t = solve_torsion(g, p);
    CHECK(rel_sup_error(t.w, exact_ball_torsion(1.0, p, g)) < 0.02);
  }
}

TEST_CASE("ball error decreases under refinement") {
  for (double p : {1.5, 2.0, 3.0}) {
    double prev = INFINITY;
    for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
      const auto g = discretize(Domain::ball({0.0, 0.0}, 1.0), h);
      const double err = rel_sup_error(solve_torsion(g, p).w, exact_ball_torsion(1.0, p, g));
      CHECK(err < prev);
      prev = err;
    }
  }
}

TEST_CASE("solver invariants") {
  const auto g = discretize(Domain::ball({0.1, 0.0}, 0.8), 1.0 / 32);
  for (double p : {1.5, 2.0, 3.0}) {
    SolverOptions o;
    const auto t = solve_torsion(g, p, o);
    for (double v : t.w.values()) CHECK(v >= 0.0);
    CHECK(t.rigidity == std::pow(t.integral, p - 1.0));
    CHECK(weak_residual(t.w, p) <= o.tol);
    CHECK(energy_identity_check(t, o.tol).pass());
    CHECK(dirichlet_energy(t.w, p) == doctest::Approx(t.integral).epsilon(2e-8));
  }
}

TEST_CASE("solver reports non-convergence") {
  const auto g = discretize(Domain::ball({0.0, 0.0}, 1.0), 1.0 / 16);
  SolverOptions o;
  o.max_iter = 2;
  try {
    solve_torsion(g, 3.0, o);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.residual() > o.tol);
    CHECK(e.iterations() == 2);
  }
  CHECK_THROWS_AS(solve_torsion(g, 1.0), InvalidArgument);
}

TEST_CASE("domain monotonicity") {
  const double h = 1.0 / 32;
  const auto big = discretize(Domain::ball({0.0, 0.0}, 1.0), h);
  const auto small = discretize(Domain::box({-0.5, -0.5}, {0.6, 0.4}), h);
  for (double p : {1.5, 2.0, 3.0}) {
    SolverOptions o;
    const auto wb = solve_torsion(big, p, o).w;
    const auto ws = extend_to(solve_torsion(small, p, o).w, big);
    for (std::size_t i = 0; i < wb.size(); ++i) CHECK(ws[i] <= wb[i] + 2.0 * o.tol);
  }
}

TEST_CASE("exhaustion stabilizes once the domain is covered") {
  const auto seq = exhaustion_sequence(Domain::ball({0.0, 0.0}, 1.0), 2.0, {2.0, 3.0}, 1.0 / 32);
  REQUIRE(seq.size() == 2);
  for (std::size_t i = 0; i < seq[0].w.size(); ++i)
    CHECK(seq[0].w[i] == doctest::Approx(seq[1].w[i]).epsilon(1e-12));
  CHECK_THROWS_AS(exhaustion_sequence(Domain::ball({0.0, 0.0}, 1.0), 2.0, {3.0, 2.0}, 0.1),
                  InvalidArgument);
}

TEST_CASE("exhaustion of a chain is nodewise non-decreasing") {
  const auto chain = Domain::ball_chain({0.5, 0.25, 0.125, 0.0625}, 2);
  const SolverOptions o;
  const auto seq = exhaustion_sequence(chain, 2.0, {0.9, 1.1, 1.3}, 1.0 / 128, o);
  for (std::size_t k = 1; k < seq.size(); ++k)
    for (std::size_t i = 0; i < seq[k].w.size(); ++i) CHECK(seq[k - 1].w[i] <= seq[k].w[i] + 2.0 * o.tol);
}

TEST_CASE("L-infinity versus L1 bound") {
  // Sharp constant of ‖u‖_6² <= S ‖∇u‖_2² in three dimensions.
  const double s32 = 1.0 / (3.0 * M_PI) * std::pow(2.0 / std::tgamma(1.5), 2.0 / 3.0);
  const auto g = discretize(Domain::ball({0.0, 0.0, 0.0}, 1.0), 1.0 / 24);
  const auto exact = make_torsion_result(exact_ball_torsion(1.0, 2.0, g), 2.0);
  CHECK(exact.sup_norm == doctest::Approx(1.0 / 6.0));
  CHECK(exact.integral == doctest::Approx(4.0 * M_PI / 45.0).epsilon(0.05));
  const auto r = linfty_l1_check(exact, s32);
  CHECK(r.pass);
  CHECK(r.ratio < 1.0);

  const auto unchecked = linfty_l1_check(exact, std::nullopt);
  CHECK(unchecked.status == CheckStatus::unchecked);
  CHECK(unchecked.pass);
  const auto g2 = discretize(Domain::ball({0.0, 0.0}, 1.0), 1.0 / 16);
  CHECK(linfty_l1_check(make_torsion_result(exact_ball_torsion(1.0, 2.0, g2), 2.0), 1.0).status ==
        CheckStatus::unchecked);
  CHECK(linfty_l1_check(make_torsion_result(ScalarField::zeros(g), 2.0), s32).pass);
}

TEST_CASE("L-infinity bound is scale covariant") {
  const double s32 = 0.18;
  const auto g1 = discretize(Domain::ball({0.0, 0.0, 0.0}, 1.0), 1.0 / 12);
  const auto g2 = discretize(Domain::ball({0.0, 0.0, 0.0}, 2.0), 1.0 / 6);
  const auto r1 = linfty_l1_check(make_torsion_result(exact_ball_torsion(1.0, 2.0, g1), 2.0), s32);
  const auto r2 = linfty_l1_check(make_torsion_result(exact_ball_torsion(2.0, 2.0, g2), 2.0), s32);
  CHECK(r2.lhs / r1.lhs == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r2.rhs / r1.rhs == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("composition probes on the disk") {
  const auto disk = Domain::ball({0.0, 0.0}, 1.0);
  const auto div = composition_probe(disk, 2.0, 0.5, {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32});
  CHECK(div.verdict == ProbeVerdict::divergent);
  const auto conv = composition_probe(disk, 2.0, 1.0, {1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256});
  CHECK(conv.verdict == ProbeVerdict::convergent);
  CHECK_THROWS_AS(composition_probe(disk, 2.0, 1.0, {0.1, 0.05, 0.025}), InvalidArgument);
  CHECK_THROWS_AS(composition_probe(disk, 2.0, 1.0, {0.1, 0.05, 0.02, 0.01}), InvalidArgument);
  CHECK(to_string(ProbeVerdict::divergent) == "divergent");
}
