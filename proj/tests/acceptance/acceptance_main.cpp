// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ptorsion/cli.hpp"
#include "ptorsion/config.hpp"
#include "ptorsion/exponents.hpp"
#include "ptorsion/geometry.hpp"
#include "ptorsion/inequalities.hpp"
#include "ptorsion/spectral.hpp"
#include "ptorsion/torsion.hpp"

using namespace ptorsion;
namespace fs = std::filesystem;

namespace {

constexpr double kTol = 0.02;
// First zero of J_0.
constexpr double kJ0 = 2.404825557695773;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

Domain unit_disk() { return Domain::ball({0.0, 0.0}, 1.0); }
Domain unit_square() { return Domain::box({0.0, 0.0}, {1.0, 1.0}); }

double rel_sup_error(const ScalarField& a, const ScalarField& b) {
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    err = std::max(err, std::abs(a[i] - b[i]));
    ref = std::max(ref, std::abs(b[i]));
  }
  return err / ref;
}

// Center value of the unit-square torsion function by its double sine series.
double square_center() {
  double s = 0.0;
  for (int m = 1; m < 600; m += 2)
    for (int n = 1; n < 600; n += 2) {
      const double sign = ((m + n) / 2 - 1) % 2 == 0 ? 1.0 : -1.0;
      s += sign / (m * n * (double(m) * m + double(n) * n));
    }
  return 16.0 / std::pow(M_PI, 4) * s;
}

void ball_exactness(Outcome& o) {
  for (double p : {1.5, 2.0, 3.0}) {
    std::vector<double> errs;
    for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
      const auto g = discretize(unit_disk(), h);
      errs.push_back(rel_sup_error(solve_torsion(g, p).w, exact_ball_torsion(1.0, p, g)));
    }
    o.detail << " p=" << p << ":";
    for (double e : errs) o.detail << " " << e;
    o.require(errs[2] <= kTol, "sup error at p=" + std::to_string(p));
    o.require(errs[1] < errs[0] && errs[2] < errs[1], "refinement at p=" + std::to_string(p));
  }
}

void energy_identity(Outcome& o) {
  const SolverOptions opts;
  std::size_t count = 0;
  double worst = 0.0;
  auto check = [&](const TorsionResult& t) {
    const auto r = energy_identity_check(t, opts.tol);
    worst = std::max(worst, std::abs(r.lower.lhs - r.lower.rhs) / t.integral);
    o.require(r.pass(), "identity on solve " + std::to_string(count));
    ++count;
  };
  for (double p : {1.5, 2.0, 3.0})
    for (const auto& d : {unit_disk(), unit_square(), Domain::interval(0.0, 1.0)})
      check(solve_torsion(discretize(d, 1.0 / 64), p, opts));
  for (const auto& t : exhaustion_sequence(Domain::ball_chain({0.5, 0.25, 0.125}, 2), 2.0, {0.9, 1.3},
                                           1.0 / 64, opts))
    check(t);
  o.detail << " solves=" << count << " worst relative gap=" << worst;
}

void forced_equality(Outcome& o) {
  for (const auto& [name, d] : {std::pair{"disk", unit_disk()}, std::pair{"square", unit_square()}}) {
    const auto g = discretize(d, 1.0 / 64);
    const auto t = solve_torsion(g, 2.0);
    const double v = poincare_constant(g, 2.0, 1.0).lambda * t.integral;
    o.detail << " " << name << "=" << v;
    o.require(std::abs(v - 1.0) <= kTol, name);
  }
}

void main_sandwich(Outcome& o) {
  for (const auto& [name, d] : {std::pair{"disk", unit_disk()}, std::pair{"square", unit_square()}})
    for (auto [p, q] : {std::pair{3.0, 2.0}, std::pair{2.0, 1.5}}) {
      const auto s = theorem_main_sandwich(discretize(d, 1.0 / 64), p, q, kTol);
      o.detail << " " << name << "(" << p << "," << q << ")=" << s.M << "<=" << s.bound;
      o.require(s.M >= 1.0 - kTol && s.M <= s.bound * (1.0 + kTol), name);
    }
}

void pp_sandwich(Outcome& o) {
  struct Case {
    const char* name;
    Domain domain;
    double h;
    double target;
  };
  const std::vector<Case> cases{
      {"disk", unit_disk(), 1.0 / 64, kJ0 * kJ0 / 4.0},
      {"interval", Domain::interval(0.0, 1.0), 1.0 / 256, M_PI * M_PI / 8.0},
      {"square", unit_square(), 1.0 / 64, 2.0 * M_PI * M_PI * square_center()},
  };
  for (const auto& c : cases) {
    const auto s = theorem_pp_sandwich(discretize(c.domain, c.h), 2.0, kTol);
    const int n = c.domain.dimension();
    o.detail << " " << c.name << "=" << s.M << " (target " << c.target << ")";
    o.require(s.M >= 0.99 && s.M <= pp_sandwich_bound(n), std::string(c.name) + " bounds");
    o.require(std::abs(s.M / c.target - 1.0) <= kTol, std::string(c.name) + " target");
  }
}

void hardy_suite(Outcome& o) {
  const double p = 2.0;
  double worst = 0.0, extremal_dev = 0.0, remainder = 0.0;
  std::size_t checks = 0;
  for (const auto& d : {unit_disk(), unit_square()}) {
    const auto t = solve_torsion(discretize(d, 1.0 / 64), p);
    const auto hw = HardyWeights::build(t.w, p);
    const TestFieldSuite suite(t.w, 20240601);
    for (std::size_t k = 0; k < 100; ++k) {
      const auto u = suite.field(k);
      std::vector<InequalityReport> rs{hardy_simple(u, hw, kTol), hardy_suboptimal(u, hw, kTol),
                                       hardy_optimized(u, hw, kTol)};
      for (double delta : {0.5, 1.0, 2.0, ExponentSet::critical_delta(p)})
        rs.push_back(hardy_delta(u, hw, delta, kTol));
      for (const auto& r : rs) {
        worst = std::max(worst, r.ratio);
        o.require(r.pass && r.ratio <= 1.0 + kTol, r.name);
        ++checks;
      }
    }
    for (double delta : {0.81, 1.0}) {
      const auto e = extremal_field(t.w, p, delta, 1.0);
      const auto r = hardy_delta(e, hw, delta, kTol);
      extremal_dev = std::max(extremal_dev, std::abs(r.ratio - 1.0));
      o.require(std::abs(r.ratio - 1.0) <= kTol, "extremal ratio");
      const double rem = hardy_remainder(e, hw, delta) / dirichlet_energy(e, p);
      remainder = std::max(remainder, rem);
      o.require(rem <= kTol, "extremal remainder");
    }
  }
  o.detail << " checks=" << checks << " worst ratio=" << worst << " extremal |ratio-1|<=" << extremal_dev
           << " remainder/energy<=" << remainder;
}

void sharpness(Outcome& o) {
  const double p = 2.0;
  const auto t = solve_torsion(discretize(unit_disk(), 1.0 / 256), p);
  const auto hw = HardyWeights::build(t.w, p);
  double prev = INFINITY;
  for (int n : {2, 4, 8, 16, 32}) {
    const double q = sharpness_sequence(hw, t.w, n).quotient;
    o.detail << " Q" << n << "=" << q;
    o.require(q >= 0.25 * (1.0 - kTol) && q <= sharpness_upper(p, n) * (1.0 + kTol), "bracket");
    o.require(q <= prev * (1.0 + kTol), "monotone");
    prev = q;
  }
}

void probes(Outcome& o) {
  const double p = 2.0;
  const auto div = composition_probe(unit_disk(), p, 0.5, {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32});
  o.detail << " beta=0.5:";
  for (double g : div.growth) o.detail << " " << g;
  o.detail << " " << to_string(div.verdict);
  o.require(div.verdict == ProbeVerdict::divergent, "beta=0.5");

  std::vector<ScalarField> ws;
  for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256})
    ws.push_back(solve_torsion(discretize(unit_disk(), h), p).w);
  for (double beta : {0.9, 1.0, 2.0}) {
    const auto r = composition_probe(ws, p, beta);
    o.detail << " beta=" << beta << ": " << to_string(r.verdict);
    o.require(r.verdict == ProbeVerdict::convergent, "beta=" + std::to_string(beta));
  }
}

void exhaustion(Outcome& o) {
  const double p = 2.0, h = 1.0 / 512;
  std::vector<double> radii;
  for (int i = 1; i <= 5; ++i) radii.push_back(std::ldexp(1.0, -i));
  const BallChain chain{radii, 2};
  const SolverOptions opts;
  const std::vector<double> cuts{0.9, 1.1, 1.3};
  const auto seq = exhaustion_sequence(Domain::ball_chain(radii, 2), p, cuts, h, opts);

  double worst_drop = 0.0;
  for (std::size_t k = 1; k < seq.size(); ++k)
    for (std::size_t i = 0; i < seq[k].w.size(); ++i)
      worst_drop = std::max(worst_drop, seq[k - 1].w[i] - seq[k].w[i]);
  o.require(worst_drop <= 2.0 * opts.tol, "monotone");
  o.detail << " worst decrease=" << worst_drop;

  const auto& grid = seq.front().w.grid();
  for (std::size_t k = 0; k < seq.size(); ++k)
    for (std::size_t b = 0; b < radii.size(); ++b) {
      if (chain.outer_reach(b) >= cuts[k]) continue;
      const auto c = chain.center(b);
      double err = 0.0, ref = 0.0;
      for (std::size_t i = 0; i < grid.interior_count(); ++i) {
        const auto x = grid.interior_position(i);
        const double r = std::hypot(x[0] - c[0], x[1] - c[1]);
        if (r >= radii[b]) continue;
        const double exact = ball_torsion_value(radii[b], 2, p, r);
        err = std::max(err, std::abs(seq[k].w[i] - exact));
        ref = std::max(ref, exact);
      }
      o.detail << " R=" << cuts[k] << " ball" << b << "=" << err / ref;
      o.require(err / ref <= kTol, "ball profile");
    }
}

void pointwise_inequalities(Outcome& o) {
  const std::size_t samples = 100000;
  for (double p : {1.5, 2.0, 3.0}) {
    const double cy = 0.99 * estimate_young_constant(p, samples);
    const double cc = 0.99 * estimate_convexity_constant(p, samples);
    std::size_t failures = 0;
    for (std::uint64_t k = 1; k <= samples; ++k) {
      const auto x = halton_pair(k);
      const double z[2]{x[0], x[1]}, v[2]{x[2], x[3]};
      failures += !young_check(z, v, p, cy).pass;
      failures += !convexity_check(z, v, p, cc).pass;
    }
    o.detail << " p=" << p << ": C_young=" << cy << " C_convexity=" << cc << " failures=" << failures;
    o.require(failures == 0, "samples at p=" + std::to_string(p));
  }
  double gap = 0.0;
  for (std::uint64_t k = 1; k <= 1000; ++k) {
    const auto x = halton_pair(k);
    const double z[2]{x[0], x[1]}, v[2]{x[2], x[3]};
    const auto y = young_check(z, v, 2.0, 0.5);
    const auto c = convexity_check(z, v, 2.0, 0.25);
    gap = std::max({gap, std::abs(y.lhs - y.rhs), std::abs(c.lhs - c.rhs)});
  }
  o.detail << " p=2 identity gap=" << gap;
  o.require(gap <= 1e-12, "identity");
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(Outcome& o) {
  const auto cfg = load_config(fs::path(PTORSION_CONFIG_DIR) / "verify_default.cfg");
  const auto root = fs::temp_directory_path() / "ptorsion_acceptance";
  fs::remove_all(root);
  std::ostringstream sink;
  std::vector<std::string> docs;
  for (const char* run : {"a", "b"}) {
    const int code = cmd_verify(cfg, CliOptions{root / run, true}, sink);
    o.require(code == kExitPass, std::string("exit code of run ") + run);
    docs.push_back(slurp(root / run / "verify.json"));
  }
  o.require(!docs[0].empty() && docs[0] == docs[1], "byte-identical verify.json");
  o.detail << " verify.json bytes=" << docs[0].size();
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"ball exactness", ball_exactness},
      {"energy identity", energy_identity},
      {"forced equality at p=2, q=1", forced_equality},
      {"main sandwich", main_sandwich},
      {"p=q sandwich", pp_sandwich},
      {"Hardy suite", hardy_suite},
      {"borderline sharpness", sharpness},
      {"composition probes", probes},
      {"exhaustion monotonicity", exhaustion},
      {"Young and convexity inequalities", pointwise_inequalities},
      {"verify determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("%s %2zu %s (%.1fs):%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, secs,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
