#include "ptorsion/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <ostream>
#include <sstream>

#include "json_util.hpp"
#include "ptorsion/error.hpp"
#include "ptorsion/exponents.hpp"
#include "ptorsion/geometry.hpp"
#include "ptorsion/inequalities.hpp"
#include "ptorsion/io.hpp"
#include "ptorsion/spectral.hpp"
#include "ptorsion/torsion.hpp"

namespace ptorsion {

namespace {

using detail::Json;
using detail::number;

std::string tag(const std::string& id, double p, std::size_t h_index) {
  return id + "_p" + io::format_double(p) + "_h" + std::to_string(h_index);
}

Json document(const RunConfig& cfg, const std::string& command) {
  return Json{{"command", command}, {"config_hash", cfg.hash()}, {"version", "0.1.0"}};
}

void emit(const Json& doc, const std::string& file, const CliOptions& opts, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  io::write_file(opts.out_dir / file, text);
  if (opts.json_only) out << text;
}

void write_field(const ScalarField& f, const std::string& stem, const RunConfig& cfg,
                 const CliOptions& opts) {
  if (opts.json_only) return;
  const auto hash = cfg.hash();
  std::ostringstream csv;
  io::write_field_csv(csv, f, hash);
  io::write_file(opts.out_dir / (stem + ".csv"), csv.str());
  if (f.grid().dimension() == 2) {
    std::ostringstream img, side, mask;
    io::write_heatmap_pgm(img, side, f, hash);
    io::write_mask_pgm(mask, f.grid(), hash);
    io::write_file(opts.out_dir / (stem + ".pgm"), img.str());
    io::write_file(opts.out_dir / (stem + ".pgm.txt"), side.str());
    io::write_file(opts.out_dir / (stem + "_mask.pgm"), mask.str());
  }
}

TorsionResult solve_for(const RunConfig& cfg, const std::shared_ptr<const Grid>& grid, double p) {
  auto res = solve_torsion(grid, p, cfg.solver);
  if (cfg.corrupt_torsion == 0.0) return res;
  return make_torsion_result(res.w.scaled(1.0 + cfg.corrupt_torsion), p, res.iterations,
                             res.final_gradient_norm);
}

PoincareOptions poincare_options(const RunConfig& cfg) {
  auto o = cfg.poincare;
  o.torsion = cfg.solver;
  return o;
}

std::vector<double> q_values(const RunConfig& cfg, double p) {
  return cfg.q.empty() ? std::vector<double>{p} : cfg.q;
}

void stamp(InequalityReport& r, const std::string& domain, double p, double h) {
  r.domain = domain;
  r.with("p", p).with("h", h);
}

void append(std::vector<InequalityReport>& out, ReportPair pair) {
  out.push_back(std::move(pair.lower));
  out.push_back(std::move(pair.upper));
}

void hardy_reports(const RunConfig& cfg, const TorsionResult& t, std::vector<InequalityReport>& out) {
  const double p = t.p;
  const double tol = cfg.tolerance;
  const auto hw = HardyWeights::build(t.w, p);
  const auto deltas = cfg.deltas_for(p);
  if (cfg.fields > 0) {
    const TestFieldSuite suite(t.w, cfg.seed);
    for (std::size_t k = 0; k < cfg.fields; ++k) {
      const auto u = suite.field(k);
      const double kk = static_cast<double>(k);
      out.push_back(hardy_simple(u, hw, tol).with("field", kk).with("seed", static_cast<double>(cfg.seed)));
      for (double d : deltas) out.push_back(hardy_delta(u, hw, d, tol).with("field", kk));
      out.push_back(hardy_suboptimal(u, hw, tol).with("field", kk));
      out.push_back(hardy_optimized(u, hw, tol).with("field", kk));
    }
  }
  const double dstar = ExponentSet::critical_delta(p);
  for (double d : cfg.extremal_delta) {
    if (!(d < dstar)) {
      out.push_back(InequalityReport::unchecked("hardy_extremal", d, "no extremals for delta >= critical delta")
                        .with("delta", d));
      continue;
    }
    const auto u = extremal_field(t.w, p, d, 1.0);
    auto upper = hardy_delta(u, hw, d, tol);
    upper.name = "hardy_extremal_upper";
    const double energy = upper.rhs;
    auto lower = InequalityReport::make("hardy_extremal_lower", energy, upper.lhs, tol);
    lower.with("delta", d);
    out.push_back(std::move(lower));
    out.push_back(std::move(upper));
    const double rem = hardy_remainder(u, hw, d);
    out.push_back(InequalityReport::make("hardy_remainder", rem, tol * energy, 0.0).with("delta", d));
  }
  if (!cfg.sharpness.empty()) {
    const double floor = std::pow((p - 1.0) / p, p);
    double prev = NAN;
    for (int n : cfg.sharpness) {
      const auto s = sharpness_sequence(hw, t.w, n);
      const double nn = n;
      out.push_back(InequalityReport::make("sharpness_lower", floor, s.quotient, tol).with("n", nn));
      out.push_back(InequalityReport::make("sharpness_upper", s.quotient, sharpness_upper(p, n), tol)
                        .with("n", nn));
      if (!std::isnan(prev))
        out.push_back(InequalityReport::make("sharpness_monotone", s.quotient, prev, tol).with("n", nn));
      prev = s.quotient;
    }
  }
}

void probe_reports(const RunConfig& cfg, const DomainSpec& d, double p,
                   std::vector<InequalityReport>& out) {
  std::vector<ScalarField> ws;
  for (double h : cfg.probe_h) ws.push_back(solve_torsion(discretize(d.domain, h), p, cfg.solver).w);
  const double beta_star = (p - 1.0) / p;
  for (double beta : cfg.probe_beta) {
    const auto r = composition_probe(ws, p, beta, cfg.solver.growth);
    InequalityReport rep;
    if (beta <= beta_star) {
      double least = INFINITY;
      for (double g : r.growth) least = std::min(least, g);
      rep = InequalityReport::make("probe_divergent", cfg.solver.growth, least, 0.0);
    } else {
      const double last = r.energies.back(), prev = r.energies[r.energies.size() - 2];
      rep = InequalityReport::make("probe_convergent", std::abs(last - prev) / std::abs(last), 0.02, 0.0);
    }
    rep.note = to_string(r.verdict);
    rep.domain = d.id;
    rep.with("p", p).with("beta", beta).with("h", cfg.probe_h.back());
    out.push_back(std::move(rep));
  }
}

std::vector<InequalityReport> job_reports(const RunConfig& cfg, const DomainSpec& d, double p, double h) {
  std::vector<InequalityReport> out;
  const auto grid = discretize(d.domain, h);
  const auto t = solve_for(cfg, grid, p);
  append(out, energy_identity_check(t, cfg.solver.tol));
  out.push_back(linfty_l1_check(t, cfg.sobolev_const, cfg.tolerance));
  hardy_reports(cfg, t, out);
  const auto popts = poincare_options(cfg);
  for (double q : q_values(cfg, p)) {
    const auto pc = poincare_constant(t.w, p, q, popts);
    auto s = q < p ? theorem_main_sandwich(t, pc.lambda, q, cfg.tolerance)
                   : theorem_pp_sandwich(t, pc.lambda, cfg.tolerance);
    append(out, std::move(s.reports));
  }
  for (auto& r : out) stamp(r, d.id, p, h);
  return out;
}

void require_domains(const RunConfig& cfg) {
  if (cfg.domains.empty()) throw ConfigError("config defines no [domain] section");
}

}  // namespace

int cmd_torsion(const RunConfig& cfg, const CliOptions& opts, std::ostream& out) {
  require_domains(cfg);
  auto doc = document(cfg, "torsion");
  Json results = Json::array();
  bool pass = true;
  for (const auto& d : cfg.domains)
    for (double p : cfg.p)
      for (std::size_t k = 0; k < cfg.h.size(); ++k) {
        const auto t = solve_torsion(discretize(d.domain, cfg.h[k]), p, cfg.solver);
        auto j = detail::to_json(t);
        const auto identity = energy_identity_check(t, cfg.solver.tol);
        j["domain"] = d.id;
        j["energy_identity"] = identity.pass();
        pass = pass && identity.pass();
        results.push_back(j);
        write_field(t.w, "torsion_" + tag(d.id, p, k), cfg, opts);
        if (!opts.json_only)
          out << d.id << " p=" << p << " h=" << cfg.h[k] << " integral=" << t.integral
              << " rigidity=" << t.rigidity << " sup=" << t.sup_norm << "\n";
      }
  doc["results"] = results;
  doc["pass"] = pass;
  emit(doc, "torsion.json", opts, out);
  return pass ? kExitPass : kExitInequality;
}

int cmd_poincare(const RunConfig& cfg, const CliOptions& opts, std::ostream& out) {
  require_domains(cfg);
  auto doc = document(cfg, "poincare");
  Json results = Json::array();
  const auto popts = poincare_options(cfg);
  for (const auto& d : cfg.domains)
    for (double p : cfg.p)
      for (std::size_t k = 0; k < cfg.h.size(); ++k) {
        const auto grid = discretize(d.domain, cfg.h[k]);
        const auto t = solve_torsion(grid, p, cfg.solver);
        for (double q : q_values(cfg, p)) {
          const auto r = poincare_constant(t.w, p, q, popts);
          auto j = detail::to_json(r);
          j["domain"] = d.id;
          j["p"] = p;
          j["q"] = q;
          j["h"] = cfg.h[k];
          results.push_back(j);
          write_field(r.minimizer, "minimizer_" + tag(d.id, p, k) + "_q" + io::format_double(q), cfg,
                      opts);
          if (!opts.json_only)
            out << d.id << " p=" << p << " q=" << q << " h=" << cfg.h[k] << " lambda=" << r.lambda
                << "\n";
        }
      }
  doc["results"] = results;
  emit(doc, "poincare.json", opts, out);
  return kExitPass;
}

std::vector<InequalityReport> verify_reports(const RunConfig& cfg) {
  require_domains(cfg);
  std::vector<InequalityReport> reports;
  for (const auto& d : cfg.domains)
    for (double p : cfg.p) {
      for (double h : cfg.h) {
        auto job = job_reports(cfg, d, p, h);
        reports.insert(reports.end(), std::make_move_iterator(job.begin()),
                       std::make_move_iterator(job.end()));
      }
      if (!cfg.probe_beta.empty()) probe_reports(cfg, d, p, reports);
    }
  return reports;
}

int cmd_verify(const RunConfig& cfg, const CliOptions& opts, std::ostream& out) {
  const auto reports = verify_reports(cfg);
  std::size_t failed = 0, unchecked = 0;
  for (const auto& r : reports) {
    failed += r.pass ? 0 : 1;
    unchecked += r.status == CheckStatus::unchecked ? 1 : 0;
  }
  auto doc = document(cfg, "verify");
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(detail::to_json(r));
  doc["reports"] = arr;
  doc["summary"] = Json{{"total", reports.size()}, {"failed", failed}, {"unchecked", unchecked}};
  doc["pass"] = failed == 0;
  if (!opts.json_only) {
    io::write_file(opts.out_dir / "verify.csv", io::reports_csv(reports, cfg.hash()));
    out << reports.size() << " checks, " << failed << " failed, " << unchecked << " unchecked\n";
    for (const auto& r : reports)
      if (!r.pass)
        out << "FAIL " << r.name << " [" << r.domain << "] lhs=" << r.lhs << " rhs=" << r.rhs << "\n";
  }
  emit(doc, "verify.json", opts, out);
  return failed == 0 ? kExitPass : kExitInequality;
}

int cmd_chain(const RunConfig& cfg, const CliOptions& opts, std::ostream& out) {
  for (double p : cfg.p)
    if (p != 2.0) throw ConfigError("summability criterion is only available for p = 2");
  auto doc = document(cfg, "chain");
  Json chains = Json::array();
  bool pass = true;
  const auto popts = poincare_options(cfg);
  for (const auto& d : cfg.domains) {
    const auto* chain = std::get_if<BallChain>(&d.domain.shape());
    if (!chain) continue;
    const int dim = chain->dimension;
    Json analytic = Json::array();
    const auto qs = cfg.q.empty() ? std::vector<double>{1.0} : cfg.q;
    for (double q : qs) {
      Json a{{"q", q}};
      if (q < 2.0) {
        const auto s = chain_summability(chain->radii, q, dim);
        a["exponent"] = s.exponent;
        a["partial_sum"] = s.partial_sum;
        a["tail_slope"] = number(s.tail_slope);
        a["verdict"] = to_string(s.verdict);
        a["embedding"] = s.verdict == SeriesVerdict::converges ? "compact"
                         : s.verdict == SeriesVerdict::diverges ? "not compact"
                                                                : "inconclusive";
      } else {
        double sup = 0.0;
        for (double r : chain->radii) sup = std::max(sup, r * r / (2.0 * dim));
        a["torsion_sup"] = sup;
        a["verdict"] = "bounded";
        a["embedding"] = "continuous";
      }
      analytic.push_back(a);
    }
    Json lebesgue = Json::array();
    for (double s : d.lebesgue) {
      const auto v = chain_lebesgue_summability(chain->radii, s, dim);
      lebesgue.push_back(Json{{"s", s},
                              {"exponent", v.exponent},
                              {"partial_sum", v.partial_sum},
                              {"verdict", to_string(v.verdict)},
                              {"in_Ls", v.verdict == SeriesVerdict::converges ? "yes"
                                        : v.verdict == SeriesVerdict::diverges ? "no"
                                                                               : "inconclusive"}});
    }
    Json numeric = Json::array();
    for (std::size_t count : d.truncate)
      for (double h : cfg.h) {
        const std::vector<double> radii(chain->radii.begin(),
                                        chain->radii.begin() + static_cast<std::ptrdiff_t>(count));
        const auto t = solve_torsion(discretize(Domain::ball_chain(radii, dim), h), 2.0, cfg.solver);
        for (double q : qs) {
          const auto pc = poincare_constant(t.w, 2.0, q, popts);
          const auto s = q < 2.0 ? theorem_main_sandwich(t, pc.lambda, q, cfg.tolerance)
                                 : theorem_pp_sandwich(t, pc.lambda, cfg.tolerance);
          pass = pass && s.reports.pass();
          numeric.push_back(Json{{"balls", count},
                                 {"h", h},
                                 {"q", q},
                                 {"lambda", number(pc.lambda)},
                                 {"M", number(s.M)},
                                 {"bound", number(s.bound)},
                                 {"pass", s.reports.pass()},
                                 {"supporting_components", pc.supporting_components}});
          if (!opts.json_only)
            out << d.id << " balls=" << count << " h=" << h << " q=" << q << " lambda=" << pc.lambda
                << " M=" << s.M << "\n";
        }
      }
    chains.push_back(Json{{"domain", d.id},
                          {"radii", chain->radii},
                          {"analytic", analytic},
                          {"lebesgue", lebesgue},
                          {"numeric", numeric}});
  }
  if (chains.empty()) throw ConfigError("chain needs at least one chain domain");
  doc["chains"] = chains;
  doc["pass"] = pass;
  emit(doc, "chain.json", opts, out);
  return pass ? kExitPass : kExitInequality;
}

int cmd_young(const RunConfig& cfg, const CliOptions& opts, std::ostream& out) {
  auto doc = document(cfg, "young");
  Json results = Json::array();
  bool pass = true;
  const std::size_t n = cfg.young_samples;
  for (double p : cfg.young_p) {
    const double cy = estimate_young_constant(p, n);
    const double cc = estimate_convexity_constant(p, n);
    std::size_t young_fail = 0, convex_fail = 0;
    double young_excess = -INFINITY, convex_excess = -INFINITY;
    double young_gap = 0.0, convex_gap = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto hp = halton_pair(k + 1);
      const std::span<const double> a(hp.data(), 2), b(hp.data() + 2, 2);
      const auto y = young_check(a, b, p, 0.99 * cy);
      const auto c = convexity_check(a, b, p, 0.99 * cc);
      young_fail += y.pass ? 0 : 1;
      convex_fail += c.pass ? 0 : 1;
      young_excess = std::max(young_excess, y.lhs - y.rhs);
      convex_excess = std::max(convex_excess, c.lhs - c.rhs);
      if (p == 2.0) {
        const auto yi = young_check(a, b, p, 0.5);
        const auto ci = convexity_check(a, b, p, 0.25);
        young_gap = std::max(young_gap, std::abs(yi.lhs - yi.rhs));
        convex_gap = std::max(convex_gap, std::abs(ci.lhs - ci.rhs));
      }
    }
    Json j{{"p", p},
           {"samples", n},
           {"young_constant", number(cy)},
           {"convexity_constant", number(cc)},
           {"young_failures", young_fail},
           {"convexity_failures", convex_fail},
           {"young_max_excess", number(young_excess)},
           {"convexity_max_excess", number(convex_excess)}};
    bool ok = young_fail == 0 && convex_fail == 0;
    if (p == 2.0) {
      const bool exact = young_gap <= 1e-12 && convex_gap <= 1e-12;
      j["identity"] = Json{{"young_max_gap", young_gap}, {"convexity_max_gap", convex_gap}, {"pass", exact}};
      ok = ok && exact;
    }
    j["pass"] = ok;
    pass = pass && ok;
    results.push_back(j);
    if (!opts.json_only)
      out << "p=" << p << " C_young=" << cy << " C_convexity=" << cc << " failures=" << young_fail
          << "/" << convex_fail << "\n";
  }
  doc["results"] = results;
  doc["pass"] = pass;
  emit(doc, "young.json", opts, out);
  return pass ? kExitPass : kExitInequality;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-torsion, Poincare constants and Hardy inequalities on grids", "ptorsion"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::string out_dir;
  std::optional<double> h_override;
  bool json_only = false;
  app.add_option("--config", config_path, "run configuration file")->required();
  app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
  app.add_option("--h-override", h_override, "replace the [grid] spacings with one value")
      ->check(CLI::PositiveNumber);
  app.add_flag("--json-only", json_only, "write JSON only and echo it on stdout");
  app.fallthrough();
  const std::pair<const char*, const char*> commands[]{
      {"torsion", "solve the p-torsion problem and dump fields"},
      {"poincare", "compute lambda_{p,q} and its minimizer"},
      {"verify", "run the inequality checks"},
      {"chain", "summability verdicts and sandwiches on ball chains (p = 2)"},
      {"young", "estimate and check the pointwise vector inequalities"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  auto fail = [&](int code, const std::string& kind, const std::string& message, Json extra) {
    Json e{{"error", Json{{"type", kind}, {"message", message}, {"command", command}}}};
    for (auto& [k, v] : extra.items()) e["error"][k] = v;
    const std::string text = e.dump(2) + "\n";
    out << text;
    err << "ptorsion " << command << ": " << message << "\n";
    if (!out_dir.empty()) {
      try {
        io::write_file(std::filesystem::path(out_dir) / "error.json", text);
      } catch (const Error&) {
      }
    }
    return code;
  };

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    if (h_override) cfg.h = {*h_override};
    if (out_dir.empty()) out_dir = cfg.out_dir;
    cfg.out_dir = out_dir;
  } catch (const ConfigError& e) {
    return fail(kExitConfig, "config", e.what(), Json::object());
  }

  const CliOptions opts{out_dir, json_only};
  try {
    if (command == "torsion") return cmd_torsion(cfg, opts, out);
    if (command == "poincare") return cmd_poincare(cfg, opts, out);
    if (command == "verify") return cmd_verify(cfg, opts, out);
    if (command == "chain") return cmd_chain(cfg, opts, out);
    return cmd_young(cfg, opts, out);
  } catch (const ConfigError& e) {
    return fail(kExitConfig, "config", e.what(), Json::object());
  } catch (const SolverError& e) {
    return fail(kExitSolver, "solver", e.what(),
                Json{{"residual", number(e.residual())}, {"iterations", e.iterations()}});
  } catch (const DomainError& e) {
    return fail(kExitSolver, "domain", e.what(), Json::object());
  } catch (const Error& e) {
    return fail(kExitSolver, "runtime", e.what(), Json::object());
  } catch (const std::exception& e) {
    return fail(kExitSolver, "internal", e.what(), Json::object());
  }
}

}  // namespace ptorsion
