#include "ptorsion/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ptorsion/error.hpp"
#include "ptorsion/exponents.hpp"
#include "ptorsion/io.hpp"

namespace ptorsion {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> tokens(const std::string& value) {
  std::string v = value;
  std::replace(v.begin(), v.end(), ',', ' ');
  std::istringstream in(v);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

// One `key = value` entry with the line it came from.
struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, Entry> entries;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  if (line > 0) throw ConfigError("line " + std::to_string(line) + ": " + msg);
  throw ConfigError(msg);
}

double to_number(const std::string& t, int line) {
  // Fractions like 1/64 are accepted for spacings.
  if (const auto slash = t.find('/'); slash != std::string::npos) {
    const double den = to_number(t.substr(slash + 1), line);
    if (den == 0.0) fail(line, "division by zero in '" + t + "'");
    return to_number(t.substr(0, slash), line) / den;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size() || !std::isfinite(v)) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    fail(line, "not a number: '" + t + "'");
  }
}

class Reader {
 public:
  explicit Reader(const Section& s) : s_(s) {}

  bool has(const std::string& key) const { return s_.entries.count(key) > 0; }

  std::vector<double> numbers(const std::string& key) {
    const auto& e = take(key);
    std::vector<double> out;
    for (const auto& t : tokens(e.value)) out.push_back(to_number(t, e.line));
    if (out.empty()) fail(e.line, key + " needs at least one value");
    return out;
  }

  double number(const std::string& key) {
    const auto& e = s_.entries.at(key);
    const auto v = numbers(key);
    if (v.size() != 1) fail(e.line, key + " takes a single value");
    return v.front();
  }

  std::int64_t integer(const std::string& key, std::int64_t min) {
    const int line = s_.entries.at(key).line;
    const double v = number(key);
    if (v != std::floor(v) || v < static_cast<double>(min) || v > 9.0e15)
      fail(line, key + " must be an integer >= " + std::to_string(min));
    return static_cast<std::int64_t>(v);
  }

  std::string word(const std::string& key) {
    const auto& e = take(key);
    const auto t = tokens(e.value);
    if (t.size() != 1) fail(e.line, key + " takes a single word");
    return t.front();
  }

  std::vector<std::string> words(const std::string& key) { return tokens(take(key).value); }

  int line_of(const std::string& key) const {
    const auto it = s_.entries.find(key);
    return it == s_.entries.end() ? s_.line : it->second.line;
  }

  void finish() const {
    for (const auto& [k, e] : s_.entries)
      if (!used_.count(k)) fail(e.line, "unknown key '" + k + "' in [" + s_.name + "]");
  }

 private:
  const Entry& take(const std::string& key) {
    used_.insert(key);
    return s_.entries.at(key);
  }
  const Section& s_;
  std::set<std::string> used_;
};

std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> out;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const auto hash = raw.find_first_of("#;");
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "malformed section header");
      out.push_back({trim(line.substr(1, line.size() - 2)), line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    if (out.empty()) fail(line_no, "key outside any section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail(line_no, "empty key");
    if (!out.back().entries.emplace(key, Entry{trim(line.substr(eq + 1)), line_no}).second)
      fail(line_no, "duplicate key '" + key + "'");
  }
  return out;
}

DomainSpec read_domain(Reader& r, const Section& s, std::size_t ordinal) {
  if (!r.has("kind")) fail(s.line, "[domain] needs a kind");
  const std::string kind = r.word("kind");
  DomainSpec spec;
  spec.id = r.has("id") ? r.word("id") : kind + std::to_string(ordinal);
  try {
    if (kind == "interval") {
      spec.domain = Domain::interval(r.has("a") ? r.number("a") : 0.0,
                                     r.has("b") ? r.number("b") : 1.0);
    } else if (kind == "box") {
      if (!r.has("low") || !r.has("high")) fail(s.line, "box needs low and high");
      spec.domain = Domain::box(r.numbers("low"), r.numbers("high"));
    } else if (kind == "ball") {
      const auto center = r.has("center") ? r.numbers("center") : std::vector<double>{0.0, 0.0};
      spec.domain = Domain::ball(center, r.has("radius") ? r.number("radius") : 1.0);
    } else if (kind == "chain") {
      const int dim = r.has("dimension") ? static_cast<int>(r.integer("dimension", 1)) : 2;
      std::vector<double> radii;
      if (r.has("radii")) {
        radii = r.numbers("radii");
      } else {
        if (!r.has("rule") || !r.has("count")) fail(s.line, "chain needs radii or rule and count");
        const std::string rule = r.word("rule");
        const auto count = static_cast<std::size_t>(r.integer("count", 1));
        if (rule == "geometric") {
          const double ratio = r.has("ratio") ? r.number("ratio") : 0.5;
          for (std::size_t i = 1; i <= count; ++i)
            radii.push_back(std::pow(ratio, static_cast<double>(i)));
        } else if (rule == "power") {
          if (!r.has("s")) fail(r.line_of("rule"), "power rule needs s");
          radii = chain_radii(r.number("s"), count, dim);
        } else {
          fail(r.line_of("rule"), "unknown chain rule '" + rule + "'");
        }
      }
      spec.domain = Domain::ball_chain(radii, dim);
      if (r.has("cut")) spec.cut = r.numbers("cut");
      if (r.has("lebesgue")) spec.lebesgue = r.numbers("lebesgue");
      if (r.has("truncate")) {
        const int line = r.line_of("truncate");
        for (double v : r.numbers("truncate")) {
          if (v < 1.0 || v != std::floor(v) || v > static_cast<double>(radii.size()))
            fail(line, "truncate entries must be ball counts within the chain");
          spec.truncate.push_back(static_cast<std::size_t>(v));
        }
      }
    } else {
      fail(r.line_of("kind"), "unknown domain kind '" + kind + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(s.line, e.what());
  }
  r.finish();
  return spec;
}

void require_positive(const std::vector<double>& v, const std::string& what, int line) {
  for (double x : v)
    if (!(x > 0.0)) fail(line, what + " must be positive");
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + io::format_double(v[i]);
  return out;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string> seen;
  int p_line = 0, q_line = 0;
  for (const auto& s : split_sections(text)) {
    Reader r(s);
    if (s.name == "domain") {
      cfg.domains.push_back(read_domain(r, s, cfg.domains.size() + 1));
      continue;
    }
    if (!seen.insert(s.name).second) fail(s.line, "duplicate section [" + s.name + "]");
    if (s.name == "exponents") {
      if (r.has("p")) {
        p_line = r.line_of("p");
        cfg.p = r.numbers("p");
      }
      if (r.has("q")) {
        q_line = r.line_of("q");
        cfg.q = r.numbers("q");
      }
      if (r.has("delta")) {
        const int line = r.line_of("delta");
        cfg.delta.clear();
        cfg.delta_star = false;
        for (const auto& t : r.words("delta")) {
          if (t == "star") cfg.delta_star = true;
          else cfg.delta.push_back(to_number(t, line));
        }
        for (double d : cfg.delta)
          if (!(d > 0.0)) fail(line, "delta must be positive");
      }
      if (r.has("extremal_delta")) {
        cfg.extremal_delta = r.numbers("extremal_delta");
        for (double d : cfg.extremal_delta)
          if (!(d > 0.0)) fail(r.line_of("extremal_delta"), "delta must be positive");
      }
    } else if (s.name == "grid") {
      if (r.has("h")) {
        cfg.h = r.numbers("h");
        require_positive(cfg.h, "h", r.line_of("h"));
      }
    } else if (s.name == "solver") {
      if (r.has("tol")) cfg.solver.tol = r.number("tol");
      if (r.has("max_iter")) cfg.solver.max_iter = r.integer("max_iter", 1);
      if (r.has("memory")) cfg.solver.memory = static_cast<int>(r.integer("memory", 1));
      if (r.has("growth")) cfg.solver.growth = r.number("growth");
      if (r.has("rel_tol")) cfg.poincare.rel_tol = r.number("rel_tol");
      if (r.has("max_outer")) cfg.poincare.max_outer = r.integer("max_outer", 1);
      if (!(cfg.solver.tol > 0.0)) fail(r.line_of("tol"), "tol must be positive");
      if (!(cfg.solver.growth > 1.0)) fail(r.line_of("growth"), "growth must exceed 1");
      if (!(cfg.poincare.rel_tol > 0.0)) fail(r.line_of("rel_tol"), "rel_tol must be positive");
    } else if (s.name == "verify") {
      if (r.has("seed")) cfg.seed = static_cast<std::uint64_t>(r.integer("seed", 0));
      if (r.has("fields")) cfg.fields = static_cast<std::size_t>(r.integer("fields", 0));
      if (r.has("tolerance")) cfg.tolerance = r.number("tolerance");
      if (r.has("sobolev_const")) cfg.sobolev_const = r.number("sobolev_const");
      if (r.has("corrupt_torsion")) cfg.corrupt_torsion = r.number("corrupt_torsion");
      if (r.has("sharpness")) {
        const int line = r.line_of("sharpness");
        for (double n : r.numbers("sharpness")) {
          if (n < 1.0 || n != std::floor(n)) fail(line, "sharpness entries must be integers >= 1");
          cfg.sharpness.push_back(static_cast<int>(n));
        }
      }
      if (cfg.tolerance < 0.0) fail(r.line_of("tolerance"), "tolerance must be nonnegative");
      if (cfg.sobolev_const && !(*cfg.sobolev_const > 0.0))
        fail(r.line_of("sobolev_const"), "sobolev_const must be positive");
      if (!(cfg.corrupt_torsion > -1.0))
        fail(r.line_of("corrupt_torsion"), "corrupt_torsion must exceed -1");
    } else if (s.name == "probe") {
      if (r.has("beta")) {
        cfg.probe_beta = r.numbers("beta");
        for (double b : cfg.probe_beta)
          if (!(b > 0.0)) fail(r.line_of("beta"), "beta must be positive");
      }
      if (r.has("h")) {
        cfg.probe_h = r.numbers("h");
        require_positive(cfg.probe_h, "h", r.line_of("h"));
      }
    } else if (s.name == "young") {
      if (r.has("p")) {
        const int line = r.line_of("p");
        cfg.young_p = r.numbers("p");
        for (double p : cfg.young_p)
          if (!(p > 1.0)) fail(line, "p must exceed 1");
      }
      if (r.has("samples")) cfg.young_samples = static_cast<std::size_t>(r.integer("samples", 1));
    } else if (s.name == "output") {
      if (r.has("dir")) cfg.out_dir = r.word("dir");
    } else {
      fail(s.line, "unknown section [" + s.name + "]");
    }
    r.finish();
  }

  for (double p : cfg.p) {
    try {
      ExponentSet e(p);
      for (double q : cfg.q) {
        try {
          ExponentSet eq(p, q);
        } catch (const InvalidArgument& err) {
          fail(q_line, err.what());
        }
      }
    } catch (const InvalidArgument& err) {
      fail(p_line, err.what());
    }
  }
  std::set<std::string> ids;
  for (const auto& d : cfg.domains)
    if (!ids.insert(d.id).second) fail(0, "duplicate domain id '" + d.id + "'");
  if (!cfg.probe_beta.empty() && cfg.probe_h.size() < 4)
    fail(0, "probe needs at least four spacings");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<double> RunConfig::deltas_for(double p) const {
  auto out = delta;
  if (delta_star) out.push_back(ExponentSet::critical_delta(p));
  return out;
}

std::string RunConfig::canonical() const {
  std::ostringstream o;
  for (const auto& d : domains) {
    o << "[domain]\nid = " << d.id << "\n";
    std::visit(
        [&](const auto& shape) {
          using T = std::decay_t<decltype(shape)>;
          if constexpr (std::is_same_v<T, Interval>) {
            o << "kind = interval\na = " << io::format_double(shape.a)
              << "\nb = " << io::format_double(shape.b) << "\n";
          } else if constexpr (std::is_same_v<T, Box>) {
            o << "kind = box\nlow = " << join(shape.low) << "\nhigh = " << join(shape.high) << "\n";
          } else if constexpr (std::is_same_v<T, Ball>) {
            o << "kind = ball\ncenter = " << join(shape.center)
              << "\nradius = " << io::format_double(shape.radius) << "\n";
          } else if constexpr (std::is_same_v<T, BallChain>) {
            o << "kind = chain\ndimension = " << shape.dimension << "\nradii = " << join(shape.radii)
              << "\n";
          }
        },
        d.domain.shape());
    if (!d.cut.empty()) o << "cut = " << join(d.cut) << "\n";
    if (!d.lebesgue.empty()) o << "lebesgue = " << join(d.lebesgue) << "\n";
    if (!d.truncate.empty()) {
      o << "truncate =";
      for (auto t : d.truncate) o << " " << t;
      o << "\n";
    }
  }
  o << "[exponents]\ndelta = " << join(delta) << (delta_star ? " star" : "")
    << "\nextremal_delta = " << join(extremal_delta) << "\np = " << join(p) << "\n";
  if (!q.empty()) o << "q = " << join(q) << "\n";
  o << "[grid]\nh = " << join(h) << "\n";
  if (!probe_beta.empty()) o << "[probe]\nbeta = " << join(probe_beta) << "\nh = " << join(probe_h) << "\n";
  o << "[solver]\ngrowth = " << io::format_double(solver.growth)
    << "\nmax_iter = " << solver.max_iter << "\nmax_outer = " << poincare.max_outer
    << "\nmemory = " << solver.memory << "\nrel_tol = " << io::format_double(poincare.rel_tol)
    << "\ntol = " << io::format_double(solver.tol) << "\n";
  o << "[verify]\ncorrupt_torsion = " << io::format_double(corrupt_torsion)
    << "\nfields = " << fields << "\nseed = " << seed << "\n";
  if (!sharpness.empty()) {
    o << "sharpness =";
    for (int n : sharpness) o << " " << n;
    o << "\n";
  }
  if (sobolev_const) o << "sobolev_const = " << io::format_double(*sobolev_const) << "\n";
  o << "tolerance = " << io::format_double(tolerance) << "\n";
  o << "[young]\np = " << join(young_p) << "\nsamples = " << young_samples << "\n";
  return o.str();
}

std::string RunConfig::hash() const { return io::hex(io::fnv1a(canonical())); }

}  // namespace ptorsion
