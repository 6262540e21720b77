#include "ptorsion/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json_util.hpp"
#include "ptorsion/error.hpp"

namespace ptorsion {

namespace detail {

Json to_json(const InequalityReport& r) {
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = number(v);
  return Json{{"name", r.name},
              {"lhs", number(r.lhs)},
              {"rhs", number(r.rhs)},
              {"ratio", number(r.ratio)},
              {"tol", r.tol},
              {"abs_tol", r.abs_tol},
              {"pass", r.pass},
              {"status", r.status == CheckStatus::checked ? "checked" : "unchecked"},
              {"note", r.note},
              {"domain", r.domain},
              {"params", params}};
}

Json to_json(const TorsionResult& r) {
  const auto& g = r.w.grid();
  return Json{{"p", r.p},
              {"h", g.spacing()},
              {"dimension", g.dimension()},
              {"interior_nodes", g.interior_count()},
              {"integral", number(r.integral)},
              {"rigidity", number(r.rigidity)},
              {"sup_norm", number(r.sup_norm)},
              {"energy", number(dirichlet_energy(r.w, r.p))},
              {"iterations", r.iterations},
              {"residual", number(r.final_gradient_norm)}};
}

Json to_json(const PoincareResult& r) {
  Json masses = Json::array();
  for (double m : r.component_masses) masses.push_back(number(m));
  return Json{{"lambda", number(r.lambda)},
              {"iterations", r.iterations},
              {"residual", number(r.residual)},
              {"component_masses", masses},
              {"supporting_components", r.supporting_components}};
}

}  // namespace detail

namespace io {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t value) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, value >>= 4) out[static_cast<std::size_t>(i)] = digits[value & 0xF];
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  out += "\r\n";
  return out;
}

std::vector<std::string> csv_split(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c != '"') {
        out.back() += c;
      } else if (i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else {
        quoted = false;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  if (quoted) throw Error("unterminated quote in CSV record");
  return out;
}

std::string header_block(std::string_view config_hash, std::string_view comment) {
  std::string out;
  out.append(comment).append(" ptorsion 0.1.0\n");
  out.append(comment).append(" config_hash ").append(config_hash).append("\n");
  return out;
}

void write_field_csv(std::ostream& out, const ScalarField& field, std::string_view config_hash) {
  const Grid& g = field.grid();
  const int dim = g.dimension();
  out << header_block(config_hash);
  out << "# dimension " << dim << " spacing " << format_double(g.spacing()) << " nodes "
      << g.interior_count() << "\n";
  std::vector<std::string> head;
  for (int a = 0; a < dim; ++a) head.push_back("i" + std::to_string(a));
  head.emplace_back("value");
  out << csv_row(head);
  for (std::size_t i = 0; i < field.size(); ++i) {
    const auto idx = g.interior_lattice_index(i);
    std::vector<std::string> row;
    for (int a = 0; a < dim; ++a) row.push_back(std::to_string(idx[static_cast<std::size_t>(a)]));
    row.push_back(format_double(field[i]));
    out << csv_row(row);
  }
}

ScalarField read_field_csv(std::istream& in) {
  std::string line;
  int dim = 0;
  double h = 0.0;
  bool header_seen = false;
  std::vector<std::pair<LatticeIndex, double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string key;
      while (meta >> key) {
        if (key == "dimension") meta >> dim;
        else if (key == "spacing") meta >> h;
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto cols = csv_split(line);
    if (dim < 1 || cols.size() != static_cast<std::size_t>(dim) + 1)
      throw Error("field CSV row does not match its dimension");
    LatticeIndex idx{0, 0, 0};
    for (int a = 0; a < dim; ++a) idx[static_cast<std::size_t>(a)] = std::stoll(cols[static_cast<std::size_t>(a)]);
    rows.emplace_back(idx, std::stod(cols.back()));
  }
  if (dim < 1 || !(h > 0.0)) throw Error("field CSV lacks grid metadata");
  if (rows.empty()) throw Error("field CSV holds no nodes");

  LatticeIndex lo = rows.front().first, hi = lo;
  for (const auto& [idx, v] : rows)
    for (std::size_t a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], idx[a]);
      hi[a] = std::max(hi[a], idx[a]);
    }
  LatticeIndex ext{};
  for (std::size_t a = 0; a < 3; ++a) ext[a] = hi[a] - lo[a] + 1;
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(ext[0] * ext[1] * ext[2]), 0);
  for (const auto& [idx, v] : rows)
    mask[static_cast<std::size_t>(((idx[0] - lo[0]) * ext[1] + idx[1] - lo[1]) * ext[2] +
                                  idx[2] - lo[2])] = 1;
  auto grid = std::make_shared<const Grid>(dim, h, lo, ext, std::move(mask));
  std::vector<double> values(grid->interior_count(), 0.0);
  for (const auto& [idx, v] : rows) values[static_cast<std::size_t>(grid->interior_at(idx))] = v;
  return ScalarField(std::move(grid), std::move(values));
}

namespace {

template <class Level>
void write_pgm(std::ostream& image, const Grid& g, std::string_view config_hash, Level&& level) {
  if (g.dimension() != 2) throw InvalidArgument("PGM export needs a 2-D grid");
  const auto& lo = g.lower();
  const auto& ext = g.extents();
  image << "P2\n" << header_block(config_hash);
  image << ext[0] << " " << ext[1] << "\n255\n";
  for (std::int64_t row = ext[1] - 1; row >= 0; --row) {
    for (std::int64_t col = 0; col < ext[0]; ++col) {
      const auto node = g.node_at({lo[0] + col, lo[1] + row, 0});
      image << (col ? " " : "") << level(*node);
    }
    image << "\n";
  }
}

}  // namespace

void write_heatmap_pgm(std::ostream& image, std::ostream& sidecar, const ScalarField& field,
                       std::string_view config_hash) {
  const Grid& g = field.grid();
  double lo = 0.0, hi = 0.0;
  for (double v : field.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  write_pgm(image, g, config_hash, [&](std::size_t node) {
    const auto i = g.interior_index(node);
    const double v = i == kExterior ? 0.0 : field[static_cast<std::size_t>(i)];
    return static_cast<int>(std::lround((v - lo) / span * 255.0));
  });
  sidecar << header_block(config_hash);
  sidecar << "min " << format_double(lo) << "\nmax " << format_double(hi)
          << "\nlevel round((value - min) / (max - min) * 255)\n";
}

void write_mask_pgm(std::ostream& image, const Grid& grid, std::string_view config_hash) {
  write_pgm(image, grid, config_hash,
            [&](std::size_t node) { return grid.is_interior(node) ? 255 : 0; });
}

std::string reports_csv(const std::vector<InequalityReport>& reports,
                        std::string_view config_hash) {
  std::string out = header_block(config_hash);
  out += csv_row({"name", "domain", "p", "q", "delta", "h", "lhs", "rhs", "ratio", "tol",
                  "status", "pass"});
  auto param = [](const InequalityReport& r, const char* key) {
    const auto it = r.params.find(key);
    return it == r.params.end() ? std::string() : format_double(it->second);
  };
  for (const auto& r : reports)
    out += csv_row({r.name, r.domain, param(r, "p"), param(r, "q"), param(r, "delta"),
                    param(r, "h"), format_double(r.lhs), format_double(r.rhs),
                    format_double(r.ratio), format_double(r.tol),
                    r.status == CheckStatus::checked ? "checked" : "unchecked",
                    r.pass ? "true" : "false"});
  return out;
}

std::string reports_json(const std::vector<InequalityReport>& reports) {
  detail::Json arr = detail::Json::array();
  for (const auto& r : reports) arr.push_back(detail::to_json(r));
  return arr.dump(2);
}

std::string torsion_json(const TorsionResult& result) { return detail::to_json(result).dump(2); }

std::string poincare_json(const PoincareResult& result) {
  return detail::to_json(result).dump(2);
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace io

}  // namespace ptorsion
