#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ptorsion/fields.hpp"
#include "ptorsion/report.hpp"
#include "ptorsion/spectral.hpp"
#include "ptorsion/torsion.hpp"

namespace ptorsion::io {

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
/// Sixteen lowercase hex digits.
std::string hex(std::uint64_t value);

/// Shortest decimal that round-trips; "nan"/"inf"/"-inf" otherwise.
std::string format_double(double value);

/// Quotes a CSV field when it holds a comma, quote, CR or LF; embedded quotes
/// are doubled.
std::string csv_escape(std::string_view field);
std::string csv_row(const std::vector<std::string>& fields);
/// Splits one CSV record, undoing csv_escape. Throws Error on a dangling quote.
std::vector<std::string> csv_split(std::string_view line);

/// Comment lines ("# ...") put at the top of every text artifact.
std::string header_block(std::string_view config_hash, std::string_view comment = "#");

/// Field dump: header block, a metadata comment, then one row per interior
/// node with its lattice indices and value.
void write_field_csv(std::ostream& out, const ScalarField& field, std::string_view config_hash);
/// Rebuilds grid and values from write_field_csv output.
ScalarField read_field_csv(std::istream& in);

/// Linear 8-bit heatmap of a 2-D field over its padded storage box. Rows run
/// along decreasing second coordinate. The sidecar records the scaling.
void write_heatmap_pgm(std::ostream& image, std::ostream& sidecar, const ScalarField& field,
                       std::string_view config_hash);
/// 255 on interior nodes, 0 elsewhere.
void write_mask_pgm(std::ostream& image, const Grid& grid, std::string_view config_hash);

/// Flat CSV of reports: name, domain, p, q, delta, h, lhs, rhs, ratio, tol,
/// status, pass.
std::string reports_csv(const std::vector<InequalityReport>& reports,
                        std::string_view config_hash);
/// JSON array of reports with sorted keys.
std::string reports_json(const std::vector<InequalityReport>& reports);

std::string torsion_json(const TorsionResult& result);
std::string poincare_json(const PoincareResult& result);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace ptorsion::io
