#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptorsion/geometry.hpp"
#include "ptorsion/spectral.hpp"
#include "ptorsion/torsion.hpp"

namespace ptorsion {

struct DomainSpec {
  std::string id;
  Domain domain = Domain::ball({0.0, 0.0}, 1.0);
  /// Chains only: cut radii for exhaustion runs.
  std::vector<double> cut;
  /// Chains only: exponents s for the L^s summability verdicts.
  std::vector<double> lebesgue;
  /// Chains only: ball counts of the truncations solved numerically.
  std::vector<std::size_t> truncate;
};

/// A parsed run configuration. See docs/config.md for the grammar.
struct RunConfig {
  std::vector<DomainSpec> domains;

  std::vector<double> p{2.0};
  std::vector<double> q;           ///< empty: q = p only
  std::vector<double> delta{0.5, 1.0, 2.0};
  bool delta_star = true;          ///< append (p/(p-1))^{p-1} per p
  std::vector<double> extremal_delta{1.0};

  std::vector<double> h{1.0 / 64.0};

  SolverOptions solver{};
  PoincareOptions poincare{};

  std::optional<double> sobolev_const;
  std::uint64_t seed = 20240601;
  std::size_t fields = 100;
  double tolerance = 0.02;
  double corrupt_torsion = 0.0;    ///< w is scaled by 1 + this before checking
  std::vector<int> sharpness;      ///< n values of the borderline sequence

  std::vector<double> probe_beta;
  std::vector<double> probe_h;

  std::vector<double> young_p{1.5, 2.0, 3.0};
  std::size_t young_samples = 100000;

  std::string out_dir = "out";

  /// Normalized text form: sections in fixed order, keys sorted, numbers in
  /// shortest round-trip form. The output directory is left out, so runs into
  /// different directories share a hash.
  std::string canonical() const;
  /// FNV-1a of canonical(), as hex.
  std::string hash() const;
  /// δ values for exponent p, including δ* when requested.
  std::vector<double> deltas_for(double p) const;
};

/// Throws ConfigError naming the line and the violated constraint.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace ptorsion
