#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ptorsion/config.hpp"
#include "ptorsion/report.hpp"

namespace ptorsion {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitPass = 0,
  kExitInequality = 1,
  kExitSolver = 2,
  kExitConfig = 3,
};

struct CliOptions {
  std::filesystem::path out_dir;
  /// Write only JSON artifacts and print the JSON document on stdout.
  bool json_only = false;
};

/// Each command writes its artifacts under opts.out_dir and returns an exit
/// code. Library exceptions propagate; run_cli maps them to error JSON.
int cmd_torsion(const RunConfig& cfg, const CliOptions& opts, std::ostream& out);
int cmd_poincare(const RunConfig& cfg, const CliOptions& opts, std::ostream& out);
int cmd_verify(const RunConfig& cfg, const CliOptions& opts, std::ostream& out);
int cmd_chain(const RunConfig& cfg, const CliOptions& opts, std::ostream& out);
int cmd_young(const RunConfig& cfg, const CliOptions& opts, std::ostream& out);

/// Reports produced by cmd_verify for one configuration, in config order.
std::vector<InequalityReport> verify_reports(const RunConfig& cfg);

/// `ptorsion <torsion|poincare|verify|chain|young> --config PATH [--out DIR]
/// [--h-override H] [--json-only]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ptorsion
