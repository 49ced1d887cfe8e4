#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rim/config.hpp"

namespace rim::cli {

enum ExitCode : int { kSuccess = 0, kPhysicsError = 1, kConfigError = 2 };

struct Options {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool json = false;
};

struct RunResult {
  int exit_code = kSuccess;
  nlohmann::json summary;
  /// Empty for subcommands without tabular output.
  std::string csv;
};

const std::vector<std::string>& subcommands();
std::string version();

/// Runs one subcommand on a parsed config. Physics-domain errors are caught
/// and reported in the summary with exit code 1.
RunResult run(const std::string& subcommand, const RunConfig& cfg);

/// Loads the config, runs, writes <out>/<subcommand>.json and .csv when an
/// output directory is given, and prints the summary to `out` when asked
/// (or when no output directory is set).
int execute(const std::string& subcommand, const Options& opts, std::ostream& out, std::ostream& err);

/// Serializes with every floating-point number printed to 17 significant digits.
std::string dump_json(const nlohmann::json& j, int indent = 2);

}  // namespace rim::cli
