#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pkco/analysis.hpp"
#include "pkco/scenario_file.hpp"

namespace pkco {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitSimulation = 3,
  kExitIo = 4,
  kExitTrace = 5,
};

std::string tool_version();

struct RunOptions {
  std::filesystem::path config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> cycles;
  std::filesystem::path out_dir = ".";
  bool strict = false;
  bool quiet = false;
};

struct SweepOptions {
  RunOptions base;
  std::string param;
  std::vector<std::string> values;
};

struct AnalyzeOptions {
  std::filesystem::path trace_path;
  /// Used when the trace has no manifest next to it.
  std::optional<std::filesystem::path> config_path;
};

/// Writes trace.csv, trace.manifest.json and summary.json into out_dir.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

/// One sub-run per value in out_dir/<param>_<index>/ plus out_dir/sweep.csv.
int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

/// Prints the per-node report JSON recomputed from a trace.
int cmd_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err);

/// {"<node_id>": {"theory": {...}, "report": {...}}}
nlohmann::json per_node_json(const std::vector<NodeAnalysis>& analyses);

/// Path of the manifest sidecar belonging to a trace file.
std::filesystem::path manifest_path_for(const std::filesystem::path& trace_path);

/// Re-creates the scenario file a manifest was produced from, overrides applied.
ScenarioFile scenario_from_manifest(const nlohmann::json& manifest);

}  // namespace pkco
