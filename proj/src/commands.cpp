#include "pkco/commands.hpp"

#include <chrono>
#include <fstream>
#include <future>
#include <sstream>

#include "pkco/trace_io.hpp"

#ifndef PKCO_VERSION
#define PKCO_VERSION "0.0.0"
#endif

namespace pkco {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kTraceName = "trace.csv";
constexpr const char* kSummaryName = "summary.json";

struct Outcome {
  int code = kExitOk;
  std::string error;
  std::vector<NodeAnalysis> analyses;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

json theory_json(const TheoryPrediction& t) {
  return json{{"eigenvalue", t.eigenvalue}, {"asymptote_s", t.asymptote},
              {"stable", t.stable}};
}

json report_json(const ConvergenceReport& r) {
  json j;
  j["converged"] = r.converged;
  j["settling_cycle"] = r.settling_cycle ? json(*r.settling_cycle) : json(nullptr);
  j["steady_mean_s"] = r.steady_mean;
  j["steady_std_s"] = r.steady_std;
  j["max_abs_delta_s"] = r.max_abs_delta;
  j["collision_count"] = r.collision_count;
  return j;
}

// Applies --seed / --cycles so the manifest text alone reproduces the run.
void apply_run_overrides(ScenarioFile& file, const RunOptions& options) {
  if (options.seed) file.set("scenario", "seed", std::to_string(*options.seed));
  if (options.cycles) file.set("scenario", "num_cycles", std::to_string(*options.cycles));
}

Outcome execute(const ScenarioFile& file, const RunOptions& options,
                const fs::path& out_dir, std::ostream& err) {
  Outcome outcome;
  const auto started = std::chrono::steady_clock::now();
  ScenarioConfig scenario;
  AnalysisSettings settings;
  try {
    scenario = file.build(options.strict);
    settings = file.analysis_settings();
  } catch (const ConfigError& e) {
    outcome.code = kExitConfig;
    outcome.error = e.what();
    return outcome;
  }
  if (!options.quiet) {
    for (const std::string& w : scenario.warnings()) err << "warning: " << w << '\n';
  }

  RunResult result;
  try {
    result = run(scenario);
  } catch (const SimulationError& e) {
    outcome.code = kExitSimulation;
    outcome.error = std::string("simulation error: ") + e.what();
    return outcome;
  }
  outcome.analyses =
      analyze_records(result.scenario, result.records, settings.tolerance, settings.window);

  try {
    fs::create_directories(out_dir);
    std::ostringstream trace;
    write_trace(trace, result.records);
    write_text(out_dir / kTraceName, trace.str());

    const double runtime = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - started)
                               .count();
    json manifest;
    manifest["tool"] = "pkco";
    manifest["version"] = tool_version();
    manifest["scenario_path"] = options.config_path.string();
    manifest["scenario_text"] = file.to_text();
    manifest["seed"] = scenario.seed;
    manifest["num_cycles"] = scenario.num_cycles;
    manifest["strict"] = options.strict;
    manifest["analysis"] = {
        {"window", settings.window},
        {"tolerance_s", settings.tolerance ? json(*settings.tolerance) : json(nullptr)}};
    manifest["outputs"] = {{"trace", kTraceName},
                           {"manifest", manifest_path_for(kTraceName).string()},
                           {"summary", kSummaryName}};
    manifest["runtime_s"] = runtime;
    write_text(manifest_path_for(out_dir / kTraceName), manifest.dump(2) + "\n");

    json summary;
    summary["scenario"] = scenario.name;
    summary["seed"] = scenario.seed;
    summary["per_node"] = per_node_json(outcome.analyses);
    summary["manifest"] = manifest;
    write_text(out_dir / kSummaryName, summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    outcome.code = kExitIo;
    outcome.error = e.what();
  }
  return outcome;
}

void print_outcome(const Outcome& o, const fs::path& out_dir, std::ostream& out) {
  for (const NodeAnalysis& a : o.analyses) {
    out << "node " << a.node_id << ": asymptote " << format_double(a.theory.asymptote)
        << " s, steady mean " << format_double(a.report.steady_mean) << " s, "
        << (a.report.converged
                ? "settled at cycle " + std::to_string(*a.report.settling_cycle)
                : std::string("not converged"))
        << '\n';
  }
  out << "wrote " << (out_dir / kTraceName).string() << '\n';
}

}  // namespace

std::string tool_version() { return PKCO_VERSION; }

fs::path manifest_path_for(const fs::path& trace_path) {
  fs::path p = trace_path;
  p.replace_extension(".manifest.json");
  return p;
}

json per_node_json(const std::vector<NodeAnalysis>& analyses) {
  json j = json::object();
  for (const NodeAnalysis& a : analyses) {
    j[std::to_string(a.node_id)] = {{"theory", theory_json(a.theory)},
                                    {"report", report_json(a.report)}};
  }
  return j;
}

ScenarioFile scenario_from_manifest(const json& manifest) {
  return ScenarioFile::parse(manifest.at("scenario_text").get<std::string>(),
                             manifest.value("scenario_path", std::string("<manifest>")));
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  ScenarioFile file;
  try {
    file = ScenarioFile::load(options.config_path);
    apply_run_overrides(file, options);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  const Outcome o = execute(file, options, options.out_dir, err);
  if (o.code != kExitOk) {
    err << "error: " << o.error << '\n';
    return o.code;
  }
  if (!options.quiet) print_outcome(o, options.out_dir, out);
  return kExitOk;
}

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err) {
  if (options.values.empty()) {
    err << "error: sweep needs at least one value\n";
    return kExitUsage;
  }
  std::vector<ScenarioFile> files;
  try {
    ScenarioFile base = ScenarioFile::load(options.base.config_path);
    apply_run_overrides(base, options.base);
    for (const std::string& v : options.values) {
      ScenarioFile f = base;
      f.apply_override(options.param, v);
      files.push_back(std::move(f));
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  // Each sub-run owns its directory; warnings are buffered per sub-run.
  struct SubRun {
    fs::path dir;
    std::ostringstream log;
    Outcome outcome;
  };
  std::vector<SubRun> subs(files.size());
  std::vector<std::future<void>> jobs;
  for (std::size_t i = 0; i < files.size(); ++i) {
    subs[i].dir = options.base.out_dir / (options.param + "_" + std::to_string(i));
    jobs.push_back(std::async(std::launch::async, [&, i] {
      subs[i].outcome = execute(files[i], options.base, subs[i].dir, subs[i].log);
    }));
  }
  for (auto& j : jobs) j.get();

  int code = kExitOk;
  std::ostringstream table;
  table << "value,node_id,asymptote_theory,steady_mean,settling_cycle,converged,status\n";
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const SubRun& s = subs[i];
    const std::string& value = options.values[i];
    err << s.log.str();
    if (s.outcome.code != kExitOk) {
      err << "error: " << options.param << "=" << value << ": " << s.outcome.error << '\n';
      table << value << ",,,,,false,error\n";
      if (code == kExitOk) code = s.outcome.code;
      continue;
    }
    for (const NodeAnalysis& a : s.outcome.analyses) {
      table << value << ',' << a.node_id << ',' << format_double(a.theory.asymptote) << ','
            << format_double(a.report.steady_mean) << ','
            << (a.report.settling_cycle ? std::to_string(*a.report.settling_cycle) : "")
            << ',' << (a.report.converged ? "true" : "false") << ",ok\n";
    }
  }
  try {
    fs::create_directories(options.base.out_dir);
    write_text(options.base.out_dir / "sweep.csv", table.str());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  if (!options.base.quiet) out << table.str();
  return code;
}

int cmd_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err) {
  std::vector<CycleRecord> records;
  {
    std::ifstream in(options.trace_path, std::ios::binary);
    if (!in) {
      err << "error: cannot open " << options.trace_path.string() << '\n';
      return kExitIo;
    }
    try {
      records = read_trace(in);
    } catch (const TraceError& e) {
      err << "error: " << options.trace_path.string() << ": " << e.what() << '\n';
      return kExitTrace;
    }
  }
  if (records.empty()) {
    err << "error: " << options.trace_path.string() << ": trace has no rows\n";
    return kExitTrace;
  }

  ScenarioFile file;
  try {
    const fs::path sidecar = manifest_path_for(options.trace_path);
    if (fs::exists(sidecar)) {
      std::ifstream in(sidecar, std::ios::binary);
      file = scenario_from_manifest(json::parse(in));
    } else if (options.config_path) {
      file = ScenarioFile::load(*options.config_path);
    } else {
      err << "error: no manifest next to the trace; pass --config\n";
      return kExitUsage;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "error: unreadable manifest: " << e.what() << '\n';
    return kExitIo;
  }

  try {
    const ScenarioConfig scenario = file.build(false);
    const AnalysisSettings settings = file.analysis_settings();
    const auto analyses =
        analyze_records(scenario, records, settings.tolerance, settings.window);
    out << per_node_json(analyses).dump(2) << '\n';
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitTrace;
  }
  return kExitOk;
}

}  // namespace pkco
