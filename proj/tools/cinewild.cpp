// Command line front end: run scenarios, compare controller modes across
// seeds, render metric plots, and emit the bundled scenario presets.
//
// Exit codes: 0 success, 2 invalid input or configuration (with a
// diagnostic, no output files), 1 unexpected internal failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cinewild/csvio.hpp"
#include "cinewild/harness.hpp"
#include "cinewild/plots.hpp"
#include "cinewild/scenario.hpp"

namespace fs = std::filesystem;
using namespace cinewild;

namespace {

// CINEWILD_THREADS overrides the scenario's solver thread count; the
// planner's per-sample RNG streams make the results identical either way.
int env_threads() {
  const char* s = std::getenv("CINEWILD_THREADS");
  if (!s || !*s) return 0;
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (*end != '\0' || v < 1 || v > 1024)
    throw ConfigError("CINEWILD_THREADS must be a positive integer, got '" +
                      std::string(s) + "'");
  return static_cast<int>(v);
}

Scenario load_from_options(const std::string& config, const std::string& preset) {
  if (config.empty() == preset.empty())
    throw ConfigError("exactly one of --config and --preset is required");
  if (!config.empty()) return load_scenario(config);
  if (preset == "e1") return experiment1_preset();
  if (preset == "e2") return experiment2_preset();
  throw ConfigError("unknown preset '" + preset + "' (expected e1 or e2)");
}

Scenario apply_mode(Scenario s, const std::string& mode) {
  if (mode.empty()) return s;
  if (mode == "baseline") return baseline_mode(s);
  if (mode == "cinewild") {
    s.mode = "cinewild";
    return s;
  }
  throw ConfigError("unknown mode '" + mode + "'");
}

struct RunOutputs {
  std::vector<StepRecord> records;
  RunSummary summary;
};

RunOutputs execute(Scenario s, std::uint64_t seed) {
  if (const int t = env_threads()) s.solver.n_threads = t;
  RunOutputs out;
  out.records = run(s, seed);
  out.summary = summarize(out.records, s, seed);
  return out;
}

void write_run(const RunOutputs& r, const fs::path& dir) {
  fs::create_directories(dir);
  write_csv(r.records, (dir / "metrics.csv").string());
  save_summary(r.summary, (dir / "summary.json").string());
}

int cmd_run(const std::string& config, const std::string& preset,
            const std::string& mode, std::uint64_t seed,
            const std::string& out) {
  const Scenario s = apply_mode(load_from_options(config, preset), mode);
  const RunOutputs r = execute(s, seed);
  write_run(r, out);
  const SummaryStats& o = r.summary.overall;
  std::printf("%s (%s) seed=%llu: %d steps\n", s.name.c_str(), s.mode.c_str(),
              static_cast<unsigned long long>(seed), o.steps);
  std::printf("  mean dist %.2f m | mean focal %.1f mm | mean accel %.3f"
              " m/s^2 | inside-fov %.1f%% of %d gated steps\n",
              o.mean_dist, o.mean_focal, o.mean_accel, o.pct_inside_fov,
              o.gated_steps);
  std::printf("  wrote %s and %s\n", (fs::path(out) / "metrics.csv").c_str(),
              (fs::path(out) / "summary.json").c_str());
  return 0;
}

struct MetricDef {
  const char* name;
  double (*get)(const SummaryStats&);
};

const MetricDef kCompareMetrics[] = {
    {"mean_dist", [](const SummaryStats& s) { return s.mean_dist; }},
    {"mean_focal", [](const SummaryStats& s) { return s.mean_focal; }},
    {"mean_accel", [](const SummaryStats& s) { return s.mean_accel; }},
    {"mean_speed", [](const SummaryStats& s) { return s.mean_speed; }},
    {"mean_abs_framing_u",
     [](const SummaryStats& s) { return s.mean_abs_framing_u; }},
    {"mean_abs_framing_v",
     [](const SummaryStats& s) { return s.mean_abs_framing_v; }},
    {"mean_proximity_cost",
     [](const SummaryStats& s) { return s.mean_proximity_cost; }},
    {"pct_inside_fov", [](const SummaryStats& s) { return s.pct_inside_fov; }},
    {"abs_mean_yaw_err",
     [](const SummaryStats& s) { return std::fabs(s.mean_yaw_err); }},
    {"mean_eye_offset_px",
     [](const SummaryStats& s) { return s.mean_eye_offset_px; }},
};

int cmd_compare(const std::string& config, const std::string& preset, int seeds,
                const std::string& out) {
  if (seeds < 1) throw ConfigError("--seeds must be >= 1");
  const Scenario base = load_from_options(config, preset);
  const Scenario modes[2] = {apply_mode(base, "cinewild"),
                             apply_mode(base, "baseline")};

  std::vector<RunSummary> summaries[2];
  for (int m = 0; m < 2; ++m) {
    for (int i = 0; i < seeds; ++i) {
      const std::uint64_t seed = static_cast<std::uint64_t>(i) + 1;
      const RunOutputs r = execute(modes[m], seed);
      write_run(r, fs::path(out) / (modes[m].mode + "_seed" + std::to_string(seed)));
      summaries[m].push_back(r.summary);
      std::printf("finished %s seed %llu/%d\n", modes[m].mode.c_str(),
                  static_cast<unsigned long long>(seed), seeds);
      std::fflush(stdout);
    }
  }

  std::string csv = "metric,cinewild_mean,cinewild_std,baseline_mean,baseline_std\n";
  nlohmann::json jmetrics;
  std::printf("\n%-22s %14s %14s\n", "metric", "cinewild", "baseline");
  for (const MetricDef& m : kCompareMetrics) {
    Aggregate agg[2];
    for (int k = 0; k < 2; ++k) {
      std::vector<double> xs;
      for (const RunSummary& s : summaries[k]) xs.push_back(m.get(s.overall));
      agg[k] = aggregate(xs);
    }
    char line[160];
    std::snprintf(line, sizeof(line), "%s,%.10g,%.10g,%.10g,%.10g\n", m.name,
                  agg[0].mean, agg[0].stddev, agg[1].mean, agg[1].stddev);
    csv += line;
    jmetrics[m.name] = {{"cinewild", {{"mean", agg[0].mean}, {"std", agg[0].stddev}}},
                        {"baseline", {{"mean", agg[1].mean}, {"std", agg[1].stddev}}}};
    std::printf("%-22s %8.3f±%-6.3f %8.3f±%-6.3f\n", m.name, agg[0].mean,
                agg[0].stddev, agg[1].mean, agg[1].stddev);
  }
  nlohmann::json j;
  j["scenario"] = base.name;
  j["seeds"] = seeds;
  j["metrics"] = jmetrics;
  fs::create_directories(out);
  write_file_atomic((fs::path(out) / "comparison.csv").string(), csv);
  write_file_atomic((fs::path(out) / "comparison.json").string(),
                    j.dump(2) + "\n");
  std::printf("\nwrote %s\n", (fs::path(out) / "comparison.csv").c_str());
  return 0;
}

PlotContext context_from_summary(const fs::path& summary_path) {
  PlotContext ctx;
  std::ifstream in(summary_path);
  if (!in) return ctx;  // plot with defaults when no sidecar exists
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(summary_path.string() + ": not valid JSON: " + e.what());
  }
  ctx.caution_dist = j.value("caution_dist", ctx.caution_dist);
  ctx.safety_dist = j.value("safety_dist", ctx.safety_dist);
  ctx.visibility_range = j.value("visibility_range", ctx.visibility_range);
  ctx.eye_width_px = j.value("eye_width_px", ctx.eye_width_px);
  if (j.contains("sequence_ends"))
    ctx.sequence_ends = j["sequence_ends"].get<std::vector<double>>();
  return ctx;
}

int cmd_plot(const std::string& in, std::string summary,
             const std::string& out, std::vector<std::string> which) {
  if (!fs::exists(in)) throw ConfigError("cannot open metrics file: " + in);
  const std::vector<StepRecord> records = read_csv(in);
  if (summary.empty())
    summary = (fs::path(in).parent_path() / "summary.json").string();
  const PlotContext ctx = context_from_summary(summary);
  if (which.empty())
    which = {"distance", "focal", "framing", "kinematics", "fovx"};
  fs::create_directories(out);
  for (const std::string& name : which) {
    const PlotPanel panel = panel_from_name(name);
    const fs::path path = fs::path(out) / (name + ".svg");
    write_file_atomic(path.string(), render_svg(records, panel, ctx));
    std::printf("wrote %s\n", path.c_str());
  }
  return 0;
}

int cmd_presets(const std::string& out) {
  fs::create_directories(out);
  const fs::path p1 = fs::path(out) / "e1.json";
  const fs::path p2 = fs::path(out) / "e2.json";
  save_scenario(experiment1_preset(), p1.string());
  save_scenario(experiment2_preset(), p2.string());
  std::printf("wrote %s\nwrote %s\n", p1.c_str(), p2.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cinewild: wildlife-aware drone cinematography simulation"};
  app.require_subcommand(1);

  std::string config, preset, mode, out = ".", in, summary;
  std::uint64_t seed = 1;
  int seeds = 10;
  std::vector<std::string> which;

  CLI::App* c_run = app.add_subcommand("run", "simulate one scenario run");
  c_run->add_option("--config", config, "scenario JSON file");
  c_run->add_option("--preset", preset, "bundled scenario: e1 or e2");
  c_run->add_option("--mode", mode,
                    "override controller mode: cinewild or baseline");
  c_run->add_option("--seed", seed, "run seed (default 1)");
  c_run->add_option("--out", out, "output directory (default .)");

  CLI::App* c_cmp = app.add_subcommand(
      "compare", "run both modes across seeds and tabulate the metrics");
  c_cmp->add_option("--config", config, "scenario JSON file");
  c_cmp->add_option("--preset", preset, "bundled scenario: e1 or e2");
  c_cmp->add_option("--seeds", seeds, "number of seeds (default 10)");
  c_cmp->add_option("--out", out, "output directory (default .)");

  CLI::App* c_plot = app.add_subcommand("plot", "render SVG metric panels");
  c_plot->add_option("--in", in, "metrics.csv from a run")->required();
  c_plot->add_option("--summary", summary,
                     "summary.json sidecar (default: next to --in)");
  c_plot->add_option("--out", out, "output directory (default .)");
  c_plot->add_option("--which", which,
                     "panels: distance focal framing kinematics fovx "
                     "(default all)");

  CLI::App* c_pre = app.add_subcommand("presets", "write the bundled scenarios");
  c_pre->add_option("--out", out, "output directory (default .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_run->parsed()) return cmd_run(config, preset, mode, seed, out);
    if (c_cmp->parsed()) return cmd_compare(config, preset, seeds, out);
    if (c_plot->parsed()) return cmd_plot(in, summary, out, which);
    if (c_pre->parsed()) return cmd_presets(out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 0;
}
