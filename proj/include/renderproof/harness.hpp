#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "renderproof/iqa.hpp"
#include "renderproof/lightmap.hpp"
#include "renderproof/render.hpp"
#include "renderproof/scene.hpp"

namespace renderproof {

// Reference comes from a display-image file or a self-rendered ground truth;
// exactly one of the two is set.
struct SceneEntry {
    std::string id;
    std::string file;
    std::optional<std::string> reference_file;
    std::optional<RenderSettings> reference_render;

    bool operator==(const SceneEntry&) const = default;
};

struct VariantEntry {
    std::string id;
    std::optional<std::string> overrides_file;
    RenderSettings settings;
    std::optional<BakeSettings> bake;  // required by baked mode, rejected otherwise

    bool operator==(const VariantEntry&) const = default;
};

struct ExperimentConfig {
    std::vector<SceneEntry> scenes;      // >= 1
    std::vector<VariantEntry> variants;  // >= 2, first is the baseline
    std::vector<std::string> metrics;    // non-empty subset of psnr/ssim/nrq
    bool normalize = true;
    std::optional<std::string> nr_calibration;  // required iff nrq requested
    std::string out_dir;

    bool operator==(const ExperimentConfig&) const = default;
};

// Relative paths inside the config resolve against base_dir; out_dir resolves
// against the working directory at run time.
ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::string& base_dir);
ExperimentConfig load_experiment_config(const std::string& path);
std::string serialize_experiment_config(const ExperimentConfig& config);

enum class Verdict { Improved, Regressed, Tied };

std::string verdict_name(Verdict verdict);
Verdict classify_delta(double delta, double tie_epsilon);

// One non-baseline cell compared against the baseline variant of the same
// metric and scene. Deltas are raw-score differences.
struct Comparison {
    std::string metric;
    std::string scene;
    std::string variant;
    double delta = 0.0;
    Verdict verdict = Verdict::Tied;

    bool operator==(const Comparison&) const = default;
};

struct Report {
    std::vector<std::string> metrics;
    std::vector<std::string> scenes;
    std::vector<std::string> variants;  // first is the baseline
    std::vector<MetricScore> cells;     // metric-major, then scene, then variant
    std::vector<Comparison> comparisons;
    double tie_epsilon = 0.0;
    std::string tool;
    std::string config_echo;  // serialized config the run was built from
};

// Builds the full report from a metric-major raw grid:
// raw[(m * |scenes| + s) * |variants| + v]. Normalization is per metric row
// and skipped for a row containing non-finite raw values.
Report assemble_report(std::span<const std::string> metrics,
                       std::span<const std::string> scenes,
                       std::span<const std::string> variants,
                       std::span<const double> raw, bool normalize,
                       double tie_epsilon, const std::string& config_echo);

struct VerdictGrid {
    std::vector<Verdict> verdicts;         // aligned with report.comparisons
    std::vector<int> improved_per_metric;  // aligned with report.metrics
};

// Re-ranks the report's deltas under a different tie threshold.
VerdictGrid rank_verdict(const Report& report, double tie_epsilon);

// Renders every scene x variant cell plus references, scores the grid, and
// assembles the report. Images land under config.out_dir:
//   {scene}_{variant}.ppm/.pfm and {scene}_reference.ppm.
Report run_experiment(const ExperimentConfig& config, double tie_epsilon = 0.0);

// header "metric,scene,variant,raw,normalized,verdict"; one row per cell
// sorted by (metric, scene, variant); absent fields stay empty.
std::string emit_csv(const Report& report);

// Two-variant reports render in the original/improved column-group layout
// with one column per scene; anything else falls back to a long-format table.
// Both shapes append the per-comparison verdict table and per-metric
// improved counts.
std::string emit_markdown(const Report& report);

// Run manifest: tool version, tie threshold, ids, seeds, and the config echo.
std::string emit_provenance(const Report& report);

}  // namespace renderproof
