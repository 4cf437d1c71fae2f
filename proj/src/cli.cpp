#include "renderproof/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "renderproof/errors.hpp"
#include "renderproof/harness.hpp"
#include "renderproof/iqa.hpp"
#include "renderproof/image.hpp"
#include "renderproof/render.hpp"
#include "renderproof/scene.hpp"
#include "renderproof/version.hpp"

namespace renderproof {

namespace {

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= text.size()) {
        const size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(text.substr(start));
            break;
        }
        out.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

struct RenderArgs {
    std::string scene, mode, lightmaps, out_ppm, out_pfm;
    int spp = 0;
    int bounces = 0;
    uint64_t seed = 0;
    double exposure = 1.0;
};

struct BakeArgs {
    std::string scene, out;
    double texel_size = 0.0;
    int samples = 0;
    int bounces = 0;
    uint64_t seed = 0;
};

struct AssessArgs {
    std::string ref, test, metrics, calibration;
};

struct CompareArgs {
    std::string config;
    double tie_epsilon = 0.0;
};

int run_render(const RenderArgs& args, std::ostream& out) {
    const Scene scene = load_scene_file(args.scene);
    RenderSettings settings;
    settings.mode = parse_render_mode(args.mode);
    settings.samples_per_pixel = args.spp;
    settings.max_bounces = args.bounces;
    settings.seed = args.seed;
    settings.exposure = args.exposure;

    LightmapSet lightmaps;
    const LightmapSet* lightmaps_ptr = nullptr;
    if (!args.lightmaps.empty()) {
        lightmaps = read_lightmaps(args.lightmaps);
        lightmaps_ptr = &lightmaps;
    }
    const LinearImage linear = render(scene, settings, lightmaps_ptr);
    write_ppm(args.out_ppm, encode_display(linear, settings.exposure));
    out << "wrote " << args.out_ppm << "\n";
    if (!args.out_pfm.empty()) {
        write_pfm(args.out_pfm, linear);
        out << "wrote " << args.out_pfm << "\n";
    }
    return 0;
}

int run_bake(const BakeArgs& args, std::ostream& out) {
    const Scene scene = load_scene_file(args.scene);
    BakeSettings settings;
    settings.texel_size = args.texel_size;
    settings.samples_per_texel = args.samples;
    settings.max_bounces = args.bounces;
    settings.seed = args.seed;
    const LightmapSet set = bake_lightmaps(scene, settings);
    write_lightmaps(args.out, set);
    out << "wrote " << args.out << " (" << set.entries.size() << " entries)\n";
    return 0;
}

int run_assess(const AssessArgs& args, std::ostream& out, std::ostream& err) {
    const std::vector<std::string> metrics = split_csv(args.metrics);
    std::vector<std::string> seen;
    for (const std::string& metric : metrics) {
        if (metric != "psnr" && metric != "ssim" && metric != "nrq") {
            err << "unknown metric \"" << metric << "\" (expected psnr, ssim, or nrq)\n";
            return 1;
        }
        if (std::find(seen.begin(), seen.end(), metric) != seen.end()) {
            err << "duplicate metric \"" << metric << "\"\n";
            return 1;
        }
        seen.push_back(metric);
    }
    const bool wants_nr = std::find(metrics.begin(), metrics.end(), "nrq") != metrics.end();
    if (wants_nr && args.calibration.empty()) {
        err << "metric nrq requires --calibration\n";
        return 1;
    }

    const DisplayImage reference = read_ppm(args.ref);
    const DisplayImage test = read_ppm(args.test);
    NrCalibration calibration;
    if (wants_nr) calibration = load_nr_calibration_file(args.calibration);

    MetricScore score;
    score.scene = std::filesystem::path(args.ref).stem().string();
    score.variant = std::filesystem::path(args.test).stem().string();
    for (const std::string& metric : metrics) {
        score.metric = metric;
        if (metric == "psnr") {
            score.raw = psnr(reference, test);
        } else if (metric == "ssim") {
            score.raw = ssim(reference, test);
        } else {
            score.raw = nr_score(nr_features(test), calibration);
        }
        out << metric_score_json(score) << "\n";
    }
    return 0;
}

int run_compare(const CompareArgs& args, std::ostream& out) {
    const ExperimentConfig config = load_experiment_config(args.config);
    const Report report = run_experiment(config, args.tie_epsilon);
    const VerdictGrid grid = rank_verdict(report, report.tie_epsilon);
    const int per_metric = static_cast<int>(report.scenes.size()) *
                           static_cast<int>(report.variants.size() - 1);
    for (size_t m = 0; m < report.metrics.size(); ++m) {
        out << report.metrics[m] << ": " << grid.improved_per_metric[m] << "/" << per_metric
            << " comparisons improved\n";
    }
    const std::filesystem::path out_dir(config.out_dir);
    out << "wrote " << (out_dir / "report.csv").string() << "\n";
    out << "wrote " << (out_dir / "report.md").string() << "\n";
    out << "wrote " << (out_dir / "provenance.json").string() << "\n";
    return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rendering quality evaluation toolkit"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    RenderArgs render_args;
    CLI::App* render_cmd = app.add_subcommand("render", "Render a scene to an image");
    render_cmd->add_option("--scene", render_args.scene, "Scene file")->required();
    render_cmd->add_option("--mode", render_args.mode, "Illumination mode")
        ->required()
        ->check(CLI::IsMember({"direct", "gi", "baked"}));
    render_cmd->add_option("--spp", render_args.spp, "Samples per pixel")->required();
    render_cmd->add_option("--bounces", render_args.bounces, "Path bounce cap")->required();
    render_cmd->add_option("--seed", render_args.seed, "Sampler seed")->required();
    render_cmd->add_option("--exposure", render_args.exposure, "Exposure multiplier")
        ->required();
    render_cmd->add_option("--lightmaps", render_args.lightmaps, "Lightmap file (baked mode)");
    render_cmd->add_option("--out-ppm", render_args.out_ppm, "Display image output")
        ->required();
    render_cmd->add_option("--out-pfm", render_args.out_pfm, "Radiance image output");

    BakeArgs bake_args;
    CLI::App* bake_cmd = app.add_subcommand("bake", "Precompute lightmaps for a scene");
    bake_cmd->add_option("--scene", bake_args.scene, "Scene file")->required();
    bake_cmd->add_option("--texel-size", bake_args.texel_size, "World units per texel")
        ->required();
    bake_cmd->add_option("--samples", bake_args.samples, "Samples per texel")->required();
    bake_cmd->add_option("--bounces", bake_args.bounces, "Path bounce cap")->required();
    bake_cmd->add_option("--seed", bake_args.seed, "Sampler seed")->required();
    bake_cmd->add_option("--out", bake_args.out, "Lightmap output file")->required();

    AssessArgs assess_args;
    CLI::App* assess_cmd = app.add_subcommand("assess", "Score a test image");
    assess_cmd->add_option("--ref", assess_args.ref, "Reference PPM")->required();
    assess_cmd->add_option("--test", assess_args.test, "Test PPM")->required();
    assess_cmd->add_option("--metrics", assess_args.metrics, "Comma-separated metric list")
        ->required();
    assess_cmd->add_option("--calibration", assess_args.calibration,
                           "NR calibration file (required for nrq)");

    CompareArgs compare_args;
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "Run an experiment config and write reports");
    compare_cmd->add_option("--config", compare_args.config, "Experiment config file")
        ->required();
    compare_cmd->add_option("--tie-epsilon", compare_args.tie_epsilon,
                            "Delta magnitude treated as a tie")
        ->check(CLI::NonNegativeNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        err << "run with --help for usage\n";
        return 1;
    }

    try {
        if (*render_cmd) return run_render(render_args, out);
        if (*bake_cmd) return run_bake(bake_args, out);
        if (*assess_cmd) return run_assess(assess_args, out, err);
        return run_compare(compare_args, out);
    } catch (const MetricError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace renderproof
