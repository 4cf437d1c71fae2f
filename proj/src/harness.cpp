#include "renderproof/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <unordered_set>

#include <json.hpp>

#include "renderproof/errors.hpp"
#include "renderproof/version.hpp"

namespace renderproof {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

[[noreturn]] void fail_schema(const std::string& message) {
    throw SchemaError("schema error: " + message);
}

void require_object(const Json& node, const std::string& where) {
    if (!node.is_object()) fail_schema(where + " must be an object");
}

const Json& require_key(const Json& node, const char* key, const std::string& where) {
    const auto it = node.find(key);
    if (it == node.end()) fail_schema(where + ": missing \"" + std::string(key) + "\"");
    return *it;
}

void reject_unknown_keys(const Json& node, std::initializer_list<std::string_view> allowed,
                         const std::string& where) {
    for (auto it = node.begin(); it != node.end(); ++it) {
        bool known = false;
        for (const auto key : allowed) {
            if (key == it.key()) {
                known = true;
                break;
            }
        }
        if (!known) fail_schema(where + ": unknown key \"" + it.key() + "\"");
    }
}

std::string as_string(const Json& node, const std::string& where) {
    if (!node.is_string()) fail_schema(where + " must be a string");
    return node.get<std::string>();
}

bool valid_id(const std::string& id) {
    if (id.empty()) return false;
    for (const char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-';
        if (!ok) return false;
    }
    return true;
}

std::string as_id(const Json& node, const std::string& where) {
    const std::string id = as_string(node, where);
    if (!valid_id(id)) fail_schema(where + " must match [A-Za-z0-9_-]+");
    return id;
}

int as_positive_int(const Json& node, const std::string& where) {
    if (!node.is_number_integer() && !node.is_number_unsigned()) {
        fail_schema(where + " must be a positive integer");
    }
    const int64_t v = node.get<int64_t>();
    if (v < 1 || v > (1ll << 30)) fail_schema(where + " must be a positive integer");
    return static_cast<int>(v);
}

int as_non_negative_int(const Json& node, const std::string& where) {
    if (!node.is_number_integer() && !node.is_number_unsigned()) {
        fail_schema(where + " must be a non-negative integer");
    }
    const int64_t v = node.get<int64_t>();
    if (v < 0 || v > (1ll << 30)) fail_schema(where + " must be a non-negative integer");
    return static_cast<int>(v);
}

uint64_t as_seed(const Json& node, const std::string& where) {
    if (!node.is_number_unsigned() && !(node.is_number_integer() && node.get<int64_t>() >= 0)) {
        fail_schema(where + " must be a non-negative integer");
    }
    return node.get<uint64_t>();
}

double as_positive_number(const Json& node, const std::string& where) {
    if (!node.is_number()) fail_schema(where + " must be a number");
    const double v = node.get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) fail_schema(where + " must be positive");
    return v;
}

std::string resolve_path(const std::string& base_dir, const std::string& path) {
    if (base_dir.empty() || fs::path(path).is_absolute()) return path;
    return (fs::path(base_dir) / path).string();
}

RenderSettings parse_settings(const Json& node, const std::string& where) {
    require_object(node, where);
    reject_unknown_keys(node, {"mode", "spp", "bounces", "seed", "exposure"}, where);
    RenderSettings settings;
    settings.mode =
        parse_render_mode(as_string(require_key(node, "mode", where), where + ": mode"));
    if (const auto it = node.find("spp"); it != node.end()) {
        settings.samples_per_pixel = as_positive_int(*it, where + ": spp");
    }
    if (const auto it = node.find("bounces"); it != node.end()) {
        settings.max_bounces = as_non_negative_int(*it, where + ": bounces");
    }
    if (const auto it = node.find("seed"); it != node.end()) {
        settings.seed = as_seed(*it, where + ": seed");
    }
    if (const auto it = node.find("exposure"); it != node.end()) {
        settings.exposure = as_positive_number(*it, where + ": exposure");
    }
    return settings;
}

BakeSettings parse_bake(const Json& node, const std::string& where) {
    require_object(node, where);
    reject_unknown_keys(node, {"texel_size", "samples", "bounces", "seed"}, where);
    BakeSettings settings;
    if (const auto it = node.find("texel_size"); it != node.end()) {
        settings.texel_size = as_positive_number(*it, where + ": texel_size");
    }
    if (const auto it = node.find("samples"); it != node.end()) {
        settings.samples_per_texel = as_positive_int(*it, where + ": samples");
    }
    if (const auto it = node.find("bounces"); it != node.end()) {
        settings.max_bounces = as_non_negative_int(*it, where + ": bounces");
    }
    if (const auto it = node.find("seed"); it != node.end()) {
        settings.seed = as_seed(*it, where + ": seed");
    }
    return settings;
}

Json settings_json(const RenderSettings& settings) {
    Json node;
    node["mode"] = render_mode_name(settings.mode);
    node["spp"] = settings.samples_per_pixel;
    node["bounces"] = settings.max_bounces;
    node["seed"] = settings.seed;
    node["exposure"] = settings.exposure;
    return node;
}

Json bake_json(const BakeSettings& settings) {
    Json node;
    node["texel_size"] = settings.texel_size;
    node["samples"] = settings.samples_per_texel;
    node["bounces"] = settings.max_bounces;
    node["seed"] = settings.seed;
    return node;
}

const std::unordered_set<std::string>& known_metrics() {
    static const std::unordered_set<std::string> metrics{"psnr", "ssim", "nrq"};
    return metrics;
}

// Structural rules shared by the file parser (as schema errors) and
// run_experiment (as validation errors, for configs built in code).
std::vector<std::string> config_violations(const ExperimentConfig& config) {
    std::vector<std::string> out;
    if (config.scenes.empty()) out.push_back("at least one scene is required");
    if (config.variants.size() < 2) out.push_back("at least two variants are required");
    if (config.metrics.empty()) out.push_back("at least one metric is required");

    std::unordered_set<std::string> ids;
    for (const SceneEntry& scene : config.scenes) {
        if (!valid_id(scene.id)) out.push_back("scene id must match [A-Za-z0-9_-]+");
        if (!ids.insert(scene.id).second) out.push_back("duplicate scene id \"" + scene.id + "\"");
        if (scene.reference_file.has_value() == scene.reference_render.has_value()) {
            out.push_back("scene \"" + scene.id +
                          "\": reference must be exactly one of file or render");
        }
    }
    ids.clear();
    for (const VariantEntry& variant : config.variants) {
        if (!valid_id(variant.id)) out.push_back("variant id must match [A-Za-z0-9_-]+");
        if (!ids.insert(variant.id).second) {
            out.push_back("duplicate variant id \"" + variant.id + "\"");
        }
        const bool baked = variant.settings.mode == RenderMode::Baked;
        if (baked && !variant.bake) {
            out.push_back("variant \"" + variant.id + "\": baked mode requires bake settings");
        }
        if (!baked && variant.bake) {
            out.push_back("variant \"" + variant.id +
                          "\": bake settings require baked mode");
        }
    }
    ids.clear();
    for (const std::string& metric : config.metrics) {
        if (!known_metrics().contains(metric)) {
            out.push_back("unknown metric \"" + metric + "\"");
        }
        if (!ids.insert(metric).second) out.push_back("duplicate metric \"" + metric + "\"");
    }
    const bool wants_nr = std::find(config.metrics.begin(), config.metrics.end(), "nrq") !=
                          config.metrics.end();
    if (wants_nr && !config.nr_calibration) {
        out.push_back("metric nrq requires nr_calibration");
    }
    if (config.out_dir.empty()) out.push_back("out_dir must be non-empty");
    return out;
}

size_t cell_index(const Report& report, size_t m, size_t s, size_t v) {
    return (m * report.scenes.size() + s) * report.variants.size() + v;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& base_dir) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SyntaxError(std::string("syntax error: ") + e.what());
    }
    require_object(doc, "document");
    reject_unknown_keys(
        doc, {"scenes", "variants", "metrics", "normalize", "nr_calibration", "out_dir"},
        "document");

    ExperimentConfig config;
    const Json& scenes = require_key(doc, "scenes", "document");
    if (!scenes.is_array()) fail_schema("scenes must be an array");
    for (size_t i = 0; i < scenes.size(); ++i) {
        const Json& node = scenes[i];
        const std::string where = "scenes[" + std::to_string(i) + "]";
        require_object(node, where);
        reject_unknown_keys(node, {"id", "file", "reference"}, where);
        SceneEntry entry;
        entry.id = as_id(require_key(node, "id", where), where + ": id");
        entry.file =
            resolve_path(base_dir, as_string(require_key(node, "file", where), where + ": file"));
        const Json& reference = require_key(node, "reference", where);
        require_object(reference, where + ": reference");
        reject_unknown_keys(reference, {"file", "render"}, where + ": reference");
        const bool has_file = reference.contains("file");
        const bool has_render = reference.contains("render");
        if (has_file == has_render) {
            fail_schema(where + ": reference must be exactly one of file or render");
        }
        if (has_file) {
            entry.reference_file = resolve_path(
                base_dir, as_string(reference["file"], where + ": reference file"));
        } else {
            entry.reference_render =
                parse_settings(reference["render"], where + ": reference render");
        }
        config.scenes.push_back(std::move(entry));
    }

    const Json& variants = require_key(doc, "variants", "document");
    if (!variants.is_array()) fail_schema("variants must be an array");
    for (size_t i = 0; i < variants.size(); ++i) {
        const Json& node = variants[i];
        const std::string where = "variants[" + std::to_string(i) + "]";
        require_object(node, where);
        reject_unknown_keys(node, {"id", "overrides", "settings", "bake"}, where);
        VariantEntry entry;
        entry.id = as_id(require_key(node, "id", where), where + ": id");
        if (const auto it = node.find("overrides"); it != node.end()) {
            entry.overrides_file =
                resolve_path(base_dir, as_string(*it, where + ": overrides"));
        }
        entry.settings = parse_settings(require_key(node, "settings", where), where + ": settings");
        if (const auto it = node.find("bake"); it != node.end()) {
            entry.bake = parse_bake(*it, where + ": bake");
        }
        config.variants.push_back(std::move(entry));
    }

    const Json& metrics = require_key(doc, "metrics", "document");
    if (!metrics.is_array()) fail_schema("metrics must be an array");
    for (size_t i = 0; i < metrics.size(); ++i) {
        config.metrics.push_back(
            as_string(metrics[i], "metrics[" + std::to_string(i) + "]"));
    }

    if (const auto it = doc.find("normalize"); it != doc.end()) {
        if (!it->is_boolean()) fail_schema("normalize must be a boolean");
        config.normalize = it->get<bool>();
    }
    if (const auto it = doc.find("nr_calibration"); it != doc.end()) {
        config.nr_calibration = resolve_path(base_dir, as_string(*it, "nr_calibration"));
    }
    config.out_dir = as_string(require_key(doc, "out_dir", "document"), "out_dir");

    const std::vector<std::string> violations = config_violations(config);
    if (!violations.empty()) fail_schema(violations.front());
    return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    const std::string base_dir = fs::path(path).parent_path().string();
    try {
        return parse_experiment_config(read_text_file(path), base_dir);
    } catch (const SyntaxError& e) {
        throw SyntaxError(path + ": " + e.what());
    } catch (const SchemaError& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

std::string serialize_experiment_config(const ExperimentConfig& config) {
    Json doc;
    doc["scenes"] = Json::array();
    for (const SceneEntry& scene : config.scenes) {
        Json node;
        node["id"] = scene.id;
        node["file"] = scene.file;
        if (scene.reference_file) {
            node["reference"] = Json{{"file", *scene.reference_file}};
        } else if (scene.reference_render) {
            node["reference"] = Json{{"render", settings_json(*scene.reference_render)}};
        }
        doc["scenes"].push_back(std::move(node));
    }
    doc["variants"] = Json::array();
    for (const VariantEntry& variant : config.variants) {
        Json node;
        node["id"] = variant.id;
        if (variant.overrides_file) node["overrides"] = *variant.overrides_file;
        node["settings"] = settings_json(variant.settings);
        if (variant.bake) node["bake"] = bake_json(*variant.bake);
        doc["variants"].push_back(std::move(node));
    }
    doc["metrics"] = config.metrics;
    doc["normalize"] = config.normalize;
    if (config.nr_calibration) doc["nr_calibration"] = *config.nr_calibration;
    doc["out_dir"] = config.out_dir;
    return doc.dump(2) + "\n";
}

std::string verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::Improved: return "improved";
        case Verdict::Regressed: return "regressed";
        case Verdict::Tied: return "tied";
    }
    return "tied";
}

Verdict classify_delta(double delta, double tie_epsilon) {
    if (delta > tie_epsilon) return Verdict::Improved;
    if (delta < -tie_epsilon) return Verdict::Regressed;
    return Verdict::Tied;
}

Report assemble_report(std::span<const std::string> metrics,
                       std::span<const std::string> scenes,
                       std::span<const std::string> variants, std::span<const double> raw,
                       bool normalize, double tie_epsilon, const std::string& config_echo) {
    if (metrics.empty() || scenes.empty() || variants.empty()) {
        throw ValidationError("report grid must not be empty");
    }
    if (raw.size() != metrics.size() * scenes.size() * variants.size()) {
        throw ValidationError("raw score count does not match the metric grid");
    }
    if (!(tie_epsilon >= 0.0)) throw ValidationError("tie_epsilon must be non-negative");

    Report report;
    report.metrics.assign(metrics.begin(), metrics.end());
    report.scenes.assign(scenes.begin(), scenes.end());
    report.variants.assign(variants.begin(), variants.end());
    report.tie_epsilon = tie_epsilon;
    report.tool = std::string(kToolVersion);
    report.config_echo = config_echo;

    for (size_t m = 0; m < metrics.size(); ++m) {
        for (size_t s = 0; s < scenes.size(); ++s) {
            for (size_t v = 0; v < variants.size(); ++v) {
                MetricScore cell;
                cell.metric = metrics[m];
                cell.scene = scenes[s];
                cell.variant = variants[v];
                cell.raw = raw[cell_index(report, m, s, v)];
                report.cells.push_back(std::move(cell));
            }
        }
    }

    if (normalize) {
        const size_t row_size = scenes.size() * variants.size();
        for (size_t m = 0; m < metrics.size(); ++m) {
            std::vector<double> row(row_size);
            bool finite = true;
            for (size_t i = 0; i < row_size; ++i) {
                row[i] = report.cells[m * row_size + i].raw;
                finite = finite && std::isfinite(row[i]);
            }
            // A row containing the psnr identity sentinel has no meaningful
            // z-scale; it is reported raw-only.
            if (!finite) continue;
            const std::vector<double> normalized = zscore_normalize(row);
            for (size_t i = 0; i < row_size; ++i) {
                report.cells[m * row_size + i].normalized = normalized[i];
            }
        }
    }

    for (size_t m = 0; m < metrics.size(); ++m) {
        for (size_t s = 0; s < scenes.size(); ++s) {
            const double baseline = raw[cell_index(report, m, s, 0)];
            for (size_t v = 1; v < variants.size(); ++v) {
                Comparison comparison;
                comparison.metric = metrics[m];
                comparison.scene = scenes[s];
                comparison.variant = variants[v];
                comparison.delta = raw[cell_index(report, m, s, v)] - baseline;
                comparison.verdict = classify_delta(comparison.delta, tie_epsilon);
                report.comparisons.push_back(std::move(comparison));
            }
        }
    }
    return report;
}

VerdictGrid rank_verdict(const Report& report, double tie_epsilon) {
    if (!(tie_epsilon >= 0.0)) throw ValidationError("tie_epsilon must be non-negative");
    VerdictGrid grid;
    grid.improved_per_metric.assign(report.metrics.size(), 0);
    for (const Comparison& comparison : report.comparisons) {
        const Verdict verdict = classify_delta(comparison.delta, tie_epsilon);
        grid.verdicts.push_back(verdict);
        if (verdict == Verdict::Improved) {
            const auto it =
                std::find(report.metrics.begin(), report.metrics.end(), comparison.metric);
            if (it != report.metrics.end()) {
                ++grid.improved_per_metric[static_cast<size_t>(it - report.metrics.begin())];
            }
        }
    }
    return grid;
}

Report run_experiment(const ExperimentConfig& config, double tie_epsilon) {
    {
        const std::vector<std::string> violations = config_violations(config);
        if (!violations.empty()) {
            throw ValidationError("invalid experiment config: " + violations.front());
        }
    }

    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + config.out_dir);

    NrCalibration calibration;
    const bool wants_nr = std::find(config.metrics.begin(), config.metrics.end(), "nrq") !=
                          config.metrics.end();
    if (wants_nr) calibration = load_nr_calibration_file(*config.nr_calibration);

    // Full grid of display images first, scored after the render barrier.
    std::vector<DisplayImage> references(config.scenes.size());
    std::vector<std::vector<DisplayImage>> grid(config.scenes.size());
    for (size_t s = 0; s < config.scenes.size(); ++s) {
        const SceneEntry& entry = config.scenes[s];
        const Scene base = load_scene_file(entry.file);
        const fs::path out_dir(config.out_dir);

        if (entry.reference_file) {
            references[s] = read_ppm(*entry.reference_file);
        } else {
            const LinearImage linear = render(base, *entry.reference_render);
            references[s] = encode_display(linear, entry.reference_render->exposure);
        }
        write_ppm((out_dir / (entry.id + "_reference.ppm")).string(), references[s]);

        grid[s].resize(config.variants.size());
        for (size_t v = 0; v < config.variants.size(); ++v) {
            const VariantEntry& variant = config.variants[v];
            Scene scene = base;
            if (variant.overrides_file) {
                const std::vector<MaterialOverride> overrides =
                    load_overrides_file(*variant.overrides_file);
                scene = apply_overrides(scene, overrides);
            }
            LightmapSet lightmaps;
            const LightmapSet* lightmaps_ptr = nullptr;
            if (variant.settings.mode == RenderMode::Baked) {
                lightmaps = bake_lightmaps(scene, *variant.bake);
                lightmaps_ptr = &lightmaps;
            }
            const LinearImage linear = render(scene, variant.settings, lightmaps_ptr);
            grid[s][v] = encode_display(linear, variant.settings.exposure);
            const std::string stem = entry.id + "_" + variant.id;
            write_ppm((out_dir / (stem + ".ppm")).string(), grid[s][v]);
            write_pfm((out_dir / (stem + ".pfm")).string(), linear);
        }
    }

    std::vector<double> raw;
    raw.reserve(config.metrics.size() * config.scenes.size() * config.variants.size());
    for (const std::string& metric : config.metrics) {
        for (size_t s = 0; s < config.scenes.size(); ++s) {
            for (size_t v = 0; v < config.variants.size(); ++v) {
                const DisplayImage& image = grid[s][v];
                if (metric == "psnr") {
                    raw.push_back(psnr(references[s], image));
                } else if (metric == "ssim") {
                    raw.push_back(ssim(references[s], image));
                } else {
                    raw.push_back(nr_score(nr_features(image), calibration));
                }
            }
        }
    }

    std::vector<std::string> scene_ids, variant_ids;
    for (const SceneEntry& scene : config.scenes) scene_ids.push_back(scene.id);
    for (const VariantEntry& variant : config.variants) variant_ids.push_back(variant.id);
    Report report = assemble_report(config.metrics, scene_ids, variant_ids, raw,
                                    config.normalize, tie_epsilon,
                                    serialize_experiment_config(config));

    const fs::path out_dir(config.out_dir);
    write_text_file((out_dir / "report.csv").string(), emit_csv(report));
    write_text_file((out_dir / "report.md").string(), emit_markdown(report));
    write_text_file((out_dir / "provenance.json").string(), emit_provenance(report));
    return report;
}

std::string emit_csv(const Report& report) {
    std::map<std::pair<std::string, std::string>, const Comparison*> verdicts;
    for (const Comparison& comparison : report.comparisons) {
        verdicts[{comparison.metric, comparison.scene + "\n" + comparison.variant}] = &comparison;
    }
    std::vector<const MetricScore*> cells;
    for (const MetricScore& cell : report.cells) cells.push_back(&cell);
    std::sort(cells.begin(), cells.end(), [](const MetricScore* a, const MetricScore* b) {
        return std::tie(a->metric, a->scene, a->variant) <
               std::tie(b->metric, b->scene, b->variant);
    });

    std::string out = "metric,scene,variant,raw,normalized,verdict\n";
    for (const MetricScore* cell : cells) {
        out += cell->metric + "," + cell->scene + "," + cell->variant + "," +
               format_score(cell->raw) + ",";
        if (cell->normalized) out += format_score(*cell->normalized);
        out += ",";
        const auto it = verdicts.find({cell->metric, cell->scene + "\n" + cell->variant});
        if (it != verdicts.end()) out += verdict_name(it->second->verdict);
        out += "\n";
    }
    return out;
}

std::string emit_markdown(const Report& report) {
    const size_t scene_count = report.scenes.size();
    const size_t variant_count = report.variants.size();
    const auto cell_text = [&](size_t m, size_t s, size_t v) {
        const MetricScore& cell = report.cells[cell_index(report, m, s, v)];
        return format_score(cell.normalized ? *cell.normalized : cell.raw);
    };

    std::string out = "# Rendering quality report\n\n## Scores\n\n";
    if (variant_count == 2) {
        // Two-variant grid keeps the classic original/improved column groups.
        out += "| Algorithm | Original Rendering |";
        for (size_t s = 1; s < scene_count; ++s) out += " |";
        out += " Improved Rendering |";
        for (size_t s = 1; s < scene_count; ++s) out += " |";
        out += "\n|";
        for (size_t i = 0; i < 1 + 2 * scene_count; ++i) out += " --- |";
        out += "\n| |";
        for (size_t group = 0; group < 2; ++group) {
            for (const std::string& scene : report.scenes) out += " " + scene + " |";
        }
        out += "\n";
        for (size_t m = 0; m < report.metrics.size(); ++m) {
            out += "| " + report.metrics[m] + " |";
            for (size_t v = 0; v < 2; ++v) {
                for (size_t s = 0; s < scene_count; ++s) out += " " + cell_text(m, s, v) + " |";
            }
            out += "\n";
        }
    } else {
        out += "| Metric | Scene | Variant | Score |\n| --- | --- | --- | --- |\n";
        for (size_t m = 0; m < report.metrics.size(); ++m) {
            for (size_t s = 0; s < scene_count; ++s) {
                for (size_t v = 0; v < variant_count; ++v) {
                    out += "| " + report.metrics[m] + " | " + report.scenes[s] + " | " +
                           report.variants[v] + " | " + cell_text(m, s, v) + " |\n";
                }
            }
        }
    }

    out += "\n## Verdicts vs baseline \"" + report.variants.front() + "\"\n\n";
    out += "| Metric | Scene | Variant | Delta | Verdict |\n| --- | --- | --- | --- | --- |\n";
    for (const Comparison& comparison : report.comparisons) {
        out += "| " + comparison.metric + " | " + comparison.scene + " | " + comparison.variant +
               " | " + format_score(comparison.delta) + " | " +
               verdict_name(comparison.verdict) + " |\n";
    }

    const VerdictGrid grid = rank_verdict(report, report.tie_epsilon);
    const int per_metric =
        static_cast<int>(scene_count) * static_cast<int>(variant_count - 1);
    out += "\n";
    for (size_t m = 0; m < report.metrics.size(); ++m) {
        out += "- " + report.metrics[m] + ": " + std::to_string(grid.improved_per_metric[m]) +
               "/" + std::to_string(per_metric) + " comparisons improved\n";
    }
    return out;
}

std::string emit_provenance(const Report& report) {
    Json doc;
    doc["tool"] = report.tool;
    doc["tie_epsilon"] = report.tie_epsilon;
    doc["metrics"] = report.metrics;
    doc["scenes"] = report.scenes;
    doc["variants"] = report.variants;
    doc["baseline"] = report.variants.empty() ? "" : report.variants.front();

    Json config = Json(nullptr);
    if (!report.config_echo.empty()) {
        try {
            config = Json::parse(report.config_echo);
        } catch (const Json::parse_error&) {
            config = report.config_echo;  // opaque echo, kept verbatim
        }
    }
    if (config.is_object()) {
        Json seeds = Json::object();
        if (config.contains("scenes")) {
            for (const Json& scene : config["scenes"]) {
                if (scene.contains("reference") && scene["reference"].contains("render")) {
                    seeds["scene:" + scene["id"].get<std::string>()] =
                        scene["reference"]["render"]["seed"];
                }
            }
        }
        if (config.contains("variants")) {
            for (const Json& variant : config["variants"]) {
                seeds["variant:" + variant["id"].get<std::string>()] =
                    variant["settings"]["seed"];
            }
        }
        doc["seeds"] = std::move(seeds);
    }
    doc["config"] = std::move(config);
    return doc.dump(2) + "\n";
}

}  // namespace renderproof
