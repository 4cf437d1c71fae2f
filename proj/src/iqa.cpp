#include "renderproof/iqa.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "renderproof/errors.hpp"
#include "renderproof/scene.hpp"

namespace renderproof {

namespace {

using Json = nlohmann::ordered_json;

void check_dimensions(const LumaGrid& reference, const LumaGrid& test) {
    if (reference.width != test.width || reference.height != test.height) {
        throw MetricError("dimension mismatch: " + std::to_string(reference.width) + "x" +
                          std::to_string(reference.height) + " vs " +
                          std::to_string(test.width) + "x" + std::to_string(test.height));
    }
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;  // population
};

Moments moments(std::span<const double> values) {
    Moments m;
    double lo = values.front(), hi = values.front();
    for (const double v : values) {
        m.mean += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    m.mean /= static_cast<double>(values.size());
    // Constant input has exactly zero spread; skip the accumulation so the
    // mean's rounding cannot manufacture a phantom variance.
    if (lo == hi) {
        m.mean = lo;
        return m;
    }
    for (const double v : values) {
        const double d = v - m.mean;
        m.variance += d * d;
    }
    m.variance /= static_cast<double>(values.size());
    return m;
}

}  // namespace

double mse(const LumaGrid& reference, const LumaGrid& test) {
    check_dimensions(reference, test);
    double sum = 0.0;
    for (size_t i = 0; i < reference.values.size(); ++i) {
        const double d = reference.values[i] - test.values[i];
        sum += d * d;
    }
    return sum / static_cast<double>(reference.values.size());
}

double psnr(const LumaGrid& reference, const LumaGrid& test) {
    const double m = mse(reference, test);
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / m);
}

double ssim(const LumaGrid& reference, const LumaGrid& test, const SsimParams& params) {
    check_dimensions(reference, test);
    const int w = params.window_size;
    if (w < 3 || w % 2 == 0) throw MetricError("ssim window_size must be odd and >= 3");
    if (!(params.gaussian_sigma > 0.0) || !(params.k1 > 0.0) || !(params.k2 > 0.0) ||
        !(params.dynamic_range > 0.0)) {
        throw MetricError("ssim parameters must be positive");
    }
    if (reference.width < w || reference.height < w) {
        throw MetricError("image smaller than the ssim window: " +
                          std::to_string(reference.width) + "x" +
                          std::to_string(reference.height) + " vs window " + std::to_string(w));
    }

    std::vector<double> kernel(static_cast<size_t>(w) * w);
    {
        const double half = (w - 1) / 2.0;
        const double inv_two_sigma2 = 1.0 / (2.0 * params.gaussian_sigma * params.gaussian_sigma);
        double total = 0.0;
        for (int ky = 0; ky < w; ++ky) {
            for (int kx = 0; kx < w; ++kx) {
                const double dx = kx - half;
                const double dy = ky - half;
                const double weight = std::exp(-(dx * dx + dy * dy) * inv_two_sigma2);
                kernel[static_cast<size_t>(ky) * w + kx] = weight;
                total += weight;
            }
        }
        for (double& weight : kernel) weight /= total;
    }

    const double c1 = params.k1 * params.dynamic_range * params.k1 * params.dynamic_range;
    const double c2 = params.k2 * params.dynamic_range * params.k2 * params.dynamic_range;

    double sum = 0.0;
    int windows = 0;
    for (int oy = 0; oy + w <= reference.height; ++oy) {
        for (int ox = 0; ox + w <= reference.width; ++ox) {
            double mu_x = 0.0, mu_y = 0.0, xx = 0.0, yy = 0.0, xy = 0.0;
            for (int ky = 0; ky < w; ++ky) {
                for (int kx = 0; kx < w; ++kx) {
                    const double weight = kernel[static_cast<size_t>(ky) * w + kx];
                    const double a = reference.at(ox + kx, oy + ky);
                    const double b = test.at(ox + kx, oy + ky);
                    mu_x += weight * a;
                    mu_y += weight * b;
                    xx += weight * a * a;
                    yy += weight * b * b;
                    xy += weight * a * b;
                }
            }
            const double var_x = xx - mu_x * mu_x;
            const double var_y = yy - mu_y * mu_y;
            const double cov = xy - mu_x * mu_y;
            sum += ((2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)) /
                   ((mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2));
            ++windows;
        }
    }
    return sum / windows;
}

double mse(const DisplayImage& reference, const DisplayImage& test) {
    return mse(luma(reference), luma(test));
}

double psnr(const DisplayImage& reference, const DisplayImage& test) {
    return psnr(luma(reference), luma(test));
}

double ssim(const DisplayImage& reference, const DisplayImage& test, const SsimParams& params) {
    return ssim(luma(reference), luma(test), params);
}

NrFeatures nr_features(const DisplayImage& image) {
    if (image.width < 3 || image.height < 3) {
        throw MetricError("image smaller than 3x3: " + std::to_string(image.width) + "x" +
                          std::to_string(image.height));
    }
    const LumaGrid grid = luma(image);

    // Laplacian response over interior pixels; zero-padded borders excluded.
    std::vector<double> response;
    response.reserve(static_cast<size_t>(grid.width - 2) * (grid.height - 2));
    for (int y = 1; y < grid.height - 1; ++y) {
        for (int x = 1; x < grid.width - 1; ++x) {
            response.push_back(4.0 * grid.at(x, y) - grid.at(x - 1, y) - grid.at(x + 1, y) -
                               grid.at(x, y - 1) - grid.at(x, y + 1));
        }
    }

    NrFeatures features;
    features.sharpness = moments(response).variance;
    features.contrast = std::sqrt(moments(grid.values).variance);

    std::vector<double> rg(image.pixels.size());
    std::vector<double> yb(image.pixels.size());
    for (size_t i = 0; i < image.pixels.size(); ++i) {
        const auto& p = image.pixels[i];
        rg[i] = static_cast<double>(p[0]) - p[1];
        yb[i] = 0.5 * (static_cast<double>(p[0]) + p[1]) - p[2];
    }
    const Moments m_rg = moments(rg);
    const Moments m_yb = moments(yb);
    features.colorfulness = std::hypot(std::sqrt(m_rg.variance), std::sqrt(m_yb.variance)) +
                            0.3 * std::hypot(m_rg.mean, m_yb.mean);
    return features;
}

NrCalibration calibrate(std::span<const NrFeatures> corpus) {
    if (corpus.empty()) throw MetricError("empty calibration corpus");
    std::vector<double> sharpness, contrast, colorfulness;
    for (const NrFeatures& f : corpus) {
        sharpness.push_back(f.sharpness);
        contrast.push_back(f.contrast);
        colorfulness.push_back(f.colorfulness);
    }
    NrCalibration calibration;
    const Moments ms = moments(sharpness);
    const Moments mc = moments(contrast);
    const Moments mf = moments(colorfulness);
    calibration.mean = {ms.mean, mc.mean, mf.mean};
    calibration.stddev = {std::sqrt(ms.variance), std::sqrt(mc.variance),
                          std::sqrt(mf.variance)};
    return calibration;
}

namespace {

NrFeatures parse_feature_triple(const Json& doc, const char* key, const std::string& field) {
    NrFeatures out;
    double* slots[3] = {&out.sharpness, &out.contrast, &out.colorfulness};
    const char* names[3] = {"sharpness", "contrast", "colorfulness"};
    for (int i = 0; i < 3; ++i) {
        const auto feature = doc.find(names[i]);
        if (feature == doc.end() || !feature->is_object()) {
            throw SchemaError("schema error: calibration: missing \"" + std::string(names[i]) +
                              "\"");
        }
        const auto value = feature->find(key);
        if (value == feature->end() || !value->is_number()) {
            throw SchemaError("schema error: calibration: " + std::string(names[i]) + "." +
                              field + " must be a number");
        }
        *slots[i] = value->get<double>();
    }
    return out;
}

}  // namespace

NrCalibration parse_nr_calibration(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SyntaxError(std::string("syntax error: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("schema error: calibration must be an object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (it.key() != "sharpness" && it.key() != "contrast" && it.key() != "colorfulness") {
            throw SchemaError("schema error: calibration: unknown key \"" + it.key() + "\"");
        }
        if (!it->is_object()) {
            throw SchemaError("schema error: calibration: " + it.key() +
                              " must be an object");
        }
        for (auto inner = it->begin(); inner != it->end(); ++inner) {
            if (inner.key() != "mean" && inner.key() != "stddev") {
                throw SchemaError("schema error: calibration: unknown key \"" + it.key() + "." +
                                  inner.key() + "\"");
            }
        }
    }
    NrCalibration calibration;
    calibration.mean = parse_feature_triple(doc, "mean", "mean");
    calibration.stddev = parse_feature_triple(doc, "stddev", "stddev");
    return calibration;
}

std::string serialize_nr_calibration(const NrCalibration& calibration) {
    Json doc;
    doc["sharpness"] = {{"mean", calibration.mean.sharpness},
                        {"stddev", calibration.stddev.sharpness}};
    doc["contrast"] = {{"mean", calibration.mean.contrast},
                       {"stddev", calibration.stddev.contrast}};
    doc["colorfulness"] = {{"mean", calibration.mean.colorfulness},
                           {"stddev", calibration.stddev.colorfulness}};
    return doc.dump(2) + "\n";
}

NrCalibration load_nr_calibration_file(const std::string& path) {
    try {
        return parse_nr_calibration(read_text_file(path));
    } catch (const SyntaxError& e) {
        throw SyntaxError(path + ": " + e.what());
    } catch (const SchemaError& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

double nr_score(const NrFeatures& features, const NrCalibration& calibration) {
    const double sigmas[3] = {calibration.stddev.sharpness, calibration.stddev.contrast,
                              calibration.stddev.colorfulness};
    for (const double sigma : sigmas) {
        if (!(sigma > 0.0)) throw MetricError("calibration stddev must be positive");
    }
    const double z_sharpness =
        (features.sharpness - calibration.mean.sharpness) / calibration.stddev.sharpness;
    const double z_contrast =
        (features.contrast - calibration.mean.contrast) / calibration.stddev.contrast;
    const double z_colorfulness = (features.colorfulness - calibration.mean.colorfulness) /
                                  calibration.stddev.colorfulness;
    return (z_sharpness + z_contrast + z_colorfulness) / 3.0;
}

std::vector<double> zscore_normalize(std::span<const double> values) {
    if (values.empty()) throw MetricError("empty value list");
    const Moments m = moments(values);
    const double sigma = std::sqrt(m.variance);
    std::vector<double> out(values.size(), 0.0);
    if (sigma == 0.0) return out;
    for (size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - m.mean) / sigma;
    return out;
}

std::string format_score(double value) {
    if (std::isinf(value)) return value > 0.0 ? "inf" : "-inf";
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.4f", value);
    std::string text = buffer;
    if (text == "-0.0000") text = "0.0000";
    return text;
}

std::string metric_score_json(const MetricScore& score) {
    const auto quoted = [](const std::string& s) { return Json(s).dump(); };
    std::string out = "{\"metric\":" + quoted(score.metric) + ",\"scene\":" +
                      quoted(score.scene) + ",\"variant\":" + quoted(score.variant) + ",\"raw\":";
    out += std::isinf(score.raw) ? quoted(format_score(score.raw)) : format_score(score.raw);
    out += ",\"normalized\":";
    if (score.normalized) {
        out += std::isinf(*score.normalized) ? quoted(format_score(*score.normalized))
                                             : format_score(*score.normalized);
    } else {
        out += "null";
    }
    out += "}";
    return out;
}

}  // namespace renderproof
