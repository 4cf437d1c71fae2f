#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "renderproof/image.hpp"

namespace renderproof {

struct SsimParams {
    int window_size = 11;         // odd, >= 3
    double gaussian_sigma = 1.5;  // > 0
    double k1 = 0.01;             // > 0
    double k2 = 0.03;             // > 0
    double dynamic_range = 255.0;
};

// Full-reference metrics over luma grids. Both grids must share dimensions;
// SSIM additionally needs both dimensions >= window_size. Violations raise
// MetricError. The DisplayImage overloads score the luma of their inputs.
double mse(const LumaGrid& reference, const LumaGrid& test);
double psnr(const LumaGrid& reference, const LumaGrid& test);
double ssim(const LumaGrid& reference, const LumaGrid& test, const SsimParams& params = {});
double mse(const DisplayImage& reference, const DisplayImage& test);
double psnr(const DisplayImage& reference, const DisplayImage& test);
double ssim(const DisplayImage& reference, const DisplayImage& test,
            const SsimParams& params = {});

// No-reference features, computed on display-encoded pixels. Requires at
// least a 3x3 image.
struct NrFeatures {
    double sharpness = 0.0;     // variance of the 3x3 Laplacian response
    double contrast = 0.0;      // RMS deviation of luma
    double colorfulness = 0.0;  // opponent-axis spread plus mean bias
};

NrFeatures nr_features(const DisplayImage& image);

// Per-feature mean and population standard deviation over a calibration
// corpus. Serialized as JSON so a corpus scored once can be reused.
struct NrCalibration {
    NrFeatures mean;
    NrFeatures stddev;
};

NrCalibration calibrate(std::span<const NrFeatures> corpus);
NrCalibration parse_nr_calibration(const std::string& text);
std::string serialize_nr_calibration(const NrCalibration& calibration);
NrCalibration load_nr_calibration_file(const std::string& path);

// Mean of the three feature z-scores against the calibration statistics.
// Raises MetricError if any calibration stddev is non-positive.
double nr_score(const NrFeatures& features, const NrCalibration& calibration);

// Population z-normalization of a metric row. A zero-spread row maps to all
// zeros. Preserves the ranking order of the inputs.
std::vector<double> zscore_normalize(std::span<const double> values);

// One scored cell of a metric x scene x variant grid. The metric id is kept
// as a string so report emitters can carry labels beyond the built-in three.
struct MetricScore {
    std::string metric;
    std::string scene;
    std::string variant;
    double raw = 0.0;
    std::optional<double> normalized;

    friend bool operator==(const MetricScore&, const MetricScore&) = default;
};

// Single-line JSON object {"metric","scene","variant","raw","normalized"}.
// Numbers carry exactly 4 fractional digits; +infinity serializes as "inf";
// an absent normalized value serializes as null.
std::string metric_score_json(const MetricScore& score);

// 4-fractional-digit rendering shared by every report surface. Infinity
// renders as "inf".
std::string format_score(double value);

}  // namespace renderproof
