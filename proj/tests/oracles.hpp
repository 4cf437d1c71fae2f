#pragma once

// Independent brute-force evaluations of the metric definitions. Written
// straight from the formulas, sharing no code with the library, so the two
// implementations check each other.

#include <cmath>
#include <limits>
#include <vector>

#include "renderproof/image.hpp"

namespace rp_test {

inline double brute_mse(const renderproof::LumaGrid& a, const renderproof::LumaGrid& b) {
    double sum = 0.0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x) {
            const double d = a.at(x, y) - b.at(x, y);
            sum += d * d;
        }
    return sum / (static_cast<double>(a.width) * a.height);
}

inline double brute_psnr(const renderproof::LumaGrid& a, const renderproof::LumaGrid& b) {
    const double m = brute_mse(a, b);
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / m);
}

// Mean SSIM over every fully-interior window, Gaussian-weighted local
// statistics, stabilizers C1 = (k1 D)^2 and C2 = (k2 D)^2.
inline double brute_ssim(const renderproof::LumaGrid& a, const renderproof::LumaGrid& b,
                         int window = 11, double sigma = 1.5, double k1 = 0.01,
                         double k2 = 0.03, double range = 255.0) {
    const int half = window / 2;
    std::vector<double> weight(static_cast<size_t>(window) * window);
    double wsum = 0.0;
    for (int dy = -half; dy <= half; ++dy)
        for (int dx = -half; dx <= half; ++dx) {
            const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            weight[static_cast<size_t>(dy + half) * window + (dx + half)] = w;
            wsum += w;
        }
    for (double& w : weight) w /= wsum;

    const double c1 = (k1 * range) * (k1 * range);
    const double c2 = (k2 * range) * (k2 * range);
    double total = 0.0;
    int count = 0;
    for (int cy = half; cy < a.height - half; ++cy)
        for (int cx = half; cx < a.width - half; ++cx) {
            double mu_a = 0.0, mu_b = 0.0, aa = 0.0, bb = 0.0, ab = 0.0;
            for (int dy = -half; dy <= half; ++dy)
                for (int dx = -half; dx <= half; ++dx) {
                    const double w =
                        weight[static_cast<size_t>(dy + half) * window + (dx + half)];
                    const double va = a.at(cx + dx, cy + dy);
                    const double vb = b.at(cx + dx, cy + dy);
                    mu_a += w * va;
                    mu_b += w * vb;
                    aa += w * va * va;
                    bb += w * vb * vb;
                    ab += w * va * vb;
                }
            const double var_a = aa - mu_a * mu_a;
            const double var_b = bb - mu_b * mu_b;
            const double cov = ab - mu_a * mu_b;
            total += ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
                     ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
            ++count;
        }
    return total / count;
}

struct BruteNrFeatures {
    double sharpness = 0.0;
    double contrast = 0.0;
    double colorfulness = 0.0;
};

inline BruteNrFeatures brute_nr_features(const renderproof::DisplayImage& image) {
    const int w = image.width, h = image.height;
    auto luma_at = [&](int x, int y) {
        const auto& p = image.pixels[static_cast<size_t>(y) * w + x];
        return 0.2126 * p[0] + 0.7152 * p[1] + 0.0722 * p[2];
    };

    // Laplacian (center 4, edge-neighbors -1) over interior pixels only.
    std::vector<double> lap;
    for (int y = 1; y < h - 1; ++y)
        for (int x = 1; x < w - 1; ++x)
            lap.push_back(4.0 * luma_at(x, y) - luma_at(x - 1, y) - luma_at(x + 1, y) -
                          luma_at(x, y - 1) - luma_at(x, y + 1));
    double lap_mean = 0.0;
    for (double v : lap) lap_mean += v;
    lap_mean /= static_cast<double>(lap.size());
    double lap_var = 0.0;
    for (double v : lap) lap_var += (v - lap_mean) * (v - lap_mean);
    lap_var /= static_cast<double>(lap.size());

    double luma_mean = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) luma_mean += luma_at(x, y);
    luma_mean /= static_cast<double>(w) * h;
    double luma_var = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double d = luma_at(x, y) - luma_mean;
            luma_var += d * d;
        }
    luma_var /= static_cast<double>(w) * h;

    double rg_mean = 0.0, yb_mean = 0.0;
    for (const auto& p : image.pixels) {
        rg_mean += static_cast<double>(p[0]) - p[1];
        yb_mean += (static_cast<double>(p[0]) + p[1]) / 2.0 - p[2];
    }
    const double n = static_cast<double>(w) * h;
    rg_mean /= n;
    yb_mean /= n;
    double rg_var = 0.0, yb_var = 0.0;
    for (const auto& p : image.pixels) {
        const double rg = static_cast<double>(p[0]) - p[1];
        const double yb = (static_cast<double>(p[0]) + p[1]) / 2.0 - p[2];
        rg_var += (rg - rg_mean) * (rg - rg_mean);
        yb_var += (yb - yb_mean) * (yb - yb_mean);
    }
    rg_var /= n;
    yb_var /= n;

    BruteNrFeatures out;
    out.sharpness = lap_var;
    out.contrast = std::sqrt(luma_var);
    out.colorfulness = std::hypot(std::sqrt(rg_var), std::sqrt(yb_var)) +
                       0.3 * std::hypot(rg_mean, yb_mean);
    return out;
}

}  // namespace rp_test
