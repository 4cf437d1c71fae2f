#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "renderproof/vec.hpp"

namespace renderproof {

// Physical radiance buffer, row-major top-to-bottom, components >= 0 and finite.
struct LinearImage {
    int width = 0;
    int height = 0;
    std::vector<Vec3> pixels;

    LinearImage() = default;
    LinearImage(int w, int h) : width(w), height(h), pixels(static_cast<size_t>(w) * h) {}

    Vec3& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
    const Vec3& at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
};

// Tone-mapped 8-bit buffer, standard display transfer encoding.
struct DisplayImage {
    int width = 0;
    int height = 0;
    std::vector<std::array<uint8_t, 3>> pixels;

    DisplayImage() = default;
    DisplayImage(int w, int h) : width(w), height(h), pixels(static_cast<size_t>(w) * h) {}

    friend bool operator==(const DisplayImage&, const DisplayImage&) = default;
};

// Real-valued grayscale grid in [0, 255], not quantized.
struct LumaGrid {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    LumaGrid() = default;
    LumaGrid(int w, int h) : width(w), height(h), values(static_cast<size_t>(w) * h) {}

    double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
};

// Display transfer function on one channel already scaled by exposure and
// clamped to [0, 1].
double srgb_encode(double v);

// clamp(linear * exposure, 0, 1), transfer-encode, quantize to 0..255.
DisplayImage encode_display(const LinearImage& image, double exposure);

// Y = 0.2126 R + 0.7152 G + 0.0722 B on display-encoded values.
LumaGrid luma(const DisplayImage& image);

// PFM, "PF" header, little-endian float32 RGB, scanlines bottom-to-top.
void write_pfm(const std::string& path, const LinearImage& image);
LinearImage read_pfm(const std::string& path);

// Binary PPM, "P6" header, maxval 255, scanlines top-to-bottom.
void write_ppm(const std::string& path, const DisplayImage& image);
DisplayImage read_ppm(const std::string& path);

std::string ppm_bytes(const DisplayImage& image);
std::string pfm_bytes(const LinearImage& image);

}  // namespace renderproof
