#include "renderproof/image.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>

#include "renderproof/errors.hpp"
#include "renderproof/scene.hpp"

namespace renderproof {

namespace {

uint8_t quantize(double v) { return static_cast<uint8_t>(std::lround(v * 255.0)); }

void append_f32_le(std::string& out, float value) {
    const auto bits = std::bit_cast<uint32_t>(value);
    out.push_back(static_cast<char>(bits & 0xff));
    out.push_back(static_cast<char>((bits >> 8) & 0xff));
    out.push_back(static_cast<char>((bits >> 16) & 0xff));
    out.push_back(static_cast<char>((bits >> 24) & 0xff));
}

float read_f32_le(const std::string& data, size_t offset) {
    uint32_t bits = 0;
    for (int i = 3; i >= 0; --i) {
        bits = (bits << 8) | static_cast<uint8_t>(data[offset + static_cast<size_t>(i)]);
    }
    return std::bit_cast<float>(bits);
}

[[noreturn]] void fail_format(const std::string& path, const std::string& what) {
    throw IoError(path + ": " + what);
}

// Whitespace-delimited header token, honoring '#' comments through end of line.
std::string next_token(const std::string& data, size_t& pos, const std::string& path) {
    while (pos < data.size()) {
        const char c = data[pos];
        if (c == '#') {
            while (pos < data.size() && data[pos] != '\n') ++pos;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++pos;
        } else {
            break;
        }
    }
    const size_t start = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    if (start == pos) fail_format(path, "truncated header");
    return data.substr(start, pos - start);
}

int parse_dim(const std::string& token, const std::string& path) {
    size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(token, &used);
    } catch (const std::exception&) {
        fail_format(path, "bad dimension \"" + token + "\"");
    }
    if (used != token.size() || value <= 0) fail_format(path, "bad dimension \"" + token + "\"");
    return value;
}

}  // namespace

double srgb_encode(double v) {
    if (v <= 0.0031308) return 12.92 * v;
    return 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

DisplayImage encode_display(const LinearImage& image, double exposure) {
    DisplayImage out(image.width, image.height);
    for (size_t i = 0; i < image.pixels.size(); ++i) {
        const Vec3& p = image.pixels[i];
        const auto channel = [exposure](double linear) {
            double v = linear * exposure;
            v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
            return quantize(srgb_encode(v));
        };
        out.pixels[i] = {channel(p.x), channel(p.y), channel(p.z)};
    }
    return out;
}

LumaGrid luma(const DisplayImage& image) {
    LumaGrid grid(image.width, image.height);
    for (size_t i = 0; i < image.pixels.size(); ++i) {
        const auto& p = image.pixels[i];
        grid.values[i] = 0.2126 * p[0] + 0.7152 * p[1] + 0.0722 * p[2];
    }
    return grid;
}

std::string pfm_bytes(const LinearImage& image) {
    std::string out = "PF\n" + std::to_string(image.width) + " " +
                      std::to_string(image.height) + "\n-1.0\n";
    out.reserve(out.size() + image.pixels.size() * 12);
    for (int y = image.height - 1; y >= 0; --y) {
        for (int x = 0; x < image.width; ++x) {
            const Vec3& p = image.at(x, y);
            append_f32_le(out, static_cast<float>(p.x));
            append_f32_le(out, static_cast<float>(p.y));
            append_f32_le(out, static_cast<float>(p.z));
        }
    }
    return out;
}

std::string ppm_bytes(const DisplayImage& image) {
    std::string out = "P6\n" + std::to_string(image.width) + " " +
                      std::to_string(image.height) + "\n255\n";
    out.reserve(out.size() + image.pixels.size() * 3);
    for (const auto& p : image.pixels) {
        out.push_back(static_cast<char>(p[0]));
        out.push_back(static_cast<char>(p[1]));
        out.push_back(static_cast<char>(p[2]));
    }
    return out;
}

void write_pfm(const std::string& path, const LinearImage& image) {
    write_text_file(path, pfm_bytes(image));
}

void write_ppm(const std::string& path, const DisplayImage& image) {
    write_text_file(path, ppm_bytes(image));
}

LinearImage read_pfm(const std::string& path) {
    const std::string data = read_text_file(path);
    size_t pos = 0;
    if (next_token(data, pos, path) != "PF") fail_format(path, "not a PF file");
    const int width = parse_dim(next_token(data, pos, path), path);
    const int height = parse_dim(next_token(data, pos, path), path);
    const std::string scale = next_token(data, pos, path);
    if (scale.empty() || scale[0] != '-') fail_format(path, "big-endian scale not supported");
    ++pos;  // single whitespace byte after the scale line
    const size_t expected = static_cast<size_t>(width) * height * 12;
    if (data.size() - pos < expected) fail_format(path, "truncated pixel data");

    LinearImage image(width, height);
    for (int y = height - 1; y >= 0; --y) {
        for (int x = 0; x < width; ++x) {
            Vec3 p;
            p.x = read_f32_le(data, pos);
            p.y = read_f32_le(data, pos + 4);
            p.z = read_f32_le(data, pos + 8);
            pos += 12;
            if (!all_finite(p) || !all_non_negative(p)) {
                fail_format(path, "radiance sample out of range");
            }
            image.at(x, y) = p;
        }
    }
    return image;
}

DisplayImage read_ppm(const std::string& path) {
    const std::string data = read_text_file(path);
    size_t pos = 0;
    if (next_token(data, pos, path) != "P6") fail_format(path, "not a P6 file");
    const int width = parse_dim(next_token(data, pos, path), path);
    const int height = parse_dim(next_token(data, pos, path), path);
    if (next_token(data, pos, path) != "255") fail_format(path, "maxval must be 255");
    ++pos;  // single whitespace byte after the maxval
    const size_t expected = static_cast<size_t>(width) * height * 3;
    if (data.size() - pos < expected) fail_format(path, "truncated pixel data");

    DisplayImage image(width, height);
    for (size_t i = 0; i < image.pixels.size(); ++i) {
        image.pixels[i] = {static_cast<uint8_t>(data[pos]), static_cast<uint8_t>(data[pos + 1]),
                           static_cast<uint8_t>(data[pos + 2])};
        pos += 3;
    }
    return image;
}

}  // namespace renderproof
