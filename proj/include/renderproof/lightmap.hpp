#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "renderproof/vec.hpp"

namespace renderproof {

struct BakeSettings {
    double texel_size = 0.25;     // world units per lightmap texel
    int samples_per_texel = 256;  // >= 1
    int max_bounces = 8;          // >= 0
    uint64_t seed = 0;

    friend bool operator==(const BakeSettings&, const BakeSettings&) = default;
};

// Per-primitive grid of incident irradiance. Texels whose center falls outside
// the primitive (triangle bounding parallelogram) are flagged unused.
struct LightmapEntry {
    uint32_t primitive_index = 0;
    uint32_t width = 0;
    uint32_t height = 0;
    std::vector<uint8_t> used;  // 1 per texel
    std::vector<Vec3> texels;   // irradiance, row-major

    // Derived at bake/load time, not serialized: for every texel, the linear
    // index of the nearest used texel (itself when used).
    std::vector<uint32_t> nearest_used;
};

struct LightmapSet {
    std::vector<LightmapEntry> entries;  // primitive indices distinct
    BakeSettings settings;               // provenance echo; zeroed after file load
};

// Fills nearest_used for each entry. Called by the baker and the file reader.
void finalize_lightmaps(LightmapSet& set);

// "LMP1" container: entry count then per entry index, dims, used flags, and
// float32 RGB texels, all little-endian.
void write_lightmaps(const std::string& path, const LightmapSet& set);
LightmapSet read_lightmaps(const std::string& path);

}  // namespace renderproof
