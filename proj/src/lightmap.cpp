#include "renderproof/lightmap.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "renderproof/errors.hpp"
#include "renderproof/scene.hpp"

namespace renderproof {

namespace {

constexpr char kMagic[4] = {'L', 'M', 'P', '1'};

void append_u32_le(std::string& out, uint32_t value) {
    out.push_back(static_cast<char>(value & 0xff));
    out.push_back(static_cast<char>((value >> 8) & 0xff));
    out.push_back(static_cast<char>((value >> 16) & 0xff));
    out.push_back(static_cast<char>((value >> 24) & 0xff));
}

void append_f32_le(std::string& out, float value) {
    append_u32_le(out, std::bit_cast<uint32_t>(value));
}

class Cursor {
public:
    Cursor(const std::string& data, const std::string& path) : data_(data), path_(path) {}

    uint32_t u32() {
        need(4);
        uint32_t value = 0;
        for (int i = 3; i >= 0; --i) {
            value = (value << 8) | static_cast<uint8_t>(data_[pos_ + static_cast<size_t>(i)]);
        }
        pos_ += 4;
        return value;
    }

    float f32() { return std::bit_cast<float>(u32()); }

    uint8_t byte() {
        need(1);
        return static_cast<uint8_t>(data_[pos_++]);
    }

    void expect_magic() {
        need(4);
        if (std::memcmp(data_.data(), kMagic, 4) != 0) {
            throw IoError(path_ + ": not a lightmap file");
        }
        pos_ = 4;
    }

    bool exhausted() const { return pos_ == data_.size(); }

private:
    void need(size_t n) {
        if (data_.size() - pos_ < n) throw IoError(path_ + ": truncated lightmap data");
    }

    const std::string& data_;
    const std::string& path_;
    size_t pos_ = 0;
};

}  // namespace

void finalize_lightmaps(LightmapSet& set) {
    for (LightmapEntry& entry : set.entries) {
        const size_t count = static_cast<size_t>(entry.width) * entry.height;
        entry.nearest_used.assign(count, 0);
        std::vector<uint32_t> used_indices;
        for (uint32_t i = 0; i < count; ++i) {
            if (entry.used[i]) used_indices.push_back(i);
        }
        for (uint32_t i = 0; i < count; ++i) {
            if (entry.used[i] || used_indices.empty()) {
                entry.nearest_used[i] = i;
                continue;
            }
            const double x = i % entry.width;
            const double y = i / entry.width;
            double best = std::numeric_limits<double>::infinity();
            uint32_t best_index = i;
            for (const uint32_t candidate : used_indices) {
                const double dx = x - candidate % entry.width;
                const double dy = y - candidate / entry.width;
                const double d2 = dx * dx + dy * dy;
                if (d2 < best) {
                    best = d2;
                    best_index = candidate;
                }
            }
            entry.nearest_used[i] = best_index;
        }
    }
}

void write_lightmaps(const std::string& path, const LightmapSet& set) {
    std::string out(kMagic, 4);
    append_u32_le(out, static_cast<uint32_t>(set.entries.size()));
    for (const LightmapEntry& entry : set.entries) {
        append_u32_le(out, entry.primitive_index);
        append_u32_le(out, entry.width);
        append_u32_le(out, entry.height);
        for (const uint8_t flag : entry.used) out.push_back(static_cast<char>(flag));
        for (const Vec3& texel : entry.texels) {
            append_f32_le(out, static_cast<float>(texel.x));
            append_f32_le(out, static_cast<float>(texel.y));
            append_f32_le(out, static_cast<float>(texel.z));
        }
    }
    write_text_file(path, out);
}

LightmapSet read_lightmaps(const std::string& path) {
    const std::string data = read_text_file(path);
    Cursor cursor(data, path);
    cursor.expect_magic();

    LightmapSet set;
    const uint32_t entry_count = cursor.u32();
    for (uint32_t e = 0; e < entry_count; ++e) {
        LightmapEntry entry;
        entry.primitive_index = cursor.u32();
        entry.width = cursor.u32();
        entry.height = cursor.u32();
        if (entry.width == 0 || entry.height == 0 || entry.width > 1u << 16 ||
            entry.height > 1u << 16) {
            throw IoError(path + ": bad lightmap grid size");
        }
        const size_t count = static_cast<size_t>(entry.width) * entry.height;
        entry.used.resize(count);
        for (size_t i = 0; i < count; ++i) entry.used[i] = cursor.byte() ? 1 : 0;
        entry.texels.resize(count);
        for (size_t i = 0; i < count; ++i) {
            Vec3 texel{cursor.f32(), cursor.f32(), cursor.f32()};
            if (!all_finite(texel) || !all_non_negative(texel)) {
                throw IoError(path + ": irradiance sample out of range");
            }
            entry.texels[i] = texel;
        }
        for (const LightmapEntry& other : set.entries) {
            if (other.primitive_index == entry.primitive_index) {
                throw IoError(path + ": duplicate primitive index " +
                              std::to_string(entry.primitive_index));
            }
        }
        set.entries.push_back(std::move(entry));
    }
    if (!cursor.exhausted()) throw IoError(path + ": trailing bytes");
    finalize_lightmaps(set);
    return set;
}

}  // namespace renderproof
