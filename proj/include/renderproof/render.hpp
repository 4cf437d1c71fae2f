#pragma once

#include <cstdint>
#include <optional>

#include "renderproof/image.hpp"
#include "renderproof/lightmap.hpp"
#include "renderproof/scene.hpp"

namespace renderproof {

enum class RenderMode {
    Direct,  // emitters and one shadow-connected bounce only
    Gi,      // path traced up to max_bounces indirect events
    Baked,   // lightmap-supplied diffuse irradiance plus one glossy hop
};

struct RenderSettings {
    RenderMode mode = RenderMode::Gi;
    int samples_per_pixel = 16;  // >= 1
    int max_bounces = 4;         // >= 0; clamped to 1 in Direct mode
    uint64_t seed = 0;
    double exposure = 1.0;  // > 0, applied before display encoding

    friend bool operator==(const RenderSettings&, const RenderSettings&) = default;
};

RenderMode parse_render_mode(const std::string& name);
std::string render_mode_name(RenderMode mode);

// Deterministic for a given (scene, settings) pair regardless of the worker
// count: every sample draws from a counter-based stream keyed by pixel,
// sample index, bounce, and dimension. Baked mode requires `lightmaps` with
// an entry for every non-emissive primitive.
LinearImage render(const Scene& scene, const RenderSettings& settings,
                   const LightmapSet* lightmaps = nullptr);

// Bakes irradiance grids for every quad and triangle in the scene.
// Spheres are not baked; a baked-mode render of a scene with a non-emissive
// sphere is rejected at validation time.
LightmapSet bake_lightmaps(const Scene& scene, const BakeSettings& settings);

// Honors RENDERPROOF_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
int worker_count();

}  // namespace renderproof
