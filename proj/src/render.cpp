#include "renderproof/render.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>

#include "renderproof/errors.hpp"
#include "renderproof/rng.hpp"

namespace renderproof {

namespace {

constexpr double kTMin = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();
// Keeps bake sample streams disjoint from pixel sample streams under one seed.
constexpr uint64_t kBakeTag = 0x626c6d70u;

struct Ray {
    Vec3 origin;
    Vec3 dir;  // unit
};

struct PrimData {
    enum class Kind { Sphere, Quad, Triangle } kind = Kind::Sphere;
    Vec3 a;  // sphere center | quad origin | triangle p0
    Vec3 b;  // quad edge_u | triangle p1 - p0
    Vec3 c;  // quad edge_v | triangle p2 - p0
    double radius = 0.0;
    Vec3 unit_normal;  // quad/triangle geometric normal
    Vec3 raw_normal;   // cross(b, c), unnormalized
    double inv_raw_len2 = 0.0;
    int material = -1;
    double area = 0.0;
};

struct Hit {
    double t = kInf;
    int prim = -1;
    Vec3 point;
    Vec3 normal;  // geometric, unflipped
    double u = 0.0;
    double v = 0.0;
};

struct CompiledScene {
    const Scene* scene = nullptr;
    std::vector<PrimData> prims;
    std::vector<int> emitters;        // prim indices with positive emission
    std::vector<double> emitter_cdf;  // cumulative emitter area
    double emitter_area = 0.0;
    Vec3 env;
    bool has_env = false;
};

CompiledScene compile(const Scene& scene) {
    CompiledScene cs;
    cs.scene = &scene;
    cs.env = scene.environment_radiance;
    cs.has_env = any_positive(cs.env);
    for (size_t i = 0; i < scene.primitives.size(); ++i) {
        const Primitive& primitive = scene.primitives[i];
        PrimData d;
        d.material = scene.material_index(primitive.material);
        if (const Sphere* sphere = std::get_if<Sphere>(&primitive.geometry)) {
            d.kind = PrimData::Kind::Sphere;
            d.a = sphere->center;
            d.radius = sphere->radius;
            d.area = 4.0 * kPi * sphere->radius * sphere->radius;
        } else if (const Quad* quad = std::get_if<Quad>(&primitive.geometry)) {
            d.kind = PrimData::Kind::Quad;
            d.a = quad->origin;
            d.b = quad->edge_u;
            d.c = quad->edge_v;
            d.raw_normal = cross(d.b, d.c);
            const double len2 = length_squared(d.raw_normal);
            d.area = std::sqrt(len2);
            d.unit_normal = d.raw_normal / d.area;
            d.inv_raw_len2 = 1.0 / len2;
        } else {
            const Triangle& tri = std::get<Triangle>(primitive.geometry);
            d.kind = PrimData::Kind::Triangle;
            d.a = tri.p0;
            d.b = tri.p1 - tri.p0;
            d.c = tri.p2 - tri.p0;
            d.raw_normal = cross(d.b, d.c);
            const double len = length(d.raw_normal);
            d.area = 0.5 * len;
            d.unit_normal = d.raw_normal / len;
            d.inv_raw_len2 = 1.0 / (len * len);
        }
        cs.prims.push_back(d);
        if (any_positive(scene.materials[static_cast<size_t>(d.material)].emission)) {
            cs.emitters.push_back(static_cast<int>(i));
            cs.emitter_area += cs.prims.back().area;
            cs.emitter_cdf.push_back(cs.emitter_area);
        }
    }
    return cs;
}

bool hit_prim(const PrimData& p, const Ray& ray, double tmin, double tmax, Hit& hit) {
    switch (p.kind) {
        case PrimData::Kind::Sphere: {
            const Vec3 oc = ray.origin - p.a;
            const double half_b = dot(oc, ray.dir);
            const double c = length_squared(oc) - p.radius * p.radius;
            const double disc = half_b * half_b - c;
            if (disc < 0.0) return false;
            const double sq = std::sqrt(disc);
            double t = -half_b - sq;
            if (t <= tmin) t = -half_b + sq;
            if (t <= tmin || t >= tmax) return false;
            hit.t = t;
            hit.point = ray.origin + ray.dir * t;
            hit.normal = (hit.point - p.a) / p.radius;
            hit.u = hit.v = 0.0;
            return true;
        }
        case PrimData::Kind::Quad: {
            const double denom = dot(ray.dir, p.raw_normal);
            if (std::abs(denom) < 1e-14) return false;
            const double t = dot(p.a - ray.origin, p.raw_normal) / denom;
            if (t <= tmin || t >= tmax) return false;
            const Vec3 d = ray.origin + ray.dir * t - p.a;
            const double u = dot(cross(d, p.c), p.raw_normal) * p.inv_raw_len2;
            if (u < 0.0 || u > 1.0) return false;
            const double v = dot(cross(p.b, d), p.raw_normal) * p.inv_raw_len2;
            if (v < 0.0 || v > 1.0) return false;
            hit.t = t;
            hit.point = ray.origin + ray.dir * t;
            hit.normal = p.unit_normal;
            hit.u = u;
            hit.v = v;
            return true;
        }
        case PrimData::Kind::Triangle: {
            const Vec3 pvec = cross(ray.dir, p.c);
            const double det = dot(p.b, pvec);
            if (std::abs(det) < 1e-18) return false;
            const double inv = 1.0 / det;
            const Vec3 tvec = ray.origin - p.a;
            const double u = dot(tvec, pvec) * inv;
            if (u < 0.0 || u > 1.0) return false;
            const Vec3 qvec = cross(tvec, p.b);
            const double v = dot(ray.dir, qvec) * inv;
            if (v < 0.0 || u + v > 1.0) return false;
            const double t = dot(p.c, qvec) * inv;
            if (t <= tmin || t >= tmax) return false;
            hit.t = t;
            hit.point = ray.origin + ray.dir * t;
            hit.normal = p.unit_normal;
            hit.u = u;
            hit.v = v;
            return true;
        }
    }
    return false;
}

bool intersect_scene(const CompiledScene& cs, const Ray& ray, double tmin, double tmax,
                     Hit& closest) {
    closest.t = tmax;
    closest.prim = -1;
    Hit probe;
    for (size_t i = 0; i < cs.prims.size(); ++i) {
        if (hit_prim(cs.prims[i], ray, tmin, closest.t, probe)) {
            closest = probe;
            closest.prim = static_cast<int>(i);
        }
    }
    return closest.prim >= 0;
}

bool occluded(const CompiledScene& cs, const Ray& ray, double tmin, double tmax) {
    Hit probe;
    for (const PrimData& p : cs.prims) {
        if (hit_prim(p, ray, tmin, tmax, probe)) return true;
    }
    return false;
}

Vec3 cosine_dir(const Vec3& n, double u1, double u2) {
    const double r = std::sqrt(u1);
    const double phi = 2.0 * kPi * u2;
    const double z = std::sqrt(std::max(0.0, 1.0 - u1));
    Vec3 t, b;
    basis_from_unit(n, t, b);
    return t * (r * std::cos(phi)) + b * (r * std::sin(phi)) + n * z;
}

// Uniform over the spherical cap of the given half-angle around the axis.
Vec3 cone_dir(const Vec3& axis, double half_angle, double u1, double u2) {
    const double cos_t = 1.0 - u1 * (1.0 - std::cos(half_angle));
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
    const double phi = 2.0 * kPi * u2;
    Vec3 t, b;
    basis_from_unit(axis, t, b);
    return t * (sin_t * std::cos(phi)) + b * (sin_t * std::sin(phi)) + axis * cos_t;
}

struct LightSample {
    Vec3 point;
    Vec3 normal;
    Vec3 emission;
};

LightSample sample_emitter(const CompiledScene& cs, double u_pick, double u1, double u2) {
    const double target = u_pick * cs.emitter_area;
    size_t index = 0;
    while (index + 1 < cs.emitter_cdf.size() && cs.emitter_cdf[index] <= target) ++index;
    const PrimData& p = cs.prims[static_cast<size_t>(cs.emitters[index])];

    LightSample sample;
    sample.emission = cs.scene->materials[static_cast<size_t>(p.material)].emission;
    switch (p.kind) {
        case PrimData::Kind::Quad:
            sample.point = p.a + p.b * u1 + p.c * u2;
            sample.normal = p.unit_normal;
            break;
        case PrimData::Kind::Triangle: {
            const double su = std::sqrt(u1);
            sample.point = p.a + p.b * (su * (1.0 - u2)) + p.c * (su * u2);
            sample.normal = p.unit_normal;
            break;
        }
        case PrimData::Kind::Sphere: {
            const double z = 1.0 - 2.0 * u1;
            const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = 2.0 * kPi * u2;
            const Vec3 dir{s * std::cos(phi), s * std::sin(phi), z};
            sample.point = p.a + dir * p.radius;
            sample.normal = dir;
            break;
        }
    }
    return sample;
}

// Area-sampled next-event estimate of the Lambertian response at one vertex.
// Emitters are two-sided. The cosine-weighted environment sample adds
// albedo * env when the sky is visible (the pi factors cancel).
Vec3 direct_light(const CompiledScene& cs, const Vec3& point, const Vec3& ns, const Vec3& albedo,
                  PathRng& rng) {
    Vec3 light{};
    if (!cs.emitters.empty()) {
        const double u_pick = rng.next();
        const double u1 = rng.next();
        const double u2 = rng.next();
        const LightSample ls = sample_emitter(cs, u_pick, u1, u2);
        const Vec3 to = ls.point - point;
        const double d2 = std::max(length_squared(to), 1e-12);
        const double dist = std::sqrt(d2);
        const Vec3 wi = to / dist;
        const double cos_s = dot(ns, wi);
        const double cos_l = std::abs(dot(ls.normal, wi));
        if (cos_s > 0.0 && cos_l > 0.0 &&
            !occluded(cs, Ray{point, wi}, kTMin, dist - 1e-6)) {
            light += albedo * ls.emission * (cos_s * cos_l / d2 * cs.emitter_area / kPi);
        }
    }
    if (cs.has_env) {
        const Vec3 dir = cosine_dir(ns, rng.next(), rng.next());
        if (!occluded(cs, Ray{point, dir}, kTMin, kInf)) light += albedo * cs.env;
    }
    return light;
}

// Unidirectional path trace with next-event estimation, fixed bounce cutoff,
// no Russian roulette. Emission and environment are picked up only on camera
// or glossy segments; diffuse segments get their light through the gather, so
// nothing is double-counted. Used both for pixel samples and for bake samples
// (a bake sample wants incident radiance, which includes first-hit emission).
Vec3 trace(const CompiledScene& cs, Ray ray, PathRng& rng, int max_bounces) {
    Vec3 radiance{};
    Vec3 beta{1.0, 1.0, 1.0};
    bool specular_chain = true;
    int bounces = 0;
    for (;;) {
        Hit hit;
        if (!intersect_scene(cs, ray, kTMin, kInf, hit)) {
            if (specular_chain) radiance += beta * cs.env;
            break;
        }
        const PrimData& pd = cs.prims[static_cast<size_t>(hit.prim)];
        const Material& mat = cs.scene->materials[static_cast<size_t>(pd.material)];
        if (specular_chain) radiance += beta * mat.emission;
        if (bounces >= max_bounces) break;

        const Vec3 ns = dot(hit.normal, ray.dir) < 0.0 ? hit.normal : -hit.normal;
        rng.begin_bounce(static_cast<uint32_t>(bounces) + 1);
        if (mat.specular < 1.0) {
            radiance += beta * (1.0 - mat.specular) *
                        direct_light(cs, hit.point, ns, mat.albedo, rng);
        }

        bool glossy;
        if (mat.specular <= 0.0) {
            glossy = false;
        } else if (mat.specular >= 1.0) {
            glossy = true;
        } else {
            glossy = rng.next() < mat.specular;
        }

        if (glossy) {
            const Vec3 mirror = reflect(ray.dir, ns);
            Vec3 dir = mirror;
            if (mat.roughness > 0.0) {
                dir = cone_dir(mirror, mat.roughness * (kPi / 2.0), rng.next(), rng.next());
            }
            if (dot(dir, ns) <= 0.0) break;  // perturbed under the horizon
            ray = Ray{hit.point, dir};
            specular_chain = true;
        } else {
            // The next vertex would neither gather nor emit into a diffuse
            // chain once the cap is reached, so the segment is dead weight.
            if (bounces + 1 >= max_bounces) break;
            const Vec3 dir = cosine_dir(ns, rng.next(), rng.next());
            ray = Ray{hit.point, dir};
            beta *= mat.albedo;
            specular_chain = false;
        }
        ++bounces;
    }
    return radiance;
}

struct LightmapView {
    const LightmapSet* set = nullptr;
    std::vector<int> entry_of_prim;  // -1 where no entry exists
};

Vec3 lightmap_irradiance(const LightmapView& view, const Hit& hit) {
    const int e = view.entry_of_prim[static_cast<size_t>(hit.prim)];
    if (e < 0) return {};
    const LightmapEntry& entry = view.set->entries[static_cast<size_t>(e)];
    const int w = static_cast<int>(entry.width);
    const int h = static_cast<int>(entry.height);
    const int tx = std::clamp(static_cast<int>(hit.u * w), 0, w - 1);
    const int ty = std::clamp(static_cast<int>(hit.v * h), 0, h - 1);
    size_t index = static_cast<size_t>(ty) * entry.width + static_cast<size_t>(tx);
    if (!entry.used[index]) index = entry.nearest_used[index];
    return entry.texels[index];
}

// Baked-mode shading: diffuse response reads precomputed irradiance; the
// glossy lobe still traces one dynamic reflection segment whose hit is shaded
// the same way (emission plus lightmap diffuse, deeper gloss truncated).
Vec3 shade_baked(const CompiledScene& cs, const LightmapView& view, const Ray& ray,
                 PathRng& rng) {
    Hit hit;
    if (!intersect_scene(cs, ray, kTMin, kInf, hit)) return cs.env;
    const PrimData& pd = cs.prims[static_cast<size_t>(hit.prim)];
    const Material& mat = cs.scene->materials[static_cast<size_t>(pd.material)];
    Vec3 radiance = mat.emission;
    if (mat.specular < 1.0) {
        radiance += (1.0 - mat.specular) / kPi * mat.albedo * lightmap_irradiance(view, hit);
    }
    if (mat.specular > 0.0) {
        const Vec3 ns = dot(hit.normal, ray.dir) < 0.0 ? hit.normal : -hit.normal;
        rng.begin_bounce(1);
        const Vec3 mirror = reflect(ray.dir, ns);
        Vec3 dir = mirror;
        if (mat.roughness > 0.0) {
            dir = cone_dir(mirror, mat.roughness * (kPi / 2.0), rng.next(), rng.next());
        }
        if (dot(dir, ns) > 0.0) {
            Hit hit2;
            if (!intersect_scene(cs, Ray{hit.point, dir}, kTMin, kInf, hit2)) {
                radiance += mat.specular * cs.env;
            } else {
                const PrimData& pd2 = cs.prims[static_cast<size_t>(hit2.prim)];
                const Material& mat2 = cs.scene->materials[static_cast<size_t>(pd2.material)];
                Vec3 seen = mat2.emission;
                if (mat2.specular < 1.0) {
                    seen += (1.0 - mat2.specular) / kPi * mat2.albedo *
                            lightmap_irradiance(view, hit2);
                }
                radiance += mat.specular * seen;
            }
        }
    }
    return radiance;
}

void check_settings(const RenderSettings& settings) {
    if (settings.samples_per_pixel < 1) {
        throw ValidationError("samples_per_pixel must be positive");
    }
    if (settings.max_bounces < 0) throw ValidationError("max_bounces must be non-negative");
    if (!(settings.exposure > 0.0) || !std::isfinite(settings.exposure)) {
        throw ValidationError("exposure must be positive");
    }
}

void check_scene(const Scene& scene, bool allow_dark) {
    std::vector<std::string> violations = validate_scene(scene);
    if (allow_dark) {
        std::erase(violations, "no emitter");
    }
    if (!violations.empty()) {
        std::string message = "invalid scene: " + violations.front();
        for (size_t i = 1; i < violations.size(); ++i) message += "; " + violations[i];
        throw ValidationError(message);
    }
}

LightmapView build_lightmap_view(const CompiledScene& cs, const LightmapSet& set) {
    LightmapView view;
    view.set = &set;
    view.entry_of_prim.assign(cs.prims.size(), -1);
    for (size_t e = 0; e < set.entries.size(); ++e) {
        const LightmapEntry& entry = set.entries[e];
        if (entry.primitive_index >= cs.prims.size()) {
            throw ValidationError("lightmap entry targets out-of-range primitive " +
                                  std::to_string(entry.primitive_index));
        }
        if (view.entry_of_prim[entry.primitive_index] >= 0) {
            throw ValidationError("duplicate lightmap entry for primitive " +
                                  std::to_string(entry.primitive_index));
        }
        const size_t count = static_cast<size_t>(entry.width) * entry.height;
        if (entry.width == 0 || entry.height == 0 || entry.used.size() != count ||
            entry.texels.size() != count || entry.nearest_used.size() != count) {
            throw ValidationError("lightmap entry for primitive " +
                                  std::to_string(entry.primitive_index) +
                                  " has an inconsistent grid");
        }
        if (cs.prims[entry.primitive_index].kind == PrimData::Kind::Sphere) {
            throw ValidationError("lightmap entry for primitive " +
                                  std::to_string(entry.primitive_index) +
                                  " targets a sphere");
        }
        view.entry_of_prim[entry.primitive_index] = static_cast<int>(e);
    }
    for (size_t i = 0; i < cs.prims.size(); ++i) {
        const PrimData& p = cs.prims[i];
        const Material& mat = cs.scene->materials[static_cast<size_t>(p.material)];
        if (any_positive(mat.emission) || view.entry_of_prim[i] >= 0) continue;
        if (p.kind == PrimData::Kind::Sphere) {
            throw ValidationError("baked mode cannot shade sphere primitive " +
                                  std::to_string(i) + " (spheres are not baked)");
        }
        throw ValidationError("no lightmap entry for primitive " + std::to_string(i));
    }
    return view;
}

void run_rows(int row_count, int workers, const std::function<void(int)>& body) {
    if (workers <= 1 || row_count <= 1) {
        for (int y = 0; y < row_count; ++y) body(y);
        return;
    }
    std::atomic<int> next{0};
    const auto work = [&]() {
        for (;;) {
            const int y = next.fetch_add(1);
            if (y >= row_count) return;
            body(y);
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min(workers, row_count);
    pool.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
}

}  // namespace

RenderMode parse_render_mode(const std::string& name) {
    if (name == "direct") return RenderMode::Direct;
    if (name == "gi") return RenderMode::Gi;
    if (name == "baked") return RenderMode::Baked;
    throw SchemaError("schema error: unknown render mode \"" + name + "\"");
}

std::string render_mode_name(RenderMode mode) {
    switch (mode) {
        case RenderMode::Direct: return "direct";
        case RenderMode::Gi: return "gi";
        case RenderMode::Baked: return "baked";
    }
    return "gi";
}

int worker_count() {
    if (const char* env = std::getenv("RENDERPROOF_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<int>(std::min(v, 256L));
        }
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

LinearImage render(const Scene& scene, const RenderSettings& settings,
                   const LightmapSet* lightmaps) {
    check_settings(settings);
    check_scene(scene, /*allow_dark=*/false);
    const CompiledScene cs = compile(scene);

    LightmapSet finalized;
    LightmapView view;
    if (settings.mode == RenderMode::Baked) {
        if (lightmaps == nullptr) throw ValidationError("baked mode requires lightmaps");
        const LightmapSet* usable = lightmaps;
        for (const LightmapEntry& entry : lightmaps->entries) {
            if (entry.nearest_used.size() != entry.used.size()) {
                finalized = *lightmaps;
                finalize_lightmaps(finalized);
                usable = &finalized;
                break;
            }
        }
        view = build_lightmap_view(cs, *usable);
    }

    const Camera& camera = scene.camera;
    const int width = camera.width;
    const int height = camera.height;
    const Vec3 forward = normalized(camera.look_at - camera.position);
    const Vec3 right = normalized(cross(forward, camera.up));
    const Vec3 up = cross(right, forward);
    const double tan_half = std::tan(camera.vertical_fov * kPi / 360.0);
    const double aspect = static_cast<double>(width) / height;

    const int cap = settings.mode == RenderMode::Direct ? std::min(settings.max_bounces, 1)
                                                        : settings.max_bounces;
    const int spp = settings.samples_per_pixel;
    const bool baked = settings.mode == RenderMode::Baked;

    LinearImage image(width, height);
    run_rows(height, worker_count(), [&](int y) {
        for (int x = 0; x < width; ++x) {
            const uint64_t element = static_cast<uint64_t>(y) * width + x;
            Vec3 acc{};
            for (int s = 0; s < spp; ++s) {
                PathRng rng(settings.seed, element, static_cast<uint32_t>(s));
                rng.begin_bounce(0);
                const double jx = rng.next();
                const double jy = rng.next();
                const double px = ((x + jx) / width * 2.0 - 1.0) * tan_half * aspect;
                const double py = (1.0 - (y + jy) / height * 2.0) * tan_half;
                const Ray ray{camera.position, normalized(forward + right * px + up * py)};
                acc += baked ? shade_baked(cs, view, ray, rng) : trace(cs, ray, rng, cap);
            }
            image.at(x, y) = acc / spp;
        }
    });
    return image;
}

LightmapSet bake_lightmaps(const Scene& scene, const BakeSettings& settings) {
    if (!(settings.texel_size > 0.0) || !std::isfinite(settings.texel_size)) {
        throw ValidationError("texel_size must be positive");
    }
    if (settings.samples_per_texel < 1) {
        throw ValidationError("samples_per_texel must be positive");
    }
    if (settings.max_bounces < 0) throw ValidationError("max_bounces must be non-negative");
    // A scene with no emitters bakes to all-zero irradiance, which is still
    // meaningful, so only the geometric violations block a bake.
    check_scene(scene, /*allow_dark=*/true);
    const CompiledScene cs = compile(scene);

    LightmapSet set;
    set.settings = settings;
    for (size_t i = 0; i < cs.prims.size(); ++i) {
        const PrimData& p = cs.prims[i];
        if (p.kind == PrimData::Kind::Sphere) continue;
        LightmapEntry entry;
        entry.primitive_index = static_cast<uint32_t>(i);
        entry.width = static_cast<uint32_t>(std::ceil(length(p.b) / settings.texel_size));
        entry.height = static_cast<uint32_t>(std::ceil(length(p.c) / settings.texel_size));
        entry.width = std::max(entry.width, 1u);
        entry.height = std::max(entry.height, 1u);
        const size_t count = static_cast<size_t>(entry.width) * entry.height;
        entry.used.assign(count, 1);
        entry.texels.assign(count, Vec3{});
        if (p.kind == PrimData::Kind::Triangle) {
            for (uint32_t ty = 0; ty < entry.height; ++ty) {
                for (uint32_t tx = 0; tx < entry.width; ++tx) {
                    const double uc = (tx + 0.5) / entry.width;
                    const double vc = (ty + 0.5) / entry.height;
                    if (uc + vc > 1.0) entry.used[ty * entry.width + tx] = 0;
                }
            }
        }
        set.entries.push_back(std::move(entry));
    }
    if (set.entries.empty()) throw ValidationError("no bakeable primitive");

    struct Job {
        size_t entry;
        uint32_t row;
    };
    std::vector<Job> jobs;
    for (size_t e = 0; e < set.entries.size(); ++e) {
        for (uint32_t row = 0; row < set.entries[e].height; ++row) jobs.push_back({e, row});
    }

    run_rows(static_cast<int>(jobs.size()), worker_count(), [&](int job_index) {
        const Job job = jobs[static_cast<size_t>(job_index)];
        LightmapEntry& entry = set.entries[job.entry];
        const PrimData& p = cs.prims[entry.primitive_index];
        for (uint32_t tx = 0; tx < entry.width; ++tx) {
            const size_t index = static_cast<size_t>(job.row) * entry.width + tx;
            if (!entry.used[index]) continue;
            const double uc = (tx + 0.5) / entry.width;
            const double vc = (job.row + 0.5) / entry.height;
            const Vec3 point = p.a + p.b * uc + p.c * vc;
            const uint64_t element =
                hash_combine(hash_combine(kBakeTag, entry.primitive_index), index);
            Vec3 acc{};
            for (int s = 0; s < settings.samples_per_texel; ++s) {
                PathRng rng(settings.seed, element, static_cast<uint32_t>(s));
                rng.begin_bounce(0);
                const Vec3 dir = cosine_dir(p.unit_normal, rng.next(), rng.next());
                acc += trace(cs, Ray{point, dir}, rng, settings.max_bounces);
            }
            // Cosine-weighted estimator of irradiance: E = pi * mean radiance.
            entry.texels[index] = acc * (kPi / settings.samples_per_texel);
        }
    });

    finalize_lightmaps(set);
    return set;
}

}  // namespace renderproof
