#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "renderproof/vec.hpp"

namespace renderproof {

struct Camera {
    Vec3 position;
    Vec3 look_at;
    Vec3 up;
    double vertical_fov = 60.0;  // degrees, strictly inside (0, 180)
    int width = 0;
    int height = 0;

    friend bool operator==(const Camera&, const Camera&) = default;
};

struct Material {
    std::string name;
    Vec3 albedo;             // each component in [0, 1]
    double roughness = 1.0;  // [0, 1]
    double specular = 0.0;   // [0, 1], blend weight of the glossy lobe
    Vec3 emission;           // linear radiance, each component >= 0

    friend bool operator==(const Material&, const Material&) = default;
};

struct Sphere {
    Vec3 center;
    double radius = 0.0;
    friend bool operator==(const Sphere&, const Sphere&) = default;
};

struct Quad {
    Vec3 origin;
    Vec3 edge_u;
    Vec3 edge_v;
    friend bool operator==(const Quad&, const Quad&) = default;
};

struct Triangle {
    Vec3 p0, p1, p2;
    friend bool operator==(const Triangle&, const Triangle&) = default;
};

struct Primitive {
    std::variant<Sphere, Quad, Triangle> geometry;
    std::string material;
    std::optional<uint32_t> lightmap_id;  // assigned when a scene is paired with a lightmap set

    friend bool operator==(const Primitive&, const Primitive&) = default;
};

struct Scene {
    std::string name;
    Camera camera;
    std::vector<Material> materials;    // names unique
    std::vector<Primitive> primitives;  // material names resolve into `materials`
    Vec3 environment_radiance;

    friend bool operator==(const Scene&, const Scene&) = default;

    // Index into `materials`, or -1 if the name does not resolve.
    int material_index(const std::string& name) const;
};

struct MaterialOverride {
    std::string target;
    std::optional<Vec3> albedo;
    std::optional<double> roughness;
    std::optional<double> specular;
    std::optional<Vec3> emission;

    friend bool operator==(const MaterialOverride&, const MaterialOverride&) = default;
};

// Parses a scene document. Throws SyntaxError for malformed text (message
// carries line/column) and SchemaError for schema violations; unknown keys are
// rejected at every level.
Scene parse_scene(const std::string& text);

// Canonical text form; parse_scene(serialize_scene(s)) reproduces s exactly.
std::string serialize_scene(const Scene& scene);

// One entry per violated invariant, in document order (camera, then materials,
// then primitives, then the scene-level emitter rule). Empty means valid.
std::vector<std::string> validate_scene(const Scene& scene);

// Returns a copy with overridden fields replaced, in list order (later wins).
// Throws ValidationError if a target does not resolve.
Scene apply_overrides(const Scene& scene, std::span<const MaterialOverride> overrides);

std::vector<MaterialOverride> parse_overrides(const std::string& text);

Scene load_scene_file(const std::string& path);
std::vector<MaterialOverride> load_overrides_file(const std::string& path);

// Whole file as bytes; throws IoError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace renderproof
