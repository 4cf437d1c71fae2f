#include "renderproof/scene.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>
#include <unordered_set>

#include <json.hpp>

#include "renderproof/errors.hpp"

namespace renderproof {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail_schema(const std::string& message) {
    throw SchemaError("schema error: " + message);
}

void require_object(const Json& node, const std::string& where) {
    if (!node.is_object()) fail_schema(where + " must be an object");
}

const Json& require_key(const Json& node, const char* key, const std::string& where) {
    const auto it = node.find(key);
    if (it == node.end()) fail_schema(where + ": missing \"" + std::string(key) + "\"");
    return *it;
}

void reject_unknown_keys(const Json& node, std::initializer_list<std::string_view> allowed,
                         const std::string& where) {
    for (auto it = node.begin(); it != node.end(); ++it) {
        bool known = false;
        for (const auto key : allowed) {
            if (key == it.key()) {
                known = true;
                break;
            }
        }
        if (!known) fail_schema(where + ": unknown key \"" + it.key() + "\"");
    }
}

std::string as_string(const Json& node, const std::string& where) {
    if (!node.is_string()) fail_schema(where + " must be a string");
    return node.get<std::string>();
}

double as_number(const Json& node, const std::string& where) {
    if (!node.is_number()) fail_schema(where + " must be a number");
    return node.get<double>();
}

double as_unit_interval(const Json& node, const std::string& where) {
    const double v = as_number(node, where);
    if (!(v >= 0.0 && v <= 1.0)) fail_schema(where + " out of [0,1]");
    return v;
}

Vec3 as_vec3(const Json& node, const std::string& where) {
    if (!node.is_array() || node.size() != 3) {
        fail_schema(where + " must be an array of 3 numbers");
    }
    return {as_number(node[0], where), as_number(node[1], where), as_number(node[2], where)};
}

Vec3 as_rgb_unit(const Json& node, const std::string& where) {
    const Vec3 v = as_vec3(node, where);
    if (!(v.x >= 0.0 && v.x <= 1.0 && v.y >= 0.0 && v.y <= 1.0 && v.z >= 0.0 && v.z <= 1.0)) {
        fail_schema(where + " out of [0,1]");
    }
    return v;
}

Vec3 as_rgb_non_negative(const Json& node, const std::string& where) {
    const Vec3 v = as_vec3(node, where);
    if (!all_non_negative(v)) fail_schema(where + " must be non-negative");
    return v;
}

Camera parse_camera(const Json& node) {
    require_object(node, "camera");
    reject_unknown_keys(node, {"position", "look_at", "up", "fov_degrees", "resolution"},
                        "camera");
    Camera camera;
    camera.position = as_vec3(require_key(node, "position", "camera"), "camera: position");
    camera.look_at = as_vec3(require_key(node, "look_at", "camera"), "camera: look_at");
    camera.up = as_vec3(require_key(node, "up", "camera"), "camera: up");
    camera.vertical_fov =
        as_number(require_key(node, "fov_degrees", "camera"), "camera: fov_degrees");
    if (!(camera.vertical_fov > 0.0 && camera.vertical_fov < 180.0)) {
        fail_schema("camera: fov_degrees out of (0,180)");
    }
    const Json& resolution = require_key(node, "resolution", "camera");
    if (!resolution.is_array() || resolution.size() != 2) {
        fail_schema("camera: resolution must be an array of 2 integers");
    }
    int dims[2];
    for (int i = 0; i < 2; ++i) {
        const double v = as_number(resolution[i], "camera: resolution");
        if (!(v >= 1.0 && std::floor(v) == v && v <= 1e8)) {
            fail_schema("camera: resolution must be positive integers");
        }
        dims[i] = static_cast<int>(v);
    }
    camera.width = dims[0];
    camera.height = dims[1];
    return camera;
}

Material parse_material(const Json& node, size_t index) {
    const std::string where = "materials[" + std::to_string(index) + "]";
    require_object(node, where);
    reject_unknown_keys(node, {"name", "albedo", "roughness", "specular", "emission"}, where);
    Material material;
    material.name = as_string(require_key(node, "name", where), where + ": name");
    if (material.name.empty()) fail_schema(where + ": name must be non-empty");
    material.albedo = as_rgb_unit(require_key(node, "albedo", where), where + ": albedo");
    material.roughness =
        as_unit_interval(require_key(node, "roughness", where), where + ": roughness");
    if (const auto it = node.find("specular"); it != node.end()) {
        material.specular = as_unit_interval(*it, where + ": specular");
    } else {
        material.specular = 0.0;
    }
    if (const auto it = node.find("emission"); it != node.end()) {
        material.emission = as_rgb_non_negative(*it, where + ": emission");
    } else {
        material.emission = Vec3{};
    }
    return material;
}

Primitive parse_primitive(const Json& node, size_t index) {
    const std::string where = "primitives[" + std::to_string(index) + "]";
    require_object(node, where);
    const std::string type = as_string(require_key(node, "type", where), where + ": type");
    Primitive primitive;
    if (type == "sphere") {
        reject_unknown_keys(node, {"type", "center", "radius", "material"}, where);
        Sphere sphere;
        sphere.center = as_vec3(require_key(node, "center", where), where + ": center");
        sphere.radius = as_number(require_key(node, "radius", where), where + ": radius");
        if (!(sphere.radius > 0.0)) fail_schema(where + ": radius must be positive");
        primitive.geometry = sphere;
    } else if (type == "quad") {
        reject_unknown_keys(node, {"type", "origin", "edge_u", "edge_v", "material"}, where);
        Quad quad;
        quad.origin = as_vec3(require_key(node, "origin", where), where + ": origin");
        quad.edge_u = as_vec3(require_key(node, "edge_u", where), where + ": edge_u");
        quad.edge_v = as_vec3(require_key(node, "edge_v", where), where + ": edge_v");
        if (length_squared(quad.edge_u) == 0.0) fail_schema(where + ": edge_u must be nonzero");
        if (length_squared(quad.edge_v) == 0.0) fail_schema(where + ": edge_v must be nonzero");
        primitive.geometry = quad;
    } else if (type == "triangle") {
        reject_unknown_keys(node, {"type", "p0", "p1", "p2", "material"}, where);
        Triangle triangle;
        triangle.p0 = as_vec3(require_key(node, "p0", where), where + ": p0");
        triangle.p1 = as_vec3(require_key(node, "p1", where), where + ": p1");
        triangle.p2 = as_vec3(require_key(node, "p2", where), where + ": p2");
        primitive.geometry = triangle;
    } else {
        fail_schema(where + ": unknown type \"" + type + "\"");
    }
    primitive.material = as_string(require_key(node, "material", where), where + ": material");
    return primitive;
}

Json parse_document(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SyntaxError(std::string("syntax error: ") + e.what());
    }
}

Json vec_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

}  // namespace

int Scene::material_index(const std::string& name) const {
    for (size_t i = 0; i < materials.size(); ++i) {
        if (materials[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

Scene parse_scene(const std::string& text) {
    const Json doc = parse_document(text);
    require_object(doc, "document");
    reject_unknown_keys(doc, {"name", "camera", "materials", "primitives", "environment"},
                        "document");

    Scene scene;
    scene.name = as_string(require_key(doc, "name", "document"), "name");
    scene.camera = parse_camera(require_key(doc, "camera", "document"));

    const Json& materials = require_key(doc, "materials", "document");
    if (!materials.is_array()) fail_schema("materials must be an array");
    std::unordered_set<std::string> seen_names;
    for (size_t i = 0; i < materials.size(); ++i) {
        Material material = parse_material(materials[i], i);
        if (!seen_names.insert(material.name).second) {
            fail_schema("materials[" + std::to_string(i) + "]: duplicate material name \"" +
                        material.name + "\"");
        }
        scene.materials.push_back(std::move(material));
    }

    const Json& primitives = require_key(doc, "primitives", "document");
    if (!primitives.is_array()) fail_schema("primitives must be an array");
    for (size_t i = 0; i < primitives.size(); ++i) {
        Primitive primitive = parse_primitive(primitives[i], i);
        if (scene.material_index(primitive.material) < 0) {
            fail_schema("primitives[" + std::to_string(i) + "]: unknown material \"" +
                        primitive.material + "\"");
        }
        scene.primitives.push_back(std::move(primitive));
    }

    if (const auto it = doc.find("environment"); it != doc.end()) {
        require_object(*it, "environment");
        reject_unknown_keys(*it, {"radiance"}, "environment");
        scene.environment_radiance = as_rgb_non_negative(require_key(*it, "radiance", "environment"),
                                                         "environment: radiance");
    }
    return scene;
}

std::string serialize_scene(const Scene& scene) {
    Json doc;
    doc["name"] = scene.name;
    Json camera;
    camera["position"] = vec_json(scene.camera.position);
    camera["look_at"] = vec_json(scene.camera.look_at);
    camera["up"] = vec_json(scene.camera.up);
    camera["fov_degrees"] = scene.camera.vertical_fov;
    camera["resolution"] = Json::array({scene.camera.width, scene.camera.height});
    doc["camera"] = std::move(camera);

    doc["materials"] = Json::array();
    for (const Material& material : scene.materials) {
        Json node;
        node["name"] = material.name;
        node["albedo"] = vec_json(material.albedo);
        node["roughness"] = material.roughness;
        node["specular"] = material.specular;
        node["emission"] = vec_json(material.emission);
        doc["materials"].push_back(std::move(node));
    }

    doc["primitives"] = Json::array();
    for (const Primitive& primitive : scene.primitives) {
        Json node;
        if (const Sphere* sphere = std::get_if<Sphere>(&primitive.geometry)) {
            node["type"] = "sphere";
            node["center"] = vec_json(sphere->center);
            node["radius"] = sphere->radius;
        } else if (const Quad* quad = std::get_if<Quad>(&primitive.geometry)) {
            node["type"] = "quad";
            node["origin"] = vec_json(quad->origin);
            node["edge_u"] = vec_json(quad->edge_u);
            node["edge_v"] = vec_json(quad->edge_v);
        } else {
            const Triangle& triangle = std::get<Triangle>(primitive.geometry);
            node["type"] = "triangle";
            node["p0"] = vec_json(triangle.p0);
            node["p1"] = vec_json(triangle.p1);
            node["p2"] = vec_json(triangle.p2);
        }
        node["material"] = primitive.material;
        doc["primitives"].push_back(std::move(node));
    }

    doc["environment"] = Json{{"radiance", vec_json(scene.environment_radiance)}};
    return doc.dump(2) + "\n";
}

std::vector<std::string> validate_scene(const Scene& scene) {
    std::vector<std::string> violations;
    const auto report = [&violations](std::string message) {
        violations.push_back(std::move(message));
    };

    const Camera& camera = scene.camera;
    if (!all_finite(camera.position) || !all_finite(camera.look_at) || !all_finite(camera.up) ||
        !std::isfinite(camera.vertical_fov)) {
        report("camera: non-finite value");
    } else {
        if (!(camera.vertical_fov > 0.0 && camera.vertical_fov < 180.0)) {
            report("camera: fov_degrees out of (0,180)");
        }
        if (camera.look_at == camera.position) {
            report("camera: look_at equals position");
        } else if (length_squared(camera.up) == 0.0) {
            report("camera: up must be nonzero");
        } else if (length_squared(cross(camera.up, camera.look_at - camera.position)) == 0.0) {
            report("camera: up is parallel to the view direction");
        }
    }
    if (camera.width <= 0 || camera.height <= 0) {
        report("camera: resolution must be positive");
    }

    std::unordered_set<std::string> seen_names;
    for (size_t i = 0; i < scene.materials.size(); ++i) {
        const Material& material = scene.materials[i];
        const std::string where = "materials[" + std::to_string(i) + "]";
        if (material.name.empty()) report(where + ": name must be non-empty");
        if (!seen_names.insert(material.name).second) {
            report(where + ": duplicate material name \"" + material.name + "\"");
        }
        if (!all_finite(material.albedo) || !std::isfinite(material.roughness) ||
            !std::isfinite(material.specular) || !all_finite(material.emission)) {
            report(where + ": non-finite value");
            continue;
        }
        const Vec3& albedo = material.albedo;
        if (!(albedo.x >= 0.0 && albedo.x <= 1.0 && albedo.y >= 0.0 && albedo.y <= 1.0 &&
              albedo.z >= 0.0 && albedo.z <= 1.0)) {
            report(where + ": albedo out of [0,1]");
        }
        if (!(material.roughness >= 0.0 && material.roughness <= 1.0)) {
            report(where + ": roughness out of [0,1]");
        }
        if (!(material.specular >= 0.0 && material.specular <= 1.0)) {
            report(where + ": specular out of [0,1]");
        }
        if (!all_non_negative(material.emission)) {
            report(where + ": emission must be non-negative");
        }
    }

    for (size_t i = 0; i < scene.primitives.size(); ++i) {
        const Primitive& primitive = scene.primitives[i];
        const std::string where = "primitives[" + std::to_string(i) + "]";
        if (scene.material_index(primitive.material) < 0) {
            report(where + ": unknown material \"" + primitive.material + "\"");
        }
        if (const Sphere* sphere = std::get_if<Sphere>(&primitive.geometry)) {
            if (!all_finite(sphere->center) || !std::isfinite(sphere->radius)) {
                report(where + ": non-finite coordinate");
            } else if (!(sphere->radius > 0.0)) {
                report(where + ": sphere radius must be positive");
            }
        } else if (const Quad* quad = std::get_if<Quad>(&primitive.geometry)) {
            if (!all_finite(quad->origin) || !all_finite(quad->edge_u) ||
                !all_finite(quad->edge_v)) {
                report(where + ": non-finite coordinate");
            } else if (length_squared(quad->edge_u) == 0.0 ||
                       length_squared(quad->edge_v) == 0.0) {
                report(where + ": quad edges must be nonzero");
            } else if (length_squared(cross(quad->edge_u, quad->edge_v)) == 0.0) {
                report(where + ": quad edges are parallel");
            }
        } else {
            const Triangle& triangle = std::get<Triangle>(primitive.geometry);
            if (!all_finite(triangle.p0) || !all_finite(triangle.p1) || !all_finite(triangle.p2)) {
                report(where + ": non-finite coordinate");
            } else if (length_squared(cross(triangle.p1 - triangle.p0,
                                            triangle.p2 - triangle.p0)) == 0.0) {
                report(where + ": triangle points are collinear");
            }
        }
    }

    if (!all_non_negative(scene.environment_radiance) ||
        !all_finite(scene.environment_radiance)) {
        report("environment: radiance must be non-negative");
    }

    bool has_emitter = any_positive(scene.environment_radiance);
    for (const Material& material : scene.materials) {
        has_emitter = has_emitter || any_positive(material.emission);
    }
    if (!has_emitter) report("no emitter");

    return violations;
}

Scene apply_overrides(const Scene& scene, std::span<const MaterialOverride> overrides) {
    Scene result = scene;
    for (const MaterialOverride& entry : overrides) {
        const int index = result.material_index(entry.target);
        if (index < 0) {
            throw ValidationError("override targets unknown material \"" + entry.target + "\"");
        }
        Material& material = result.materials[static_cast<size_t>(index)];
        if (entry.albedo) material.albedo = *entry.albedo;
        if (entry.roughness) material.roughness = *entry.roughness;
        if (entry.specular) material.specular = *entry.specular;
        if (entry.emission) material.emission = *entry.emission;
    }
    return result;
}

std::vector<MaterialOverride> parse_overrides(const std::string& text) {
    const Json doc = parse_document(text);
    if (!doc.is_array()) fail_schema("override document must be an array");
    std::vector<MaterialOverride> overrides;
    for (size_t i = 0; i < doc.size(); ++i) {
        const Json& node = doc[i];
        const std::string where = "overrides[" + std::to_string(i) + "]";
        require_object(node, where);
        reject_unknown_keys(node, {"target", "albedo", "roughness", "specular", "emission"},
                            where);
        MaterialOverride entry;
        entry.target = as_string(require_key(node, "target", where), where + ": target");
        if (const auto it = node.find("albedo"); it != node.end()) {
            entry.albedo = as_rgb_unit(*it, where + ": albedo");
        }
        if (const auto it = node.find("roughness"); it != node.end()) {
            entry.roughness = as_unit_interval(*it, where + ": roughness");
        }
        if (const auto it = node.find("specular"); it != node.end()) {
            entry.specular = as_unit_interval(*it, where + ": specular");
        }
        if (const auto it = node.find("emission"); it != node.end()) {
            entry.emission = as_rgb_non_negative(*it, where + ": emission");
        }
        if (!entry.albedo && !entry.roughness && !entry.specular && !entry.emission) {
            fail_schema(where + ": no fields to override");
        }
        overrides.push_back(std::move(entry));
    }
    return overrides;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("cannot read file: " + path);
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("cannot write file: " + path);
}

namespace {

template <typename Parse>
auto load_with_context(const std::string& path, Parse parse) {
    try {
        return parse(read_text_file(path));
    } catch (const SyntaxError& e) {
        throw SyntaxError(path + ": " + e.what());
    } catch (const SchemaError& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

}  // namespace

Scene load_scene_file(const std::string& path) {
    return load_with_context(path, [](const std::string& text) { return parse_scene(text); });
}

std::vector<MaterialOverride> load_overrides_file(const std::string& path) {
    return load_with_context(path, [](const std::string& text) { return parse_overrides(text); });
}

}  // namespace renderproof
