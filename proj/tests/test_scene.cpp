#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "helpers.hpp"
#include "renderproof/errors.hpp"
#include "renderproof/scene.hpp"

using namespace renderproof;

namespace {

const char* kMinimalScene = R"({
  "name": "one-light",
  "camera": {
    "position": [0, 1, 5],
    "look_at": [0, 0, 0],
    "up": [0, 1, 0],
    "fov_degrees": 60,
    "resolution": [64, 48]
  },
  "materials": [
    {"name": "floor", "albedo": [0.7, 0.7, 0.7], "roughness": 1.0},
    {
      "name": "lamp",
      "albedo": [0, 0, 0],
      "roughness": 1.0,
      "emission": [5, 5, 5]
    }
  ],
  "primitives": [
    {
      "type": "quad",
      "origin": [-1, 0, -1],
      "edge_u": [2, 0, 0],
      "edge_v": [0, 0, 2],
      "material": "floor"
    },
    {"type": "sphere", "center": [0, 2, 0], "radius": 0.5, "material": "lamp"}
  ]
})";

std::string replaced(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("scene parsing accepts the minimal document and fills defaults") {
    const Scene scene = parse_scene(kMinimalScene);
    CHECK(scene.name == "one-light");
    CHECK(scene.camera.width == 64);
    CHECK(scene.camera.height == 48);
    CHECK(scene.camera.vertical_fov == 60.0);
    REQUIRE(scene.materials.size() == 2);
    CHECK(scene.materials[0].specular == 0.0);
    CHECK(scene.materials[0].emission == Vec3{0, 0, 0});
    CHECK(scene.materials[1].emission == Vec3{5, 5, 5});
    REQUIRE(scene.primitives.size() == 2);
    CHECK(std::holds_alternative<Quad>(scene.primitives[0].geometry));
    CHECK(std::holds_alternative<Sphere>(scene.primitives[1].geometry));
    CHECK(scene.environment_radiance == Vec3{0, 0, 0});
    CHECK(scene.material_index("lamp") == 1);
    CHECK(scene.material_index("nope") == -1);
    CHECK(validate_scene(scene).empty());
}

TEST_CASE("scene serialization round-trips exactly") {
    const Scene scene = parse_scene(kMinimalScene);
    const std::string text = serialize_scene(scene);
    const Scene again = parse_scene(text);
    CHECK(again == scene);
    CHECK(serialize_scene(again) == text);

    Scene boxy = rp_test::make_furnace_box(0.2, 0.5, 32);
    boxy.environment_radiance = {0.1, 0.2, 0.3};
    CHECK(parse_scene(serialize_scene(boxy)) == boxy);
}

TEST_CASE("malformed text raises a syntax error with position info") {
    CHECK_THROWS_AS(parse_scene("{\"name\": }"), SyntaxError);
    try {
        parse_scene("{\n  \"name\": }");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(std::string(e.what()).find("syntax error") != std::string::npos);
    }
}

TEST_CASE("schema violations name the offending node") {
    SUBCASE("unresolved material reference") {
        const std::string text = replaced(kMinimalScene, "\"material\": \"floor\"",
                                          "\"material\": \"flor\"");
        try {
            parse_scene(text);
            FAIL("expected SchemaError");
        } catch (const SchemaError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("primitives[0]") != std::string::npos);
            CHECK(msg.find("unknown material \"flor\"") != std::string::npos);
        }
    }
    SUBCASE("roughness outside the unit interval") {
        const std::string text = replaced(kMinimalScene, "\"roughness\": 1.0},",
                                          "\"roughness\": 1.5},");
        try {
            parse_scene(text);
            FAIL("expected SchemaError");
        } catch (const SchemaError& e) {
            CHECK(std::string(e.what()).find("roughness out of [0,1]") != std::string::npos);
        }
    }
    SUBCASE("unknown keys are rejected at every level") {
        CHECK_THROWS_AS(parse_scene(replaced(kMinimalScene, "\"name\": \"one-light\",",
                                             "\"name\": \"one-light\", \"exta\": 1,")),
                        SchemaError);
        CHECK_THROWS_AS(parse_scene(replaced(kMinimalScene, "\"fov_degrees\": 60,",
                                             "\"fov_degrees\": 60, \"fov\": 60,")),
                        SchemaError);
        CHECK_THROWS_AS(parse_scene(replaced(kMinimalScene, "\"radius\": 0.5,",
                                             "\"radius\": 0.5, \"radios\": 1,")),
                        SchemaError);
    }
    SUBCASE("missing required keys") {
        CHECK_THROWS_AS(parse_scene(replaced(kMinimalScene, "\"up\": [0, 1, 0],", "")),
                        SchemaError);
        CHECK_THROWS_AS(
            parse_scene(replaced(kMinimalScene, ", \"roughness\": 1.0}", "}")),
            SchemaError);
    }
    SUBCASE("duplicate material names") {
        const std::string text =
            replaced(kMinimalScene, "\"name\": \"lamp\"", "\"name\": \"floor\"");
        try {
            parse_scene(text);
            FAIL("expected SchemaError");
        } catch (const SchemaError& e) {
            CHECK(std::string(e.what()).find("duplicate material name \"floor\"") !=
                  std::string::npos);
        }
    }
    SUBCASE("unknown primitive type") {
        CHECK_THROWS_AS(
            parse_scene(replaced(kMinimalScene, "\"type\": \"sphere\"", "\"type\": \"blob\"")),
            SchemaError);
    }
    SUBCASE("bad resolution") {
        CHECK_THROWS_AS(parse_scene(replaced(kMinimalScene, "\"resolution\": [64, 48]",
                                             "\"resolution\": [64]")),
                        SchemaError);
        CHECK_THROWS_AS(parse_scene(replaced(kMinimalScene, "\"resolution\": [64, 48]",
                                             "\"resolution\": [64, 0]")),
                        SchemaError);
        CHECK_THROWS_AS(parse_scene(replaced(kMinimalScene, "\"resolution\": [64, 48]",
                                             "\"resolution\": [64, 48.5]")),
                        SchemaError);
    }
}

TEST_CASE("validate_scene reports violations in document order") {
    Scene scene = parse_scene(kMinimalScene);

    SUBCASE("valid scene reports nothing") { CHECK(validate_scene(scene).empty()); }

    SUBCASE("camera faults come before material faults") {
        scene.camera.look_at = scene.camera.position;
        scene.materials[0].roughness = 2.0;
        const auto violations = validate_scene(scene);
        REQUIRE(violations.size() == 2);
        CHECK(violations[0] == "camera: look_at equals position");
        CHECK(violations[1] == "materials[0]: roughness out of [0,1]");
    }

    SUBCASE("primitive faults name their index") {
        std::get<Sphere>(scene.primitives[1].geometry).radius = -1.0;
        const auto violations = validate_scene(scene);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0] == "primitives[1]: sphere radius must be positive");
    }

    SUBCASE("degenerate quad and triangle geometry") {
        std::get<Quad>(scene.primitives[0].geometry).edge_v = {4, 0, 0};
        CHECK(validate_scene(scene) ==
              std::vector<std::string>{"primitives[0]: quad edges are parallel"});

        std::get<Quad>(scene.primitives[0].geometry).edge_v = {0, 0, 2};
        Primitive tri;
        tri.geometry = Triangle{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
        tri.material = "floor";
        scene.primitives.push_back(tri);
        CHECK(validate_scene(scene) ==
              std::vector<std::string>{"primitives[2]: triangle points are collinear"});
    }

    SUBCASE("a scene with no light source reports the emitter rule last") {
        scene.materials[1].emission = {0, 0, 0};
        scene.camera.up = {0, 0, 0};
        const auto violations = validate_scene(scene);
        REQUIRE(violations.size() == 2);
        CHECK(violations[0] == "camera: up must be nonzero");
        CHECK(violations.back() == "no emitter");
    }

    SUBCASE("a nonzero environment counts as a light source") {
        scene.materials[1].emission = {0, 0, 0};
        scene.environment_radiance = {0.5, 0.5, 0.5};
        CHECK(validate_scene(scene).empty());
    }

    SUBCASE("non-finite values are caught") {
        scene.materials[0].albedo.x = std::numeric_limits<double>::quiet_NaN();
        const auto violations = validate_scene(scene);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0] == "materials[0]: non-finite value");
    }
}

TEST_CASE("material overrides") {
    const Scene scene = parse_scene(kMinimalScene);

    SUBCASE("an empty override list is the identity") {
        CHECK(apply_overrides(scene, {}) == scene);
    }

    SUBCASE("fields replace only what they name") {
        MaterialOverride entry;
        entry.target = "floor";
        entry.albedo = Vec3{0.1, 0.2, 0.3};
        const Scene out = apply_overrides(scene, std::vector{entry});
        CHECK(out.materials[0].albedo == Vec3{0.1, 0.2, 0.3});
        CHECK(out.materials[0].roughness == scene.materials[0].roughness);
        CHECK(out.materials[1] == scene.materials[1]);
        CHECK(out.primitives == scene.primitives);
    }

    SUBCASE("later entries win") {
        MaterialOverride first, second;
        first.target = "floor";
        first.roughness = 0.25;
        first.specular = 0.5;
        second.target = "floor";
        second.roughness = 0.75;
        const Scene out = apply_overrides(scene, std::vector{first, second});
        CHECK(out.materials[0].roughness == 0.75);
        CHECK(out.materials[0].specular == 0.5);
    }

    SUBCASE("unknown targets are rejected") {
        MaterialOverride entry;
        entry.target = "chrome";
        entry.roughness = 0.0;
        CHECK_THROWS_AS(apply_overrides(scene, std::vector{entry}), ValidationError);
        try {
            apply_overrides(scene, std::vector{entry});
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("\"chrome\"") != std::string::npos);
        }
    }
}

TEST_CASE("override document parsing") {
    const auto overrides = parse_overrides(R"([
      {"target": "floor", "albedo": [0.2, 0.2, 0.2], "roughness": 0.1},
      {"target": "lamp", "emission": [9, 9, 9]}
    ])");
    REQUIRE(overrides.size() == 2);
    CHECK(overrides[0].target == "floor");
    CHECK(overrides[0].albedo == Vec3{0.2, 0.2, 0.2});
    CHECK(overrides[0].roughness == 0.1);
    CHECK(!overrides[0].specular.has_value());
    CHECK(overrides[1].emission == Vec3{9, 9, 9});

    CHECK_THROWS_AS(parse_overrides(R"({"target": "floor"})"), SchemaError);
    CHECK_THROWS_AS(parse_overrides(R"([{"target": "floor"}])"), SchemaError);
    CHECK_THROWS_AS(parse_overrides(R"([{"target": "floor", "albedo": [2, 0, 0]}])"),
                    SchemaError);
    CHECK_THROWS_AS(parse_overrides(R"([{"target": "floor", "shiny": 1}])"), SchemaError);
}

TEST_CASE("scene files load with the path prefixed to diagnostics") {
    const std::string dir = rp_test::fresh_temp_dir("scene");
    const std::string good = dir + "/good.json";
    write_text_file(good, kMinimalScene);
    CHECK(load_scene_file(good).name == "one-light");

    const std::string bad = dir + "/bad.json";
    write_text_file(bad, "{\"name\": 3}");
    try {
        load_scene_file(bad);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find(bad) == 0);
    }

    CHECK_THROWS_AS(load_scene_file(dir + "/missing.json"), IoError);
    CHECK_THROWS_AS(read_text_file(dir + "/missing.json"), IoError);
}
