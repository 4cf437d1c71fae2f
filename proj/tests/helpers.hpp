#pragma once

// Shared fixtures for the test suite: a closed uniform box scene with an
// analytic equilibrium, plus small image statistics helpers.

#include <filesystem>
#include <random>
#include <string>

#include "renderproof/image.hpp"
#include "renderproof/scene.hpp"

namespace rp_test {

// Closed cube of side 4 centered at the origin, camera inside looking at the
// -z wall. Every wall shares one material: diffuse albedo rho, emission e per
// channel. Equilibrium radiance is e / (1 - rho) on every wall.
inline renderproof::Scene make_furnace_box(double e, double rho, int res,
                                           double specular = 0.0,
                                           double roughness = 1.0) {
    using namespace renderproof;
    Scene scene;
    scene.name = "furnace-box";
    scene.camera.position = {0.0, 0.0, 0.0};
    scene.camera.look_at = {0.0, 0.0, -1.0};
    scene.camera.up = {0.0, 1.0, 0.0};
    scene.camera.vertical_fov = 90.0;
    scene.camera.width = res;
    scene.camera.height = res;

    Material shell;
    shell.name = "shell";
    shell.albedo = {rho, rho, rho};
    shell.roughness = roughness;
    shell.specular = specular;
    shell.emission = {e, e, e};
    scene.materials.push_back(shell);

    // Edge windings chosen so cross(edge_u, edge_v) points into the box.
    auto wall = [&](Vec3 origin, Vec3 eu, Vec3 ev) {
        Primitive prim;
        prim.geometry = Quad{origin, eu, ev};
        prim.material = "shell";
        scene.primitives.push_back(prim);
    };
    wall({-2, -2, -2}, {4, 0, 0}, {0, 4, 0});  // z = -2, normal +z
    wall({-2, -2, 2}, {0, 4, 0}, {4, 0, 0});   // z = +2, normal -z
    wall({-2, -2, -2}, {0, 4, 0}, {0, 0, 4});  // x = -2, normal +x
    wall({2, -2, -2}, {0, 0, 4}, {0, 4, 0});   // x = +2, normal -x
    wall({-2, -2, -2}, {0, 0, 4}, {4, 0, 0});  // y = -2, normal +y
    wall({-2, 2, -2}, {4, 0, 0}, {0, 0, 4});   // y = +2, normal -y
    return scene;
}

inline double mean_radiance(const renderproof::LinearImage& image) {
    double acc = 0.0;
    for (const auto& p : image.pixels) acc += (p.x + p.y + p.z) / 3.0;
    return image.pixels.empty() ? 0.0 : acc / static_cast<double>(image.pixels.size());
}

inline double mean_luma(const renderproof::LumaGrid& grid) {
    double acc = 0.0;
    for (double v : grid.values) acc += v;
    return grid.values.empty() ? 0.0 : acc / static_cast<double>(grid.values.size());
}

// Fresh directory under the system temp root; callers may leave files behind,
// the OS owns cleanup.
inline std::string fresh_temp_dir(const std::string& tag) {
    static std::mt19937_64 gen{std::random_device{}()};
    auto dir = std::filesystem::temp_directory_path() /
               ("renderproof_" + tag + "_" + std::to_string(gen()));
    std::filesystem::create_directories(dir);
    return dir.string();
}

inline renderproof::LumaGrid random_grid(int w, int h, uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(0.0, 255.0);
    renderproof::LumaGrid grid(w, h);
    for (double& v : grid.values) v = dist(gen);
    return grid;
}

inline renderproof::DisplayImage random_display(int w, int h, uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> dist(0, 255);
    renderproof::DisplayImage image(w, h);
    for (auto& p : image.pixels)
        p = {static_cast<uint8_t>(dist(gen)), static_cast<uint8_t>(dist(gen)),
             static_cast<uint8_t>(dist(gen))};
    return image;
}

}  // namespace rp_test
