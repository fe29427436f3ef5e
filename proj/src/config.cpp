#include "vitaslam/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace vitaslam {

namespace {

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("bad number for " + key + ": '" + value + "'");
    }
    if (used != value.size() || !std::isfinite(v)) {
        throw ConfigError("bad number for " + key + ": '" + value + "'");
    }
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v)) throw ConfigError("expected integer for " + key);
    return static_cast<int>(v);
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

constexpr double kDeg = M_PI / 180.0;

} // namespace

void Params::set(const std::string& key, const std::string& value) {
    auto d = [&] { return parse_double(key, value); };
    auto i = [&] { return parse_int(key, value); };

    if (key == "sim.seed") sim.seed = static_cast<std::uint64_t>(parse_double(key, value));
    else if (key == "sim.arena_w") sim.world.arena_w = d();
    else if (key == "sim.arena_h") sim.world.arena_h = d();
    else if (key == "sim.cylinder_x") sim.world.cylinder_center.x = d();
    else if (key == "sim.cylinder_y") sim.world.cylinder_center.y = d();
    else if (key == "sim.cylinder_radius") sim.world.cylinder_radius = d();
    else if (key == "sim.cylinder_shade") sim.world.cylinder_shade = d();
    else if (key == "sim.cube_x") sim.world.cube_center.x = d();
    else if (key == "sim.cube_y") sim.world.cube_center.y = d();
    else if (key == "sim.cube_half_side") sim.world.cube_half_side = d();
    else if (key == "sim.cube_shade") sim.world.cube_shade = d();
    else if (key == "sim.wall_shade_base") sim.world.wall_shade_base = d();
    else if (key == "sim.wall_shade_amp") sim.world.wall_shade_amp = d();
    else if (key == "sim.wall_texture_period") sim.world.wall_texture_period = d();
    else if (key == "sim.camera_width") sim.camera.width = i();
    else if (key == "sim.camera_height") sim.camera.height = i();
    else if (key == "sim.camera_fov_deg") sim.camera.fov = d() * kDeg;
    else if (key == "sim.camera_slice_distance") sim.camera.slice_distance = d();
    else if (key == "sim.camera_background_shade") sim.camera.background_shade = d();
    else if (key == "sim.camera_noise_sigma") sim.camera_noise_sigma = d();
    else if (key == "sim.whisker_fan_deg") sim.whiskers.fan_half_angle = d() * kDeg;
    else if (key == "sim.whisker_length") sim.whiskers.rest_length = d();
    else if (key == "sim.whisker_protraction_deg") sim.whiskers.protraction_amplitude = d() * kDeg;
    else if (key == "sim.whisker_increments") sim.whiskers.sweep_increments = i();
    else if (key == "sim.start_x") sim.start.x = d();
    else if (key == "sim.start_y") sim.start.y = d();
    else if (key == "sim.cylinder_orbit_radius") sim.cylinder_orbit_radius = d();
    else if (key == "sim.cylinder_orbit_offset_x") sim.cylinder_orbit_offset.x = d();
    else if (key == "sim.cylinder_orbit_offset_y") sim.cylinder_orbit_offset.y = d();
    else if (key == "sim.cube_orbit_radius") sim.cube_orbit_radius = d();
    else if (key == "sim.cylinder_revolutions") sim.cylinder_revolutions = d();
    else if (key == "sim.cube_revolutions") sim.cube_revolutions = d();
    else if (key == "sim.step_length") sim.step_length = d();
    else if (key == "sim.odom_sigma_forward") sim.odom_sigma_forward = d();
    else if (key == "sim.odom_sigma_theta_deg") sim.odom_sigma_theta = d() * kDeg;
    else if (key == "sim.body_radius") sim.body_radius = d();
    else if (key == "visual.profile_len") visual_profile_len = i();
    else if (key == "visual.max_shift") visual_max_shift = i();
    else if (key == "visual.threshold") visual_threshold = d();
    else if (key == "tactile.normal_k") tactile_normal_k = i();
    else if (key == "tactile.pfh_bins") tactile_pfh_bins = i();
    else if (key == "tactile.w_pfh") tactile_w_pfh = d();
    else if (key == "tactile.w_sda") tactile_w_sda = d();
    else if (key == "tactile.threshold") tactile_threshold = d();
    else if (key == "pc.nx") pc_nx = i();
    else if (key == "pc.ny") pc_ny = i();
    else if (key == "pc.nth") pc_nth = i();
    else if (key == "pc.extent_x") pc_extent_x = d();
    else if (key == "pc.extent_y") pc_extent_y = d();
    else if (key == "pc.inhibition") pc_inhibition = d();
    else if (key == "pc.inject_visual") pc_inject_visual = d();
    else if (key == "pc.inject_tactile") pc_inject_tactile = d();
    else if (key == "map.r_pc") map_r_pc = d();
    else if (key == "map.alpha") map_alpha = d();
    else if (key == "map.relax_iterations") map_relax_iterations = i();
    else if (key == "run.max_cycles") run_max_cycles = i();
    else throw ConfigError("unknown config key: '" + key + "'");
}

void load_config(std::istream& in, Params& params) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
        }
        try {
            params.set(key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

Params load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    Params params;
    try {
        load_config(in, params);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return params;
}

} // namespace vitaslam
