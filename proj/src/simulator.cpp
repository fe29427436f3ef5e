#include "vitaslam/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vitaslam {

namespace {

constexpr double kRayEps = 1e-9;

Point2 unit_vec(double angle) { return {std::cos(angle), std::sin(angle)}; }

double sq(double v) { return v * v; }

/// Tangent point on circle (c, r) for a line from external point p, chosen so
/// that driving p -> tangent point continues into a counterclockwise orbit
/// (heading stays continuous at the junction).
Point2 ccw_entry_tangent(const Point2& p, const Point2& c, double r) {
    const double dx = p.x - c.x;
    const double dy = p.y - c.y;
    const double dist = std::hypot(dx, dy);
    if (dist <= r) {
        throw std::invalid_argument("trajectory: start point inside the orbit circle");
    }
    const double alpha = std::atan2(dy, dx);
    const double beta = std::acos(r / dist);
    for (double gamma : {alpha + beta, alpha - beta}) {
        const Point2 t{c.x + r * std::cos(gamma), c.y + r * std::sin(gamma)};
        const Point2 u{t.x - p.x, t.y - p.y};
        const Point2 h = unit_vec(gamma + M_PI / 2.0); // ccw heading at t
        if (u.x * h.x + u.y * h.y > 0.0) return t;
    }
    throw std::logic_error("trajectory: no ccw tangent found");
}

/// Outer common tangent between two counterclockwise orbit circles; returns
/// the shared normal angle gamma such that the tangent runs from
/// c1 + r1*e(gamma) to c2 + r2*e(gamma) with continuous ccw heading.
double outer_tangent_angle(const Point2& c1, double r1, const Point2& c2, double r2) {
    const double wx = c2.x - c1.x;
    const double wy = c2.y - c1.y;
    const double d = std::hypot(wx, wy);
    if (d <= std::fabs(r1 - r2)) {
        throw std::invalid_argument("trajectory: orbit circles have no outer tangent");
    }
    const double phi = std::atan2(wy, wx);
    const double off = std::acos((r1 - r2) / d);
    for (double gamma : {phi + off, phi - off}) {
        const Point2 t1{c1.x + r1 * std::cos(gamma), c1.y + r1 * std::sin(gamma)};
        const Point2 t2{c2.x + r2 * std::cos(gamma), c2.y + r2 * std::sin(gamma)};
        const Point2 h = unit_vec(gamma + M_PI / 2.0);
        if ((t2.x - t1.x) * h.x + (t2.y - t1.y) * h.y > 0.0) return gamma;
    }
    throw std::logic_error("trajectory: no ccw outer tangent found");
}

double wrap_positive(double angle) {
    double a = std::fmod(angle, 2.0 * M_PI);
    if (a < 0.0) a += 2.0 * M_PI;
    return a;
}

} // namespace

RayHit cast_ray(const World& world, const Point2& origin, const Point2& dir) {
    double best_t = std::numeric_limits<double>::infinity();
    Surface best_s = Surface::None;

    // Arena walls: the origin is inside, so the exit distance always exists.
    if (dir.x > 0.0) best_t = std::min(best_t, (world.arena_w - origin.x) / dir.x);
    if (dir.x < 0.0) best_t = std::min(best_t, -origin.x / dir.x);
    if (dir.y > 0.0) best_t = std::min(best_t, (world.arena_h - origin.y) / dir.y);
    if (dir.y < 0.0) best_t = std::min(best_t, -origin.y / dir.y);
    if (std::isfinite(best_t)) best_s = Surface::Wall;

    // Cylinder.
    {
        const double ox = origin.x - world.cylinder_center.x;
        const double oy = origin.y - world.cylinder_center.y;
        const double b = ox * dir.x + oy * dir.y;
        const double c = ox * ox + oy * oy - sq(world.cylinder_radius);
        const double disc = b * b - c;
        if (disc > 0.0) {
            const double t = -b - std::sqrt(disc);
            if (t > kRayEps && t < best_t) {
                best_t = t;
                best_s = Surface::Cylinder;
            }
        }
    }

    // Cube (axis-aligned square), slab test.
    {
        double tmin = -std::numeric_limits<double>::infinity();
        double tmax = std::numeric_limits<double>::infinity();
        bool miss = false;
        const double lo[2] = {world.cube_center.x - world.cube_half_side,
                              world.cube_center.y - world.cube_half_side};
        const double hi[2] = {world.cube_center.x + world.cube_half_side,
                              world.cube_center.y + world.cube_half_side};
        const double o[2] = {origin.x, origin.y};
        const double d[2] = {dir.x, dir.y};
        for (int axis = 0; axis < 2 && !miss; ++axis) {
            if (d[axis] == 0.0) {
                if (o[axis] < lo[axis] || o[axis] > hi[axis]) miss = true;
            } else {
                double t1 = (lo[axis] - o[axis]) / d[axis];
                double t2 = (hi[axis] - o[axis]) / d[axis];
                if (t1 > t2) std::swap(t1, t2);
                tmin = std::max(tmin, t1);
                tmax = std::min(tmax, t2);
            }
        }
        if (!miss && tmax >= tmin && tmin > kRayEps && tmin < best_t) {
            best_t = tmin;
            best_s = Surface::Cube;
        }
    }

    RayHit hit;
    hit.surface = best_s;
    hit.t = best_t;
    hit.point = {origin.x + best_t * dir.x, origin.y + best_t * dir.y};
    return hit;
}

double wall_shade(const World& world, const Point2& hit) {
    const double t = hit.x + hit.y; // continuous around the perimeter
    return world.wall_shade_base +
           world.wall_shade_amp * std::sin(2.0 * M_PI * t / world.wall_texture_period);
}

bool body_intersects_landmark(const World& world, const Point2& pos, double body_radius) {
    if (distance(pos, world.cylinder_center) <= world.cylinder_radius + body_radius) {
        return true;
    }
    const double cx = std::clamp(pos.x, world.cube_center.x - world.cube_half_side,
                                 world.cube_center.x + world.cube_half_side);
    const double cy = std::clamp(pos.y, world.cube_center.y - world.cube_half_side,
                                 world.cube_center.y + world.cube_half_side);
    return distance(pos, {cx, cy}) <= body_radius;
}

RgbImage render_camera(const World& world, const Pose& head_pose, const CameraParams& cam) {
    if (!world.inside_arena({head_pose.x, head_pose.y})) {
        throw std::domain_error("render_camera: head outside the arena");
    }
    RgbImage img;
    img.width = cam.width;
    img.height = cam.height;
    img.pixels.assign(static_cast<std::size_t>(cam.width) * cam.height * 3, 0);

    const Point2 origin{head_pose.x, head_pose.y};
    for (int col = 0; col < cam.width; ++col) {
        const double offset = cam.fov / 2.0 - (col + 0.5) * cam.fov / cam.width;
        const double angle = head_pose.theta + offset;
        const RayHit hit = cast_ray(world, origin, unit_vec(angle));

        double shade = 0.0;
        switch (hit.surface) {
            case Surface::Cylinder: shade = world.cylinder_shade; break;
            case Surface::Cube: shade = world.cube_shade; break;
            default: shade = wall_shade(world, hit.point); break;
        }

        // Perpendicular distance avoids the fisheye bow in slice heights.
        const double t_perp = std::max(hit.t * std::cos(offset), 1e-6);
        const double half_rows =
            (cam.height / 2.0) * std::min(1.0, cam.slice_distance / t_perp);

        for (int row = 0; row < cam.height; ++row) {
            const double off_rows = std::fabs(row + 0.5 - cam.height / 2.0);
            const double v = (off_rows <= half_rows) ? shade : cam.background_shade;
            const auto px = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
            const std::size_t base = (static_cast<std::size_t>(row) * cam.width + col) * 3;
            img.pixels[base] = px;
            img.pixels[base + 1] = px;
            img.pixels[base + 2] = px;
        }
    }
    return img;
}

WhiskCycleData whisk_cycle(const World& world, const Pose& head_pose,
                           const WhiskerParams& params) {
    WhiskCycleData data;
    const Point2 origin{head_pose.x, head_pose.y};
    const double spacing = 2.0 * params.fan_half_angle / (kWhiskerCount - 1);

    for (int i = 0; i < kWhiskerCount; ++i) {
        const double mount = -params.fan_half_angle + i * spacing;
        const double outward = (mount >= 0.0) ? 1.0 : -1.0;
        for (int j = 0; j < params.sweep_increments; ++j) {
            const double swept = j * params.protraction_amplitude / params.sweep_increments;
            const double angle = head_pose.theta + mount + outward * swept;
            const RayHit hit = cast_ray(world, origin, unit_vec(angle));
            if (hit.t <= params.rest_length) {
                data.contacts.push_back(
                    {i, inverse_transform_point(head_pose, hit.point)});
                // Residual drive pressed against the obstacle, scaled by the
                // lever ratio: a contact nearer the base bends the shaft more
                // than a tip contact under the same remaining protraction.
                data.deflections[static_cast<std::size_t>(i)] =
                    (params.protraction_amplitude - swept) * (params.rest_length / hit.t);
                break;
            }
        }
    }
    return data;
}

TrajectoryScript::TrajectoryScript(const World& world, const Pose& start,
                                   double cylinder_orbit_radius, const Point2& cylinder_orbit_offset,
                                   double cube_orbit_radius,
                                   double cylinder_revolutions, double cube_revolutions,
                                   double step_length)
    : step_length_(step_length), cylinder_orbit_radius_(cylinder_orbit_radius) {
    if (step_length <= 0.0) throw std::invalid_argument("trajectory: step_length must be positive");
    if (cylinder_revolutions < 1.0 || cube_revolutions < 0.0) {
        throw std::invalid_argument("trajectory: revolution counts out of range");
    }

    const Point2 p{start.x, start.y};
    const Point2 c1{world.cylinder_center.x + cylinder_orbit_offset.x,
                    world.cylinder_center.y + cylinder_orbit_offset.y};
    const Point2& c2 = world.cube_center;

    // Approach line onto the cylinder orbit circle.
    const Point2 t_entry = ccw_entry_tangent(p, c1, cylinder_orbit_radius);
    Line approach;
    approach.a = p;
    approach.b = t_entry;
    approach.heading = std::atan2(t_entry.y - p.y, t_entry.x - p.x);
    approach.length = distance(p, t_entry);

    // Departure happens at the outer-tangent point toward the cube orbit.
    const double gamma_t = outer_tangent_angle(c1, cylinder_orbit_radius, c2, cube_orbit_radius);
    const double gamma_entry = std::atan2(t_entry.y - c1.y, t_entry.x - c1.x);

    Arc orbit1;
    orbit1.center = c1;
    orbit1.radius = cylinder_orbit_radius;
    orbit1.start_angle = gamma_entry;
    orbit1.sweep = 2.0 * M_PI * cylinder_revolutions + wrap_positive(gamma_t - gamma_entry -
                                                                     2.0 * M_PI * (cylinder_revolutions -
                                                                                   std::floor(cylinder_revolutions)));
    orbit1.length = orbit1.radius * orbit1.sweep;

    const Point2 t1{c1.x + cylinder_orbit_radius * std::cos(gamma_t),
                    c1.y + cylinder_orbit_radius * std::sin(gamma_t)};
    const Point2 t2{c2.x + cube_orbit_radius * std::cos(gamma_t),
                    c2.y + cube_orbit_radius * std::sin(gamma_t)};
    Line transfer;
    transfer.a = t1;
    transfer.b = t2;
    transfer.heading = std::atan2(t2.y - t1.y, t2.x - t1.x);
    transfer.length = distance(t1, t2);

    Arc orbit2;
    orbit2.center = c2;
    orbit2.radius = cube_orbit_radius;
    orbit2.start_angle = gamma_t;
    orbit2.sweep = 2.0 * M_PI * cube_revolutions;
    orbit2.length = orbit2.radius * orbit2.sweep;

    segments_.push_back({false, approach, {}});
    segments_.push_back({true, {}, orbit1});
    segments_.push_back({false, transfer, {}});
    if (orbit2.length > 0.0) segments_.push_back({true, {}, orbit2});

    approach_end_ = approach.length;
    cylinder_orbit_end_ = approach_end_ + orbit1.length;
    transfer_end_ = cylinder_orbit_end_ + transfer.length;
    total_length_ = transfer_end_ + orbit2.length;
}

Pose TrajectoryScript::pose_at(double arc_length) const {
    double s = std::clamp(arc_length, 0.0, total_length_);
    for (const Segment& seg : segments_) {
        const double len = seg.is_arc ? seg.arc.length : seg.line.length;
        if (s <= len) {
            if (seg.is_arc) {
                const double ang = seg.arc.start_angle + s / seg.arc.radius;
                return Pose(seg.arc.center.x + seg.arc.radius * std::cos(ang),
                            seg.arc.center.y + seg.arc.radius * std::sin(ang),
                            ang + M_PI / 2.0);
            }
            const double ux = std::cos(seg.line.heading);
            const double uy = std::sin(seg.line.heading);
            return Pose(seg.line.a.x + s * ux, seg.line.a.y + s * uy, seg.line.heading);
        }
        s -= len;
    }
    // Arc-length beyond the last segment only happens through rounding; the
    // clamp above keeps s at the path end.
    const Segment& last = segments_.back();
    if (last.is_arc) {
        const double ang = last.arc.start_angle + last.arc.sweep;
        return Pose(last.arc.center.x + last.arc.radius * std::cos(ang),
                    last.arc.center.y + last.arc.radius * std::sin(ang), ang + M_PI / 2.0);
    }
    return Pose(last.line.b.x, last.line.b.y, last.line.heading);
}

int TrajectoryScript::total_cycles() const {
    return static_cast<int>(std::floor(total_length_ / step_length_)) + 1;
}

Pose TrajectoryScript::pose_at_cycle(int cycle) const {
    return pose_at(cycle * step_length_);
}

double TrajectoryScript::cylinder_revolution_start(int k) const {
    return approach_end_ + k * 2.0 * M_PI * cylinder_orbit_radius_;
}

int TrajectoryScript::cycle_at(double arc_length) const {
    return static_cast<int>(std::ceil(arc_length / step_length_ - 1e-12));
}

GaussianSampler::GaussianSampler(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    rng_.seed(seq);
}

double GaussianSampler::uniform() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double GaussianSampler::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform(); // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

Simulator::Simulator(const SimulatorConfig& config)
    : config_(config),
      script_(config.world, config.start, config.cylinder_orbit_radius,
              config.cylinder_orbit_offset, config.cube_orbit_radius,
              config.cylinder_revolutions, config.cube_revolutions, config.step_length) {}

Pose Simulator::truth_pose(int cycle) const {
    const Pose here = script_.pose_at_cycle(cycle);
    // Heading = direction of the chord this cycle drives (the last cycle keeps
    // the chord it arrived along). The per-cycle motion is then purely forward
    // in the reported heading, so integrating the noise-free twist stream
    // reproduces this pose sequence up to floating-point round-off.
    const bool has_next = cycle + 1 < total_cycles();
    const Pose a = has_next ? here : script_.pose_at_cycle(cycle - 1);
    const Pose b = has_next ? script_.pose_at_cycle(cycle + 1) : here;
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    if (dx == 0.0 && dy == 0.0) return here; // single-cycle script
    return Pose(here.x, here.y, std::atan2(dy, dx));
}

SensorFrame Simulator::frame(int cycle) const {
    if (cycle < 0 || cycle >= total_cycles()) throw ScriptEnded{};

    SensorFrame f;
    f.cycle = cycle;
    f.truth = truth_pose(cycle);

    const Pose prev = truth_pose(std::max(0, cycle - 1));
    const double true_df = distance({prev.x, prev.y}, {f.truth.x, f.truth.y});
    const double true_dth = wrap_angle(f.truth.theta - prev.theta);

    // Stream ids carry a sensor tag in the high word and the cycle in the low
    // word, so each sensor draws from its own per-cycle substream and adding a
    // sensor never disturbs the streams of the existing ones.
    GaussianSampler odo_rng(config_.seed, (1ull << 32) | static_cast<std::uint64_t>(cycle));
    f.odom.dforward = true_df + config_.odom_sigma_forward * odo_rng.next();
    f.odom.dtheta = wrap_angle(true_dth + config_.odom_sigma_theta * odo_rng.next());

    f.whisk = whisk_cycle(config_.world, f.truth, config_.whiskers);

    f.rgb = render_camera(config_.world, f.truth, config_.camera);
    if (config_.camera_noise_sigma > 0.0) {
        GaussianSampler cam_rng(config_.seed, (2ull << 32) | static_cast<std::uint64_t>(cycle));
        for (std::uint8_t& px : f.rgb.pixels) {
            const double v = px + config_.camera_noise_sigma * cam_rng.next();
            px = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    return f;
}

} // namespace vitaslam
