#ifndef VITASLAM_SIMULATOR_HPP
#define VITASLAM_SIMULATOR_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "vitaslam/geometry.hpp"
#include "vitaslam/tactile.hpp"
#include "vitaslam/visual.hpp"

namespace vitaslam {

// Rectangular arena with two landmarks: a bright cylinder and a dark cube
// (axis-aligned square in the plane). Walls carry a low-contrast sine texture
// so the camera sees gradients everywhere, parameterized by x+y of the hit
// point, which is continuous around the perimeter.
struct World {
    double arena_w = 8.0;
    double arena_h = 5.0;
    Point2 cylinder_center{2.5, 2.5};
    double cylinder_radius = 0.4;
    double cylinder_shade = 0.9;
    Point2 cube_center{5.5, 2.5};
    double cube_half_side = 0.35;
    double cube_shade = 0.1;
    double wall_shade_base = 0.45;
    double wall_shade_amp = 0.05;
    double wall_texture_period = 1.0; // meters along x+y

    bool inside_arena(const Point2& p) const {
        return p.x >= 0.0 && p.x <= arena_w && p.y >= 0.0 && p.y <= arena_h;
    }
};

enum class Surface { None, Wall, Cylinder, Cube };

struct RayHit {
    Surface surface = Surface::None;
    double t = 0.0;   // distance along the ray
    Point2 point;     // world-frame hit point
};

/// First surface hit by the ray from `origin` along unit `dir`. The origin
/// must lie inside the arena, so a wall hit always exists.
RayHit cast_ray(const World& world, const Point2& origin, const Point2& dir);

/// Wall texture shade at a wall hit point.
double wall_shade(const World& world, const Point2& hit);

/// True when a disc of body_radius at `pos` overlaps a landmark.
bool body_intersects_landmark(const World& world, const Point2& pos, double body_radius);

struct CameraParams {
    int width = 64;
    int height = 32;
    double fov = M_PI / 2.0; // horizontal
    double slice_distance = 1.0; // wall slice fills the image at this range
    double background_shade = 0.15;
};

/// Flat 2.5D render: one ray per column across the FOV; the column's hit
/// shade fills a vertical slice whose height shrinks with perpendicular
/// distance, against a dark background. Greyscale written into all three
/// channels. Throws std::domain_error when the head is outside the arena.
RgbImage render_camera(const World& world, const Pose& head_pose, const CameraParams& cam);

struct WhiskerParams {
    // The fan is wide enough that, at orbit standoff, the whisker pointing
    // straight at the landmark sits inside the array rather than at its edge;
    // the deflection profile across the array then peaks at an interior
    // whisker and shifts with contact bearing instead of clipping.
    double fan_half_angle = M_PI * 4.0 / 9.0; // mounting fan spans +-80 degrees
    double rest_length = 0.25;                // meters, head origin to tip
    double protraction_amplitude = M_PI / 6.0; // 30 degree sweep
    int sweep_increments = 30;
};

/// One whisk cycle under rapid cessation of protraction: each whisker sweeps
/// outward from its rest angle in sweep_increments steps; at the first step
/// whose head-to-tip segment touches geometry the sweep stops, the contact
/// point (head frame) is recorded and the deflection is the sweep remainder
/// in radians. The final tested step still leaves a positive remainder, so
/// deflection > 0 exactly when a contact exists.
WhiskCycleData whisk_cycle(const World& world, const Pose& head_pose,
                           const WhiskerParams& params);

struct ScriptEnded : std::runtime_error {
    ScriptEnded() : std::runtime_error("trajectory script exhausted") {}
};

// Piecewise path: straight tangent approach to the cylinder's orbit circle,
// a configurable number of counterclockwise revolutions, a straight transfer
// along the outer common tangent to the cube's orbit circle, revolutions
// there, stop. Tangent construction keeps the heading continuous at every
// segment boundary. The cylinder orbit circle is centered at the cylinder
// center plus `cylinder_orbit_offset`; a nonzero offset makes the standoff
// vary around the lap, so whisker contact is intermittent and its geometry
// depends on the lap phase instead of being identical everywhere.
class TrajectoryScript {
public:
    TrajectoryScript(const World& world, const Pose& start,
                     double cylinder_orbit_radius, const Point2& cylinder_orbit_offset,
                     double cube_orbit_radius,
                     double cylinder_revolutions, double cube_revolutions,
                     double step_length);

    Pose pose_at(double arc_length) const;
    double total_length() const { return total_length_; }
    double step_length() const { return step_length_; }

    /// Number of cycles in the script, including the cycle at arc length 0.
    int total_cycles() const;
    Pose pose_at_cycle(int cycle) const;

    // Arc-length milestones, useful for phase-windowed assertions.
    double approach_end() const { return approach_end_; }
    double cylinder_orbit_end() const { return cylinder_orbit_end_; }
    double transfer_end() const { return transfer_end_; }
    /// Arc length where revolution `k` (0-based) around the cylinder starts.
    double cylinder_revolution_start(int k) const;
    int cycle_at(double arc_length) const;

private:
    struct Line {
        Point2 a;
        Point2 b;
        double heading;
        double length;
    };
    struct Arc {
        Point2 center;
        double radius;
        double start_angle; // angle of the start point around center
        double sweep;       // positive = counterclockwise
        double length;
    };
    struct Segment {
        bool is_arc;
        Line line;
        Arc arc;
    };

    std::vector<Segment> segments_;
    double total_length_ = 0.0;
    double step_length_;
    double approach_end_ = 0.0;
    double cylinder_orbit_end_ = 0.0;
    double transfer_end_ = 0.0;
    double cylinder_orbit_radius_;
};

struct SensorFrame {
    int cycle = 0;
    RgbImage rgb;
    WhiskCycleData whisk;
    Twist odom; // noisy
    Pose truth; // noise-free
};

struct SimulatorConfig {
    std::uint64_t seed = 42;
    World world;
    CameraParams camera;
    WhiskerParams whiskers;
    Pose start{0.8, 0.8, 0.0}; // heading replaced by the tangent direction
    // Orbit circumference = 55 whisk cycles exactly, so successive laps sample
    // the same lap phases and a revisit reproduces the same contact geometry.
    double cylinder_orbit_radius = 55.0 * 0.075 / (2.0 * M_PI);
    Point2 cylinder_orbit_offset{0.115, 0.0}; // orbit center minus cylinder center
    // Same phase-alignment trick as the cylinder orbit: 57 whisk cycles per
    // lap, so overshooting one revolution revisits the lap-start contacts.
    double cube_orbit_radius = 57.0 * 0.075 / (2.0 * M_PI);
    double cylinder_revolutions = 2.0;
    double cube_revolutions = 1.2;
    double step_length = 0.075;       // meters per whisk cycle
    double odom_sigma_forward = 0.01; // meters per cycle
    double odom_sigma_theta = 0.5 * M_PI / 180.0;
    // 8-bit counts per channel. High enough that two renders of the same pose
    // differ by more than the view-template match threshold: appearance alone
    // cannot confirm a revisit in this arena.
    double camera_noise_sigma = 4.0;
    double body_radius = 0.12;
};

// Deterministic sensor source: every frame is a pure function of
// (config, cycle). Noise comes from per-cycle seeded generators, so frames
// can be produced in any order and replay bit-exactly.
class Simulator {
public:
    explicit Simulator(const SimulatorConfig& config);

    int total_cycles() const { return script_.total_cycles(); }
    SensorFrame frame(int cycle) const;

    /// Ground-truth pose at a cycle. Position comes from the script; heading
    /// is the direction of the chord driven during the cycle, so a noise-free
    /// odometry stream dead-reckons back onto the truth sequence exactly.
    Pose truth_pose(int cycle) const;

    const SimulatorConfig& config() const { return config_; }
    const TrajectoryScript& script() const { return script_; }

private:
    SimulatorConfig config_;
    TrajectoryScript script_;
};

/// Standard normal deviates via Box-Muller over a seeded mt19937_64, written
/// out by hand so the stream is identical across standard libraries.
class GaussianSampler {
public:
    GaussianSampler(std::uint64_t seed, std::uint64_t stream);
    double next();
    double uniform(); // in [0, 1)

private:
    std::mt19937_64 rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace vitaslam

#endif
