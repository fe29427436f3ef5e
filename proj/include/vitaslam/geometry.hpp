#ifndef VITASLAM_GEOMETRY_HPP
#define VITASLAM_GEOMETRY_HPP

#include <cmath>
#include <stdexcept>

namespace vitaslam {

// All poses are planar: x, y in meters, theta in radians wrapped to [-pi, pi).
// Convention: right-handed, theta = 0 along +x.

/// Wrap an angle into [-pi, pi). Throws on non-finite input.
double wrap_angle(double theta);

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    Pose() = default;
    Pose(double x_, double y_, double theta_) : x(x_), y(y_), theta(wrap_angle(theta_)) {}

    static Pose identity() { return Pose(); }
};

// Per-cycle motion increment: distance along the heading plus a heading change.
struct Twist {
    double dforward = 0.0; // meters per step
    double dtheta = 0.0;   // radians per step, |dtheta| < pi
};

/// SE(2) composition: b expressed in a's frame, appended to a.
Pose compose(const Pose& a, const Pose& b);

/// Pose inverse so that compose(p, inverse(p)) == identity.
Pose inverse(const Pose& p);

/// Relative pose taking a to b: compose(a, between(a, b)) == b.
Pose between(const Pose& a, const Pose& b);

/// Map a point from the local frame into the world: rotate by frame.theta,
/// then translate by (frame.x, frame.y).
Point2 transform_point(const Pose& frame, const Point2& p_local);

/// Inverse of transform_point: world point back into the local frame.
Point2 inverse_transform_point(const Pose& frame, const Point2& p_world);

/// Advance a pose by one twist: forward along the current heading, then turn.
Pose apply_twist(const Pose& p, const Twist& t);

inline double distance(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

} // namespace vitaslam

#endif
