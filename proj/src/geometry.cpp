#include "vitaslam/geometry.hpp"

namespace vitaslam {

double wrap_angle(double theta) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("wrap_angle: non-finite angle");
    }
    // remainder() returns a value in [-pi, pi]; fold the closed upper end.
    double w = std::remainder(theta, 2.0 * M_PI);
    if (w >= M_PI) w -= 2.0 * M_PI;
    return w;
}

Pose compose(const Pose& a, const Pose& b) {
    const double c = std::cos(a.theta);
    const double s = std::sin(a.theta);
    return Pose(a.x + c * b.x - s * b.y,
                a.y + s * b.x + c * b.y,
                wrap_angle(a.theta + b.theta));
}

Pose inverse(const Pose& p) {
    const double c = std::cos(p.theta);
    const double s = std::sin(p.theta);
    return Pose(-(c * p.x + s * p.y),
                -(-s * p.x + c * p.y),
                wrap_angle(-p.theta));
}

Pose between(const Pose& a, const Pose& b) {
    return compose(inverse(a), b);
}

Point2 transform_point(const Pose& frame, const Point2& p_local) {
    const double c = std::cos(frame.theta);
    const double s = std::sin(frame.theta);
    return Point2{frame.x + c * p_local.x - s * p_local.y,
                  frame.y + s * p_local.x + c * p_local.y};
}

Point2 inverse_transform_point(const Pose& frame, const Point2& p_world) {
    const double dx = p_world.x - frame.x;
    const double dy = p_world.y - frame.y;
    const double c = std::cos(frame.theta);
    const double s = std::sin(frame.theta);
    return Point2{c * dx + s * dy, -s * dx + c * dy};
}

Pose apply_twist(const Pose& p, const Twist& t) {
    return Pose(p.x + t.dforward * std::cos(p.theta),
                p.y + t.dforward * std::sin(p.theta),
                wrap_angle(p.theta + t.dtheta));
}

} // namespace vitaslam
