#ifndef VITASLAM_POSE_CELLS_HPP
#define VITASLAM_POSE_CELLS_HPP

#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "vitaslam/geometry.hpp"
#include "vitaslam/matching.hpp"

namespace vitaslam {

struct DegenerateActivity : std::runtime_error {
    DegenerateActivity() : std::runtime_error("pose cell activity collapsed to zero") {}
};

struct PoseEstimate {
    CellCoords cell_coords; // continuous, each axis in [0, dim)
    Pose pose;              // cell_coords scaled into world units
};

// 3D continuous attractor over (x, y, theta). All three axes wrap, so the
// grid is a torus covering extent_x x extent_y meters and a full turn.
// Activity is kept non-negative and (after step_attractor / inject)
// normalized to unit sum.
//
// Storage is a flat vector with x fastest: index = (th * ny + y) * nx + x.
// step_attractor is written as the plain dense triple-loop gather
//   new[z][y][x] = sum_{dz,dy,dx in [-3,3]} w[dz]*w[dy]*w[dx]
//                  * old[wrap(z+dz)][wrap(y+dy)][wrap(x+dx)]
// with the offsets accumulated in ascending (dz, dy, dx) order, so an
// independently written dense oracle produces bit-identical doubles.
class PoseCellGrid {
public:
    PoseCellGrid(int nx = 21, int ny = 21, int nth = 36,
                 double extent_x = 10.0, double extent_y = 10.0);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int nth() const { return nth_; }
    double cell_size_x() const { return cell_size_x_; }
    double cell_size_y() const { return cell_size_y_; }
    double cell_size_th() const { return cell_size_th_; }

    const std::vector<double>& activity() const { return activity_; }
    std::vector<double>& activity() { return activity_; }

    std::size_t index(int x, int y, int th) const;   // indices wrapped
    double value_at(int x, int y, int th) const { return activity_[index(x, y, th)]; }

    /// Zero everything and place a unit delta at the nearest cell to `at`.
    void reset(const CellCoords& at);

    /// One attractor update: wrapped Gaussian excitation (sigma = 1 cell,
    /// radius 3, per-axis weights normalized to unit sum), constant global
    /// inhibition clamped at zero, then normalization to unit sum.
    /// Throws DegenerateActivity when inhibition wipes out all activity.
    void step_attractor();

    /// Shift activity by one odometry increment: each theta-plane k moves by
    /// (dforward*cos(theta_k)/cell_size_x, dforward*sin(theta_k)/cell_size_y)
    /// cells with wrapped bilinear interpolation (theta_k = k*cell_size_th),
    /// then the planes themselves shift by dtheta/cell_size_th with wrapped
    /// linear interpolation. Total activity is preserved; no normalization.
    void path_integrate(const Twist& odom);

    /// Add energy * wrapped Gaussian bump (sigma = 1 cell per axis, evaluated
    /// over the whole torus with shortest wrapped per-axis offsets) centered
    /// at the continuous coordinates `at`, then renormalize to unit sum.
    void inject(const CellCoords& at, double energy);

    /// Peak estimate: argmax cell (ties to the lowest flat index), then a
    /// per-axis activity-weighted circular mean over the wrapped window of
    /// cells within kDecodeRadius of the argmax, each index embedded as the
    /// angle 2*pi*i/N and averaged via atan2. Throws DegenerateActivity on an
    /// all-zero grid.
    PoseEstimate decode() const;

    CellCoords pose_to_cells(const Pose& p) const;
    Pose cells_to_pose(const CellCoords& c) const;

    double total_activity() const;

    /// Flat CSV snapshot, one value per line in storage (x fastest) order.
    void dump_csv(std::ostream& os) const;

    static constexpr int kKernelRadius = 3;
    static constexpr double kSigmaCells = 1.0;
    static constexpr int kDecodeRadius = 5;

    double inhibition() const { return inhibition_; }
    void set_inhibition(double phi) { inhibition_ = phi; }

private:
    int nx_, ny_, nth_;
    double cell_size_x_, cell_size_y_, cell_size_th_;
    double inhibition_ = 0.00002;
    std::vector<double> activity_;
    std::vector<double> scratch_;
    double kernel_[2 * kKernelRadius + 1];
};

} // namespace vitaslam

#endif
