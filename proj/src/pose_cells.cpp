#include "vitaslam/pose_cells.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace vitaslam {

namespace {

int wrap_i(int i, int n) {
    int r = i % n;
    return r < 0 ? r + n : r;
}

double wrap_d(double v, double n) {
    double r = std::fmod(v, n);
    return r < 0.0 ? r + n : r;
}

/// Shortest wrapped offset between a cell index and a continuous center.
double wrapped_offset(int i, double center, int n) {
    double d = std::fabs(wrap_d(static_cast<double>(i) - center, static_cast<double>(n)));
    return std::min(d, n - d);
}

} // namespace

PoseCellGrid::PoseCellGrid(int nx, int ny, int nth, double extent_x, double extent_y)
    : nx_(nx), ny_(ny), nth_(nth) {
    if (nx < 1 || ny < 1 || nth < 1) {
        throw std::invalid_argument("PoseCellGrid: dims must be positive");
    }
    if (extent_x <= 0.0 || extent_y <= 0.0) {
        throw std::invalid_argument("PoseCellGrid: extents must be positive");
    }
    cell_size_x_ = extent_x / nx;
    cell_size_y_ = extent_y / ny;
    cell_size_th_ = 2.0 * M_PI / nth;
    activity_.assign(static_cast<std::size_t>(nx_) * ny_ * nth_, 0.0);
    scratch_.assign(activity_.size(), 0.0);

    double sum = 0.0;
    for (int d = -kKernelRadius; d <= kKernelRadius; ++d) {
        kernel_[d + kKernelRadius] =
            std::exp(-(d * d) / (2.0 * kSigmaCells * kSigmaCells));
        sum += kernel_[d + kKernelRadius];
    }
    for (double& w : kernel_) w /= sum;
}

std::size_t PoseCellGrid::index(int x, int y, int th) const {
    return (static_cast<std::size_t>(wrap_i(th, nth_)) * ny_ + wrap_i(y, ny_)) * nx_ +
           wrap_i(x, nx_);
}

void PoseCellGrid::reset(const CellCoords& at) {
    std::fill(activity_.begin(), activity_.end(), 0.0);
    const int x = wrap_i(static_cast<int>(std::lround(at.x)), nx_);
    const int y = wrap_i(static_cast<int>(std::lround(at.y)), ny_);
    const int th = wrap_i(static_cast<int>(std::lround(at.th)), nth_);
    activity_[index(x, y, th)] = 1.0;
}

void PoseCellGrid::step_attractor() {
    // Dense gather; ascending (dz, dy, dx) accumulation keeps the floating
    // point sum order pinned down.
    for (int z = 0; z < nth_; ++z) {
        for (int y = 0; y < ny_; ++y) {
            for (int x = 0; x < nx_; ++x) {
                double acc = 0.0;
                for (int dz = -kKernelRadius; dz <= kKernelRadius; ++dz) {
                    const double wz = kernel_[dz + kKernelRadius];
                    for (int dy = -kKernelRadius; dy <= kKernelRadius; ++dy) {
                        const double wzy = wz * kernel_[dy + kKernelRadius];
                        for (int dx = -kKernelRadius; dx <= kKernelRadius; ++dx) {
                            acc += wzy * kernel_[dx + kKernelRadius] *
                                   activity_[index(x + dx, y + dy, z + dz)];
                        }
                    }
                }
                scratch_[index(x, y, z)] = acc;
            }
        }
    }

    double total = 0.0;
    for (double& v : scratch_) {
        v = std::max(0.0, v - inhibition_);
        total += v;
    }
    if (!(total > 0.0)) throw DegenerateActivity{};
    for (std::size_t i = 0; i < activity_.size(); ++i) activity_[i] = scratch_[i] / total;
}

void PoseCellGrid::path_integrate(const Twist& odom) {
    if (std::fabs(odom.dforward) >= 0.5 * nx_ * cell_size_x_ ||
        std::fabs(odom.dforward) >= 0.5 * ny_ * cell_size_y_) {
        throw std::invalid_argument("path_integrate: forward step exceeds half the grid extent");
    }

    const std::size_t plane = static_cast<std::size_t>(nx_) * ny_;

    // Translate each theta-plane along its own heading.
    for (int k = 0; k < nth_; ++k) {
        const double theta_k = k * cell_size_th_;
        const double sx = odom.dforward * std::cos(theta_k) / cell_size_x_;
        const double sy = odom.dforward * std::sin(theta_k) / cell_size_y_;
        const std::size_t base = static_cast<std::size_t>(k) * plane;
        for (int y = 0; y < ny_; ++y) {
            const double src_y = y - sy;
            const int y0 = static_cast<int>(std::floor(src_y));
            const double fy = src_y - y0;
            for (int x = 0; x < nx_; ++x) {
                const double src_x = x - sx;
                const int x0 = static_cast<int>(std::floor(src_x));
                const double fx = src_x - x0;
                const double v00 = activity_[base + static_cast<std::size_t>(wrap_i(y0, ny_)) * nx_ + wrap_i(x0, nx_)];
                const double v01 = activity_[base + static_cast<std::size_t>(wrap_i(y0, ny_)) * nx_ + wrap_i(x0 + 1, nx_)];
                const double v10 = activity_[base + static_cast<std::size_t>(wrap_i(y0 + 1, ny_)) * nx_ + wrap_i(x0, nx_)];
                const double v11 = activity_[base + static_cast<std::size_t>(wrap_i(y0 + 1, ny_)) * nx_ + wrap_i(x0 + 1, nx_)];
                scratch_[base + static_cast<std::size_t>(y) * nx_ + x] =
                    (1.0 - fy) * ((1.0 - fx) * v00 + fx * v01) +
                    fy * ((1.0 - fx) * v10 + fx * v11);
            }
        }
    }

    // Shift the planes themselves along theta.
    const double s_th = odom.dtheta / cell_size_th_;
    for (int k = 0; k < nth_; ++k) {
        const double src = k - s_th;
        const int k0 = static_cast<int>(std::floor(src));
        const double f = src - k0;
        const std::size_t base_lo = static_cast<std::size_t>(wrap_i(k0, nth_)) * plane;
        const std::size_t base_hi = static_cast<std::size_t>(wrap_i(k0 + 1, nth_)) * plane;
        const std::size_t base_out = static_cast<std::size_t>(k) * plane;
        for (std::size_t i = 0; i < plane; ++i) {
            activity_[base_out + i] =
                (1.0 - f) * scratch_[base_lo + i] + f * scratch_[base_hi + i];
        }
    }
}

void PoseCellGrid::inject(const CellCoords& at, double energy) {
    if (energy < 0.0) throw std::invalid_argument("inject: energy must be >= 0");
    if (energy == 0.0) return;

    // Each axis weight vector is normalized to unit sum so the separable 3D
    // bump carries exactly `energy` units of mass before the final rescale.
    const double two_sigma_sq = 2.0 * kSigmaCells * kSigmaCells;
    std::vector<double> wx(static_cast<std::size_t>(nx_));
    std::vector<double> wy(static_cast<std::size_t>(ny_));
    std::vector<double> wth(static_cast<std::size_t>(nth_));
    auto fill_axis = [two_sigma_sq](std::vector<double>& w, double center, int n) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = wrapped_offset(i, center, n);
            w[static_cast<std::size_t>(i)] = std::exp(-d * d / two_sigma_sq);
            sum += w[static_cast<std::size_t>(i)];
        }
        for (double& v : w) v /= sum;
    };
    fill_axis(wx, at.x, nx_);
    fill_axis(wy, at.y, ny_);
    fill_axis(wth, at.th, nth_);

    double total = 0.0;
    std::size_t idx = 0;
    for (int z = 0; z < nth_; ++z) {
        for (int y = 0; y < ny_; ++y) {
            for (int x = 0; x < nx_; ++x, ++idx) {
                activity_[idx] += energy * wth[static_cast<std::size_t>(z)] *
                                  wy[static_cast<std::size_t>(y)] *
                                  wx[static_cast<std::size_t>(x)];
                total += activity_[idx];
            }
        }
    }
    if (!(total > 0.0)) throw DegenerateActivity{};
    for (double& v : activity_) v /= total;
}

PoseEstimate PoseCellGrid::decode() const {
    std::size_t best = 0;
    double best_v = activity_[0];
    for (std::size_t i = 1; i < activity_.size(); ++i) {
        if (activity_[i] > best_v) {
            best_v = activity_[i];
            best = i;
        }
    }
    if (!(best_v > 0.0)) throw DegenerateActivity{};

    const int mx = static_cast<int>(best % static_cast<std::size_t>(nx_));
    const int my = static_cast<int>((best / static_cast<std::size_t>(nx_)) % static_cast<std::size_t>(ny_));
    const int mth = static_cast<int>(best / (static_cast<std::size_t>(nx_) * ny_));

    // Contiguous wrapped window around the argmax, each axis covering at most
    // the full ring once.
    auto window = [](int n) {
        const int w = std::min(2 * kDecodeRadius + 1, n);
        const int lo = -((w - 1) / 2);
        return std::pair<int, int>(lo, lo + w - 1);
    };
    const auto [xlo, xhi] = window(nx_);
    const auto [ylo, yhi] = window(ny_);
    const auto [tlo, thi] = window(nth_);

    double cx = 0.0, sx = 0.0, cy = 0.0, sy = 0.0, ct = 0.0, st = 0.0;
    for (int dz = tlo; dz <= thi; ++dz) {
        const int z = wrap_i(mth + dz, nth_);
        const double az = 2.0 * M_PI * z / nth_;
        for (int dy = ylo; dy <= yhi; ++dy) {
            const int y = wrap_i(my + dy, ny_);
            const double ay = 2.0 * M_PI * y / ny_;
            for (int dx = xlo; dx <= xhi; ++dx) {
                const int x = wrap_i(mx + dx, nx_);
                const double ax = 2.0 * M_PI * x / nx_;
                const double a = activity_[index(x, y, z)];
                cx += a * std::cos(ax);
                sx += a * std::sin(ax);
                cy += a * std::cos(ay);
                sy += a * std::sin(ay);
                ct += a * std::cos(az);
                st += a * std::sin(az);
            }
        }
    }

    auto mean_index = [](double c, double s, int n, int fallback) {
        if (c == 0.0 && s == 0.0) return static_cast<double>(fallback);
        return wrap_d(std::atan2(s, c) / (2.0 * M_PI) * n, static_cast<double>(n));
    };

    PoseEstimate est;
    est.cell_coords.x = mean_index(cx, sx, nx_, mx);
    est.cell_coords.y = mean_index(cy, sy, ny_, my);
    est.cell_coords.th = mean_index(ct, st, nth_, mth);
    est.pose = cells_to_pose(est.cell_coords);
    return est;
}

CellCoords PoseCellGrid::pose_to_cells(const Pose& p) const {
    CellCoords c;
    c.x = wrap_d(p.x / cell_size_x_, static_cast<double>(nx_));
    c.y = wrap_d(p.y / cell_size_y_, static_cast<double>(ny_));
    c.th = wrap_d(p.theta / cell_size_th_, static_cast<double>(nth_));
    return c;
}

Pose PoseCellGrid::cells_to_pose(const CellCoords& c) const {
    return Pose(c.x * cell_size_x_, c.y * cell_size_y_, wrap_angle(c.th * cell_size_th_));
}

double PoseCellGrid::total_activity() const {
    double total = 0.0;
    for (double v : activity_) total += v;
    return total;
}

void PoseCellGrid::dump_csv(std::ostream& os) const {
    os.precision(17);
    for (double v : activity_) os << v << '\n';
}

} // namespace vitaslam
