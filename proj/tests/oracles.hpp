#ifndef VITASLAM_TESTS_ORACLES_HPP
#define VITASLAM_TESTS_ORACLES_HPP

// Reference implementations the library is checked against. Everything here
// is written from the documented contracts (plain dense loops, closed forms,
// brute-force scans) and deliberately shares no code with src/.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "vitaslam/experience_map.hpp"
#include "vitaslam/geometry.hpp"
#include "vitaslam/matching.hpp"

namespace oracle {

inline int wrap_index(int i, int n) {
    int r = i % n;
    if (r < 0) r += n;
    return r;
}

// ---------------------------------------------------------------------------
// Attractor step: dense wrapped 3D convolution with the separable unit-sum
// Gaussian kernel, then inhibition, clamping and unit-sum normalization.
// Offsets accumulate in ascending (dz, dy, dx) order and the per-cell weight
// is formed as ((wz * wy) * wx) * activity, matching the documented update
// so the comparison can demand bit-identical doubles.
// ---------------------------------------------------------------------------
inline std::vector<double> attractor_step(const std::vector<double>& activity,
                                          int nx, int ny, int nth, double inhibition,
                                          int radius = 3, double sigma = 1.0) {
    std::vector<double> kern(static_cast<std::size_t>(2 * radius + 1));
    double ksum = 0.0;
    for (int d = -radius; d <= radius; ++d) {
        kern[static_cast<std::size_t>(d + radius)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
        ksum += kern[static_cast<std::size_t>(d + radius)];
    }
    for (double& w : kern) w /= ksum;

    auto at = [&](int x, int y, int z) {
        return activity[static_cast<std::size_t>(
            (wrap_index(z, nth) * ny + wrap_index(y, ny)) * nx + wrap_index(x, nx))];
    };

    std::vector<double> out(activity.size(), 0.0);
    std::size_t idx = 0;
    for (int z = 0; z < nth; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x, ++idx) {
                double acc = 0.0;
                for (int dz = -radius; dz <= radius; ++dz) {
                    const double wz = kern[static_cast<std::size_t>(dz + radius)];
                    for (int dy = -radius; dy <= radius; ++dy) {
                        const double wzy = wz * kern[static_cast<std::size_t>(dy + radius)];
                        for (int dx = -radius; dx <= radius; ++dx)
                            acc += wzy * kern[static_cast<std::size_t>(dx + radius)] *
                                   at(x + dx, y + dy, z + dz);
                    }
                }
                out[idx] = acc;
            }

    double total = 0.0;
    for (double& v : out) {
        v = std::max(0.0, v - inhibition);
        total += v;
    }
    for (double& v : out) v /= total;
    return out;
}

// ---------------------------------------------------------------------------
// Peak decode: argmax (ties to the lowest flat index), then per-axis
// activity-weighted circular means over the wrapped cube window around it.
// ---------------------------------------------------------------------------
struct DecodedCells {
    double x = 0.0;
    double y = 0.0;
    double th = 0.0;
};

inline DecodedCells decode_peak(const std::vector<double>& activity,
                                int nx, int ny, int nth, int radius = 5) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < activity.size(); ++i)
        if (activity[i] > activity[best]) best = i;

    const int mx = static_cast<int>(best % static_cast<std::size_t>(nx));
    const int my = static_cast<int>((best / static_cast<std::size_t>(nx)) % static_cast<std::size_t>(ny));
    const int mt = static_cast<int>(best / (static_cast<std::size_t>(nx) * ny));

    auto bounds = [radius](int n) {
        const int w = std::min(2 * radius + 1, n);
        const int lo = -((w - 1) / 2);
        return std::pair<int, int>(lo, lo + w - 1);
    };
    const auto [xlo, xhi] = bounds(nx);
    const auto [ylo, yhi] = bounds(ny);
    const auto [tlo, thi] = bounds(nth);

    double acc[3][2] = {{0, 0}, {0, 0}, {0, 0}};
    for (int dt = tlo; dt <= thi; ++dt)
        for (int dy = ylo; dy <= yhi; ++dy)
            for (int dx = xlo; dx <= xhi; ++dx) {
                const int x = wrap_index(mx + dx, nx);
                const int y = wrap_index(my + dy, ny);
                const int t = wrap_index(mt + dt, nth);
                const double a =
                    activity[static_cast<std::size_t>((t * ny + y) * nx + x)];
                const double angs[3] = {2.0 * M_PI * x / nx, 2.0 * M_PI * y / ny,
                                        2.0 * M_PI * t / nth};
                for (int ax = 0; ax < 3; ++ax) {
                    acc[ax][0] += a * std::cos(angs[ax]);
                    acc[ax][1] += a * std::sin(angs[ax]);
                }
            }

    auto mean = [](double c, double s, int n, int fallback) {
        if (c == 0.0 && s == 0.0) return static_cast<double>(fallback);
        double m = std::atan2(s, c) / (2.0 * M_PI) * n;
        m = std::fmod(m, static_cast<double>(n));
        if (m < 0.0) m += n;
        return m;
    };
    return DecodedCells{mean(acc[0][0], acc[0][1], nx, mx),
                        mean(acc[1][0], acc[1][1], ny, my),
                        mean(acc[2][0], acc[2][1], nth, mt)};
}

// ---------------------------------------------------------------------------
// Point-feature histogram by brute force over all unordered pairs, angles via
// atan2 of (|cross|, dot) instead of the library's acos form.
// ---------------------------------------------------------------------------
inline std::vector<double> pfh_brute(const std::vector<vitaslam::Point2>& pts,
                                     const std::vector<vitaslam::Point2>& nrm, int bins) {
    using vitaslam::Point2;
    auto ang = [](const Point2& a, const Point2& b) {
        return std::atan2(std::fabs(a.x * b.y - a.y * b.x), a.x * b.x + a.y * b.y);
    };
    std::vector<double> hist(static_cast<std::size_t>(bins) * bins * bins, 0.0);
    const int n = static_cast<int>(pts.size());
    if (n < 2) return hist;

    double dia = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            dia = std::max(dia, std::hypot(pts[j].x - pts[i].x, pts[j].y - pts[i].y));

    long pairs = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Point2 v{pts[j].x - pts[i].x, pts[j].y - pts[i].y};
            const double len = std::hypot(v.x, v.y);
            if (len == 0.0) continue;
            const int s = (ang(nrm[i], v) <= ang(nrm[j], Point2{-v.x, -v.y})) ? i : j;
            const int t = (s == i) ? j : i;
            const Point2 d{pts[t].x - pts[s].x, pts[t].y - pts[s].y};
            const double f1 = ang(nrm[s], nrm[t]);
            const double f2 = ang(nrm[s], d);
            const double f3 = len / dia;
            auto bin_of = [bins](double f, double range) {
                const int b = static_cast<int>(std::floor(f / range * bins));
                return std::min(std::max(b, 0), bins - 1);
            };
            hist[static_cast<std::size_t>(
                (bin_of(f1, M_PI) * bins + bin_of(f2, M_PI)) * bins + bin_of(f3, 1.0))] += 1.0;
            ++pairs;
        }
    if (pairs > 0)
        for (double& v : hist) v /= static_cast<double>(pairs);
    return hist;
}

// ---------------------------------------------------------------------------
// Kasa algebraic circle fit: least squares on x^2 + y^2 = 2 cx x + 2 cy y + k,
// normal equations solved by Gaussian elimination with partial pivoting.
// ---------------------------------------------------------------------------
struct Circle {
    double cx = 0.0;
    double cy = 0.0;
    double r = 0.0;
};

inline Circle fit_circle(const std::vector<vitaslam::Point2>& pts) {
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0, sxz = 0, syz = 0, sz = 0;
    for (const auto& q : pts) {
        const double z = q.x * q.x + q.y * q.y;
        sx += q.x;
        sy += q.y;
        sxx += q.x * q.x;
        syy += q.y * q.y;
        sxy += q.x * q.y;
        sxz += q.x * z;
        syz += q.y * z;
        sz += z;
    }
    const double n = static_cast<double>(pts.size());
    double A[3][4] = {{sxx, sxy, sx, sxz}, {sxy, syy, sy, syz}, {sx, sy, n, sz}};
    for (int i = 0; i < 3; ++i) {
        int piv = i;
        for (int r = i + 1; r < 3; ++r)
            if (std::fabs(A[r][i]) > std::fabs(A[piv][i])) piv = r;
        for (int c = 0; c < 4; ++c) std::swap(A[i][c], A[piv][c]);
        for (int r = 0; r < 3; ++r) {
            if (r == i) continue;
            const double f = A[r][i] / A[i][i];
            for (int c = i; c < 4; ++c) A[r][c] -= f * A[i][c];
        }
    }
    const double two_cx = A[0][3] / A[0][0];
    const double two_cy = A[1][3] / A[1][1];
    const double k = A[2][3] / A[2][2];
    Circle c{two_cx / 2.0, two_cy / 2.0, 0.0};
    c.r = std::sqrt(k + c.cx * c.cx + c.cy * c.cy);
    return c;
}

// ---------------------------------------------------------------------------
// Trajectory position RMSE after the best rigid alignment, found by scanning
// the rotation angle (coarse grid plus golden-section refinement) with the
// optimal translation in closed form per angle. Checks the library's one-shot
// closed-form alignment without sharing its derivation.
// ---------------------------------------------------------------------------
inline double aligned_position_rmse_scan(const std::vector<vitaslam::Pose>& est,
                                         const std::vector<vitaslam::Pose>& truth) {
    const std::size_t n = est.size();
    double ex = 0, ey = 0, tx = 0, ty = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ex += est[i].x;
        ey += est[i].y;
        tx += truth[i].x;
        ty += truth[i].y;
    }
    ex /= n;
    ey /= n;
    tx /= n;
    ty /= n;

    auto rmse_at = [&](double phi) {
        const double c = std::cos(phi), s = std::sin(phi);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double rx = c * (est[i].x - ex) - s * (est[i].y - ey) + tx;
            const double ry = s * (est[i].x - ex) + c * (est[i].y - ey) + ty;
            sum += (rx - truth[i].x) * (rx - truth[i].x) + (ry - truth[i].y) * (ry - truth[i].y);
        }
        return std::sqrt(sum / n);
    };

    double best_phi = 0.0, best = rmse_at(0.0);
    const int kCoarse = 3600;
    for (int i = 1; i < kCoarse; ++i) {
        const double phi = -M_PI + 2.0 * M_PI * i / kCoarse;
        const double v = rmse_at(phi);
        if (v < best) {
            best = v;
            best_phi = phi;
        }
    }
    double lo = best_phi - 2.0 * M_PI / kCoarse;
    double hi = best_phi + 2.0 * M_PI / kCoarse;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    double fa = rmse_at(a), fb = rmse_at(b);
    for (int it = 0; it < 200; ++it) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - gr * (hi - lo);
            fa = rmse_at(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + gr * (hi - lo);
            fb = rmse_at(b);
        }
    }
    return std::min(fa, fb);
}

// ---------------------------------------------------------------------------
// Experience-graph residual energy recomputed from the public link list.
// ---------------------------------------------------------------------------
inline double map_energy(const vitaslam::ExperienceMap& m) {
    double e = 0.0;
    for (const auto& link : m.links()) {
        const vitaslam::Pose predicted =
            vitaslam::compose(m.experiences()[static_cast<std::size_t>(link.from)].map_pose,
                              link.delta);
        const vitaslam::Pose& actual =
            m.experiences()[static_cast<std::size_t>(link.to)].map_pose;
        const double dx = actual.x - predicted.x;
        const double dy = actual.y - predicted.y;
        const double dth = vitaslam::wrap_angle(actual.theta - predicted.theta);
        e += dx * dx + dy * dy + dth * dth;
    }
    return e;
}

} // namespace oracle

#endif
