#include "vitaslam/tactile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace vitaslam {

namespace {

double norm(const Point2& v) { return std::hypot(v.x, v.y); }

double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }

/// Angle between two vectors in [0, pi]; both assumed nonzero.
double vector_angle(const Point2& a, const Point2& b) {
    double c = dot(a, b) / (norm(a) * norm(b));
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c);
}

} // namespace

bool TactileTemplate::empty() const {
    for (double v : sda) {
        if (v != 0.0) return false;
    }
    for (double v : pfh) {
        if (v != 0.0) return false;
    }
    return true;
}

std::vector<Point2> contacts_to_world(const std::vector<Point2>& contacts_head,
                                      const Pose& head_pose) {
    std::vector<Point2> out;
    out.reserve(contacts_head.size());
    for (const Point2& p : contacts_head) {
        out.push_back(transform_point(head_pose, p));
    }
    return out;
}

std::vector<Point2> estimate_normals(const std::vector<Point2>& points,
                                     const Point2& head, int k) {
    const int n = static_cast<int>(points.size());
    if (n < 2) throw NoSurfaceError{};
    if (k < 2) throw std::invalid_argument("estimate_normals: k must be >= 2");
    const int kk = std::min(k, n);

    std::vector<Point2> normals(points.size());
    std::vector<int> order(points.size());
    for (int i = 0; i < n; ++i) {
        // k nearest neighbors of point i, self included; ties broken by index
        // so the fit is deterministic.
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const double da = distance(points[static_cast<std::size_t>(a)],
                                       points[static_cast<std::size_t>(i)]);
            const double db = distance(points[static_cast<std::size_t>(b)],
                                       points[static_cast<std::size_t>(i)]);
            if (da != db) return da < db;
            return a < b;
        });

        double mx = 0.0, my = 0.0;
        for (int j = 0; j < kk; ++j) {
            mx += points[static_cast<std::size_t>(order[j])].x;
            my += points[static_cast<std::size_t>(order[j])].y;
        }
        mx /= kk;
        my /= kk;

        // Total least squares: principal direction of the 2x2 scatter matrix.
        double sxx = 0.0, syy = 0.0, sxy = 0.0;
        for (int j = 0; j < kk; ++j) {
            const double dx = points[static_cast<std::size_t>(order[j])].x - mx;
            const double dy = points[static_cast<std::size_t>(order[j])].y - my;
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }

        Point2 nrm;
        if (sxx == 0.0 && syy == 0.0 && sxy == 0.0) {
            // Degenerate cluster: no line direction, aim straight at the head.
            const Point2 to_head{head.x - points[static_cast<std::size_t>(i)].x,
                                 head.y - points[static_cast<std::size_t>(i)].y};
            const double len = norm(to_head);
            nrm = (len > 0.0) ? Point2{to_head.x / len, to_head.y / len} : Point2{1.0, 0.0};
        } else {
            const double line_angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
            nrm = Point2{-std::sin(line_angle), std::cos(line_angle)};
        }

        const Point2 to_head{head.x - points[static_cast<std::size_t>(i)].x,
                             head.y - points[static_cast<std::size_t>(i)].y};
        if (dot(nrm, to_head) < 0.0) {
            nrm.x = -nrm.x;
            nrm.y = -nrm.y;
        }
        normals[static_cast<std::size_t>(i)] = nrm;
    }
    return normals;
}

std::vector<double> compute_pfh(const std::vector<Point2>& points,
                                const std::vector<Point2>& normals,
                                int bins_per_feature) {
    if (bins_per_feature <= 0) {
        throw std::invalid_argument("compute_pfh: bins_per_feature must be positive");
    }
    if (points.size() != normals.size()) {
        throw std::invalid_argument("compute_pfh: points/normals length mismatch");
    }
    const int bins = bins_per_feature;
    std::vector<double> hist(static_cast<std::size_t>(bins) * bins * bins, 0.0);
    const int n = static_cast<int>(points.size());
    if (n < 2) return hist; // no tactile evidence, not an error

    double diameter = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            diameter = std::max(diameter, distance(points[static_cast<std::size_t>(i)],
                                                   points[static_cast<std::size_t>(j)]));
        }
    }

    auto bin_of = [bins](double value, double range) {
        int b = static_cast<int>(std::floor(value / range * bins));
        return std::clamp(b, 0, bins - 1);
    };

    long long pairs = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Point2& pi = points[static_cast<std::size_t>(i)];
            const Point2& pj = points[static_cast<std::size_t>(j)];
            const Point2 v{pj.x - pi.x, pj.y - pi.y};
            const double len = norm(v);
            if (len == 0.0) continue; // coincident contacts carry no pair geometry

            // Surflet ordering: the source is the point whose normal makes the
            // smaller angle with the vector pointing at the other point.
            const double ang_i = vector_angle(normals[static_cast<std::size_t>(i)], v);
            const double ang_j =
                vector_angle(normals[static_cast<std::size_t>(j)], Point2{-v.x, -v.y});
            int s = i, t = j;
            if (ang_j < ang_i) {
                s = j;
                t = i;
            }
            const Point2& ps = points[static_cast<std::size_t>(s)];
            const Point2& pt = points[static_cast<std::size_t>(t)];
            const Point2& ns = normals[static_cast<std::size_t>(s)];
            const Point2& nt = normals[static_cast<std::size_t>(t)];
            const Point2 d{pt.x - ps.x, pt.y - ps.y};

            const double f1 = vector_angle(ns, nt);
            const double f2 = vector_angle(ns, d);
            const double f3 = len / diameter;

            const int b1 = bin_of(f1, M_PI);
            const int b2 = bin_of(f2, M_PI);
            const int b3 = bin_of(f3, 1.0);
            hist[static_cast<std::size_t>(pfh_bin_index(b1, b2, b3, bins))] += 1.0;
            ++pairs;
        }
    }
    if (pairs > 0) {
        for (double& v : hist) v /= static_cast<double>(pairs);
    }
    return hist;
}

std::array<double, kWhiskerCount> compute_sda(
    const std::array<double, kWhiskerCount>& deflections) {
    double maxv = 0.0;
    for (double v : deflections) maxv = std::max(maxv, v);
    std::array<double, kWhiskerCount> out{};
    if (maxv > 0.0) {
        for (int i = 0; i < kWhiskerCount; ++i) out[static_cast<std::size_t>(i)] =
            deflections[static_cast<std::size_t>(i)] / maxv;
    }
    return out;
}

double tactile_distance(const TactileTemplate& a, const TactileTemplate& b,
                        double w_pfh, double w_sda) {
    if (a.pfh.size() != b.pfh.size()) {
        throw std::invalid_argument("tactile_distance: histogram size mismatch");
    }
    double l1 = 0.0;
    for (std::size_t i = 0; i < a.pfh.size(); ++i) l1 += std::fabs(a.pfh[i] - b.pfh[i]);
    double sda = 0.0;
    for (int i = 0; i < kWhiskerCount; ++i) {
        sda += std::fabs(a.sda[static_cast<std::size_t>(i)] - b.sda[static_cast<std::size_t>(i)]);
    }
    return w_pfh * 0.5 * l1 + w_sda * sda / kWhiskerCount;
}

MatchResult match_tactile_template(const TactileTemplate& current,
                                   const std::vector<TactileTemplate>& store,
                                   double w_pfh, double w_sda, double threshold) {
    if (threshold <= 0.0) {
        throw std::invalid_argument("match_tactile_template: threshold must be positive");
    }
    if (w_pfh < 0.0 || w_sda < 0.0 || std::fabs(w_pfh + w_sda - 1.0) > 1e-12) {
        throw std::invalid_argument("match_tactile_template: weights must be >= 0 and sum to 1");
    }
    if (current.empty()) return MatchResult::no_contact();

    double best = std::numeric_limits<double>::infinity();
    int best_id = -1;
    for (const TactileTemplate& t : store) {
        const double d = tactile_distance(current, t, w_pfh, w_sda);
        if (d < best) {
            best = d;
            best_id = t.id;
        }
    }
    if (best_id >= 0 && best <= threshold) {
        return MatchResult::matched(best_id, best);
    }
    return MatchResult::novel(static_cast<int>(store.size()), best);
}

std::string tactile_template_to_record(const TactileTemplate& t) {
    std::ostringstream os;
    os.precision(17);
    os << t.id << ' ' << t.pfh.size();
    for (double v : t.pfh) os << ' ' << v;
    for (double v : t.sda) os << ' ' << v;
    os << ' ' << t.learned_pose_cell.x << ' ' << t.learned_pose_cell.y << ' '
       << t.learned_pose_cell.th;
    return os.str();
}

TactileTemplate tactile_template_from_record(const std::string& line) {
    std::istringstream is(line);
    TactileTemplate t;
    std::size_t pfh_len = 0;
    if (!(is >> t.id >> pfh_len)) {
        throw std::runtime_error("tactile template record: bad header");
    }
    t.pfh.resize(pfh_len);
    for (double& v : t.pfh) {
        if (!(is >> v)) throw std::runtime_error("tactile template record: truncated pfh");
    }
    for (double& v : t.sda) {
        if (!(is >> v)) throw std::runtime_error("tactile template record: truncated sda");
    }
    if (!(is >> t.learned_pose_cell.x >> t.learned_pose_cell.y >> t.learned_pose_cell.th)) {
        throw std::runtime_error("tactile template record: truncated pose cell");
    }
    return t;
}

} // namespace vitaslam
