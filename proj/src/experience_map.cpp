#include "vitaslam/experience_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace vitaslam {

AteResult absolute_trajectory_error(const std::vector<Pose>& estimate,
                                    const std::vector<Pose>& truth) {
    if (estimate.size() != truth.size()) {
        throw std::invalid_argument("absolute_trajectory_error: trajectory length mismatch");
    }
    const std::size_t n = estimate.size();
    if (n < 2) {
        throw std::runtime_error("absolute_trajectory_error: need at least 2 poses");
    }

    double mex = 0.0, mey = 0.0, mtx = 0.0, mty = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mex += estimate[i].x;
        mey += estimate[i].y;
        mtx += truth[i].x;
        mty += truth[i].y;
    }
    mex /= n;
    mey /= n;
    mtx /= n;
    mty /= n;

    // Optimal rotation in closed form: rotate centered estimate points onto
    // centered truth points.
    double s_cross = 0.0, s_dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ex = estimate[i].x - mex;
        const double ey = estimate[i].y - mey;
        const double tx = truth[i].x - mtx;
        const double ty = truth[i].y - mty;
        s_cross += ex * ty - ey * tx;
        s_dot += ex * tx + ey * ty;
    }
    const double rot = (s_cross == 0.0 && s_dot == 0.0) ? 0.0 : std::atan2(s_cross, s_dot);
    const double c = std::cos(rot);
    const double s = std::sin(rot);

    double sq_pos = 0.0, sq_head = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ex = estimate[i].x - mex;
        const double ey = estimate[i].y - mey;
        const double ax = c * ex - s * ey + mtx;
        const double ay = s * ex + c * ey + mty;
        const double dx = ax - truth[i].x;
        const double dy = ay - truth[i].y;
        sq_pos += dx * dx + dy * dy;
        const double dth = wrap_angle(estimate[i].theta + rot - truth[i].theta);
        sq_head += dth * dth;
    }
    return {std::sqrt(sq_pos / n), std::sqrt(sq_head / n)};
}

ExperienceMap::ExperienceMap(const ExperienceMapParams& params, const Pose& origin)
    : params_(params), origin_(origin), odo_current_(origin) {
    if (params_.r_pc <= 0.0) throw std::invalid_argument("ExperienceMap: r_pc must be positive");
    if (params_.alpha <= 0.0 || params_.alpha > 1.0) {
        throw std::invalid_argument("ExperienceMap: alpha must be in (0, 1]");
    }
}

double ExperienceMap::wrapped_cell_distance(const CellCoords& a, const CellCoords& b) const {
    auto axis = [](double da, int n) {
        double d = std::fabs(std::fmod(da, static_cast<double>(n)));
        d = std::min(d, n - d);
        return d;
    };
    const double dx = axis(a.x - b.x, params_.nx);
    const double dy = axis(a.y - b.y, params_.ny);
    const double dth = axis(a.th - b.th, params_.nth);
    return std::sqrt(dx * dx + dy * dy + dth * dth);
}

UpdateOutcome ExperienceMap::update(const MatchResult& v_match, const MatchResult& t_match,
                                    const CellCoords& peak, const Pose& odom_step, int cycle) {
    pending_ = compose(pending_, odom_step);
    odo_current_ = compose(odo_current_, odom_step);

    int best_id = -1;
    int best_score = 0;
    for (const Experience& e : experiences_) {
        int score = 0;
        if (v_match.is_matched() && e.view_id >= 0 && e.view_id == v_match.id) ++score;
        if (t_match.is_matched() && e.tactile_id >= 0 && e.tactile_id == t_match.id) ++score;
        if (score == 0) continue;
        if (wrapped_cell_distance(peak, e.cell_coords) > params_.r_pc) continue;
        // Ties go to the lower experience id; iteration visits ids ascending,
        // so the first candidate at a given score wins.
        if (score > best_score) {
            best_score = score;
            best_id = e.id;
        }
    }

    UpdateOutcome out;
    if (best_id < 0) {
        Experience e;
        e.id = static_cast<int>(experiences_.size());
        e.cell_coords = peak;
        if (v_match.kind != MatchResult::Kind::NoContact) e.view_id = v_match.id;
        if (t_match.kind != MatchResult::Kind::NoContact) e.tactile_id = t_match.id;
        e.cycle = cycle;
        if (active_ < 0) {
            e.map_pose = compose(origin_, pending_);
        } else {
            e.map_pose = compose(experiences_[static_cast<std::size_t>(active_)].map_pose, pending_);
            links_.push_back({active_, e.id, pending_, cycle});
        }
        e.odo_pose = odo_current_;
        experiences_.push_back(e);
        active_ = e.id;
        pending_ = Pose();
        out.kind = UpdateOutcome::Kind::NewExperience;
        out.experience_id = active_;
        return out;
    }

    if (best_id == active_) {
        out.kind = UpdateOutcome::Kind::SameExperience;
        out.experience_id = active_;
        return out;
    }

    links_.push_back({active_, best_id, pending_, cycle});
    LoopClosureEvent ev{active_, best_id, cycle};
    events_.push_back(ev);
    active_ = best_id;
    pending_ = Pose();
    out.kind = UpdateOutcome::Kind::LoopClosure;
    out.experience_id = active_;
    out.event = ev;
    return out;
}

void ExperienceMap::relax(int iterations) {
    if (experiences_.empty() || links_.empty()) return;

    std::vector<Pose> snapshot(experiences_.size());
    std::vector<double> dx(experiences_.size());
    std::vector<double> dy(experiences_.size());
    std::vector<double> dth(experiences_.size());
    std::vector<int> degree(experiences_.size());

    for (int it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < experiences_.size(); ++i) snapshot[i] = experiences_[i].map_pose;
        std::fill(dx.begin(), dx.end(), 0.0);
        std::fill(dy.begin(), dy.end(), 0.0);
        std::fill(dth.begin(), dth.end(), 0.0);
        std::fill(degree.begin(), degree.end(), 0);

        for (const Link& l : links_) {
            const Pose predicted = compose(snapshot[static_cast<std::size_t>(l.from)], l.delta);
            const Pose& actual = snapshot[static_cast<std::size_t>(l.to)];
            const double ex = actual.x - predicted.x;
            const double ey = actual.y - predicted.y;
            const double eth = wrap_angle(actual.theta - predicted.theta);
            // The 'from' end pulls toward where the link says 'to' should sit
            // and vice versa; disagreement is split between the two ends.
            dx[static_cast<std::size_t>(l.from)] += ex;
            dy[static_cast<std::size_t>(l.from)] += ey;
            dth[static_cast<std::size_t>(l.from)] += eth;
            dx[static_cast<std::size_t>(l.to)] -= ex;
            dy[static_cast<std::size_t>(l.to)] -= ey;
            dth[static_cast<std::size_t>(l.to)] -= eth;
            ++degree[static_cast<std::size_t>(l.from)];
            ++degree[static_cast<std::size_t>(l.to)];
        }

        for (std::size_t i = 0; i < experiences_.size(); ++i) {
            if (degree[i] == 0) continue;
            const double gain = params_.alpha / degree[i];
            Pose& p = experiences_[i].map_pose;
            p.x += gain * dx[i];
            p.y += gain * dy[i];
            p.theta = wrap_angle(p.theta + gain * dth[i]);
        }
    }
}

double ExperienceMap::energy() const {
    double e = 0.0;
    for (const Link& l : links_) {
        const Pose predicted =
            compose(experiences_[static_cast<std::size_t>(l.from)].map_pose, l.delta);
        const Pose& actual = experiences_[static_cast<std::size_t>(l.to)].map_pose;
        const double ex = actual.x - predicted.x;
        const double ey = actual.y - predicted.y;
        const double eth = wrap_angle(actual.theta - predicted.theta);
        e += ex * ex + ey * ey + eth * eth;
    }
    return e;
}

std::vector<Pose> ExperienceMap::map_poses() const {
    std::vector<Pose> out;
    out.reserve(experiences_.size());
    for (const Experience& e : experiences_) out.push_back(e.map_pose);
    return out;
}

std::vector<Pose> ExperienceMap::odo_poses() const {
    std::vector<Pose> out;
    out.reserve(experiences_.size());
    for (const Experience& e : experiences_) out.push_back(e.odo_pose);
    return out;
}

void ExperienceMap::set_map_pose(int id, const Pose& p) {
    experiences_.at(static_cast<std::size_t>(id)).map_pose = p;
}

int ExperienceMap::add_experience_raw(const Pose& map_pose, const CellCoords& cells,
                                      int view_id, int tactile_id, int cycle) {
    Experience e;
    e.id = static_cast<int>(experiences_.size());
    e.cell_coords = cells;
    e.view_id = view_id;
    e.tactile_id = tactile_id;
    e.map_pose = map_pose;
    e.odo_pose = map_pose;
    e.cycle = cycle;
    experiences_.push_back(e);
    if (active_ < 0) active_ = e.id;
    return e.id;
}

void ExperienceMap::add_link_raw(int from, int to, const Pose& delta, int cycle) {
    if (from == to) throw std::invalid_argument("add_link_raw: self-links not allowed");
    experiences_.at(static_cast<std::size_t>(from));
    experiences_.at(static_cast<std::size_t>(to));
    links_.push_back({from, to, delta, cycle});
}

void ExperienceMap::write_experiences_csv(std::ostream& os) const {
    os << "id,x,y,theta,view_id,tactile_id,cycle\n";
    os.precision(17);
    for (const Experience& e : experiences_) {
        os << e.id << ',' << e.map_pose.x << ',' << e.map_pose.y << ',' << e.map_pose.theta
           << ',' << e.view_id << ',' << e.tactile_id << ',' << e.cycle << '\n';
    }
}

void ExperienceMap::write_links_csv(std::ostream& os) const {
    os << "from,to,dx,dy,dtheta,cycle\n";
    os.precision(17);
    for (const Link& l : links_) {
        os << l.from << ',' << l.to << ',' << l.delta.x << ',' << l.delta.y << ','
           << l.delta.theta << ',' << l.cycle << '\n';
    }
}

} // namespace vitaslam
