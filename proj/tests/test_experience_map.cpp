#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "vitaslam/experience_map.hpp"

using namespace vitaslam;

namespace {

std::vector<Pose> figure_eight(int n) {
    std::vector<Pose> out;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * M_PI * i / n;
        out.emplace_back(2.0 * std::sin(t), std::sin(2.0 * t), wrap_angle(t));
    }
    return out;
}

Pose rigidly_moved(const Pose& p, double phi, double tx, double ty) {
    return Pose(std::cos(phi) * p.x - std::sin(phi) * p.y + tx,
                std::sin(phi) * p.x + std::cos(phi) * p.y + ty, p.theta + phi);
}

} // namespace

TEST_CASE("trajectory error vanishes for exact and rigidly moved estimates") {
    const std::vector<Pose> truth = figure_eight(12);

    SUBCASE("identical trajectories") {
        const AteResult r = absolute_trajectory_error(truth, truth);
        CHECK(r.rmse_position <= 1e-12);
        CHECK(r.rmse_heading <= 1e-12);
    }
    SUBCASE("a rotated and translated copy aligns back to zero error") {
        std::vector<Pose> moved;
        for (const Pose& p : truth) moved.push_back(rigidly_moved(p, M_PI / 6.0, 1.5, -2.0));
        const AteResult r = absolute_trajectory_error(moved, truth);
        CHECK(r.rmse_position <= 1e-9);
        CHECK(r.rmse_heading <= 1e-9);
    }
}

TEST_CASE("trajectory error agrees with a rotation-scan oracle on perturbed input") {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> U(-0.1, 0.1);
    const std::vector<Pose> truth = figure_eight(10);
    std::vector<Pose> est;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        Pose p = rigidly_moved(truth[i], 0.4, 0.3, 0.7);
        if (i % 2 == 0) {
            p.x += U(rng);
            p.y += U(rng);
        }
        est.push_back(p);
    }
    const AteResult fast = absolute_trajectory_error(est, truth);
    const double slow = oracle::aligned_position_rmse_scan(est, truth);
    CHECK(std::fabs(fast.rmse_position - slow) <= 1e-8);
    CHECK(fast.rmse_position > 0.0);
}

TEST_CASE("trajectory error input validation") {
    const std::vector<Pose> truth = figure_eight(6);
    std::vector<Pose> shorter(truth.begin(), truth.end() - 1);
    CHECK_THROWS_AS(absolute_trajectory_error(shorter, truth), std::invalid_argument);
    const std::vector<Pose> one = {Pose(0, 0, 0)};
    CHECK_THROWS_AS(absolute_trajectory_error(one, one), std::runtime_error);
}

TEST_CASE("experience creation, re-confirmation, gating and closure") {
    ExperienceMap m;
    const MatchResult nc = MatchResult::no_contact();

    // Nothing stored yet: a novel view founds experience 0 with no links.
    UpdateOutcome r = m.update(MatchResult::novel(0, 1.0), nc, {5, 5, 0}, Pose(), 0);
    CHECK(r.kind == UpdateOutcome::Kind::NewExperience);
    CHECK(r.experience_id == 0);
    CHECK(m.size() == 1);
    CHECK(m.links().empty());
    CHECK(m.experiences()[0].view_id == 0);
    CHECK(m.experiences()[0].tactile_id == -1);

    // New view at a far peak: new experience linked by the odometry step.
    r = m.update(MatchResult::novel(1, 1.0), nc, {12, 5, 0}, Pose(0.5, 0.0, 0.0), 1);
    CHECK(r.kind == UpdateOutcome::Kind::NewExperience);
    CHECK(r.experience_id == 1);
    REQUIRE(m.links().size() == 1);
    CHECK(m.links()[0].from == 0);
    CHECK(m.links()[0].to == 1);
    CHECK(m.links()[0].delta.x == 0.5);
    const Pose expected = compose(m.experiences()[0].map_pose, Pose(0.5, 0.0, 0.0));
    CHECK(m.experiences()[1].map_pose.x == doctest::Approx(expected.x).epsilon(1e-12));

    // The same view near the same peak re-confirms the active experience.
    r = m.update(MatchResult::matched(1, 0.0), nc, {12.3, 5.1, 0.2}, Pose(0.05, 0.0, 0.0), 2);
    CHECK(r.kind == UpdateOutcome::Kind::SameExperience);
    CHECK(r.experience_id == 1);
    CHECK(m.size() == 2);

    // A matched view whose experience lies outside the pose-cell gate does
    // not close the loop; it founds a new experience that reuses the view id.
    r = m.update(MatchResult::matched(0, 0.0), nc, {12, 6, 0}, Pose(0.0, 0.2, 0.0), 3);
    CHECK(r.kind == UpdateOutcome::Kind::NewExperience);
    CHECK(r.experience_id == 2);
    CHECK(m.experiences()[2].view_id == 0);
    CHECK(m.events().empty());

    // Back near experience 0 with its view: loop closure, active switches.
    r = m.update(MatchResult::matched(0, 0.0), nc, {5.5, 5, 0}, Pose(-0.3, 0.0, 0.0), 4);
    CHECK(r.kind == UpdateOutcome::Kind::LoopClosure);
    CHECK(r.experience_id == 0);
    CHECK(m.active_id() == 0);
    REQUIRE(m.events().size() == 1);
    CHECK(m.events()[0].current_exp == 2);
    CHECK(m.events()[0].matched_exp == 0);
    CHECK(m.events()[0].cycle == 4);
    const Link& closure = m.links().back();
    CHECK(closure.from == 2);
    CHECK(closure.to == 0);
    CHECK(closure.delta.x == -0.3);

    // No link ever points at its own experience.
    for (const Link& l : m.links()) CHECK(l.from != l.to);
}

TEST_CASE("candidate score ties resolve to the lowest experience id") {
    ExperienceMapParams params;
    params.r_pc = 50.0; // gate wide open so only the scores decide
    ExperienceMap m(params);

    m.update(MatchResult::novel(0, 1.0), MatchResult::novel(0, 1.0), {5, 5, 0}, Pose(), 0);
    m.update(MatchResult::novel(1, 1.0), MatchResult::novel(1, 1.0), {8, 5, 0},
             Pose(1.0, 0.0, 0.0), 1);
    CHECK(m.active_id() == 1);

    // view says experience 0, tactile says experience 1: equal scores.
    const UpdateOutcome r = m.update(MatchResult::matched(0, 0.0), MatchResult::matched(1, 0.0),
                                     {6, 5, 0}, Pose(0.1, 0.0, 0.0), 2);
    CHECK(r.kind == UpdateOutcome::Kind::LoopClosure);
    CHECK(r.experience_id == 0);
}

TEST_CASE("a visual plus tactile agreement outranks a single-modality candidate") {
    ExperienceMapParams params;
    params.r_pc = 3.0;
    ExperienceMap m(params);

    // Experience 0 learns view 0 and tactile 0. Experience 1 is founded five
    // cells away (outside the gate, so the matched view does not close) and
    // therefore shares view 0 but carries tactile 1.
    m.update(MatchResult::novel(0, 1.0), MatchResult::novel(0, 1.0), {5, 5, 0}, Pose(), 0);
    m.update(MatchResult::matched(0, 0.0), MatchResult::novel(1, 1.0), {10, 5, 0},
             Pose(1.5, 0.0, 0.0), 1);
    CHECK(m.size() == 2);
    CHECK(m.experiences()[1].view_id == 0);
    CHECK(m.experiences()[1].tactile_id == 1);
    m.update(MatchResult::novel(2, 1.0), MatchResult::novel(2, 1.0), {15, 5, 0},
             Pose(1.5, 0.0, 0.0), 2);
    CHECK(m.active_id() == 2);

    // From a peak between them both candidates pass the gate; the view picks
    // up both but the tactile only experience 1, which wins on score despite
    // the higher id.
    const UpdateOutcome r = m.update(MatchResult::matched(0, 0.0), MatchResult::matched(1, 0.0),
                                     {7.5, 5, 0}, Pose(-1.0, 0.0, 0.0), 3);
    CHECK(r.kind == UpdateOutcome::Kind::LoopClosure);
    CHECK(r.experience_id == 1);
}

TEST_CASE("raw graph construction rejects self-links") {
    ExperienceMap m;
    m.add_experience_raw(Pose(0, 0, 0));
    CHECK_THROWS_AS(m.add_link_raw(0, 0, Pose(1, 0, 0)), std::invalid_argument);
}

TEST_CASE("map parameter validation") {
    ExperienceMapParams bad;
    bad.r_pc = 0.0;
    CHECK_THROWS_AS(ExperienceMap{bad}, std::invalid_argument);
    bad = ExperienceMapParams{};
    bad.alpha = 0.0;
    CHECK_THROWS_AS(ExperienceMap{bad}, std::invalid_argument);
    bad.alpha = 1.5;
    CHECK_THROWS_AS(ExperienceMap{bad}, std::invalid_argument);
}

TEST_CASE("relaxation leaves a consistent chain untouched") {
    ExperienceMap m;
    const Pose poses[3] = {Pose(0, 0, 0), Pose(1, 0, M_PI / 4), Pose(1.5, 0.5, M_PI / 2)};
    for (const Pose& p : poses) m.add_experience_raw(p);
    m.add_link_raw(0, 1, between(poses[0], poses[1]), 0);
    m.add_link_raw(1, 2, between(poses[1], poses[2]), 1);
    CHECK(m.energy() <= 1e-18);
    m.relax(50);
    CHECK(m.energy() <= 1e-18);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::fabs(m.experiences()[static_cast<std::size_t>(i)].map_pose.x - poses[i].x) <= 1e-12);
        CHECK(std::fabs(m.experiences()[static_cast<std::size_t>(i)].map_pose.y - poses[i].y) <= 1e-12);
        CHECK(std::fabs(wrap_angle(m.experiences()[static_cast<std::size_t>(i)].map_pose.theta -
                                   poses[i].theta)) <= 1e-12);
    }
}

TEST_CASE("relaxation pulls a displaced corner back into the consistent square") {
    ExperienceMap m;
    const Pose truth[4] = {Pose(0, 0, 0), Pose(1, 0, M_PI / 2), Pose(1, 1, M_PI),
                           Pose(0, 1, -M_PI / 2)};
    for (const Pose& p : truth) m.add_experience_raw(p);
    for (int i = 0; i < 4; ++i)
        m.add_link_raw(i, (i + 1) % 4, between(truth[i], truth[(i + 1) % 4]), i);
    m.set_map_pose(2, Pose(1.5, 1.0, M_PI));

    const double e0 = m.energy();
    CHECK(e0 > 0.1);
    CHECK(std::fabs(m.energy() - oracle::map_energy(m)) <= 1e-12);

    double prev = e0;
    for (int it = 0; it < 50; ++it) {
        m.relax(1);
        const double e = m.energy();
        CHECK(std::fabs(e - oracle::map_energy(m)) <= 1e-12);
        CHECK(e <= prev + 1e-12);
        prev = e;
    }
    CHECK(prev < 0.01 * e0);
    // raw odometric poses keep their creation values; relaxation never
    // touches them
    for (int i = 0; i < 4; ++i) {
        const Experience& e = m.experiences()[static_cast<std::size_t>(i)];
        CHECK(e.odo_pose.x == truth[i].x);
        CHECK(e.odo_pose.y == truth[i].y);
        CHECK(e.odo_pose.theta == truth[i].theta);
    }
}

TEST_CASE("relaxation is a no-op on trivial graphs") {
    ExperienceMap empty;
    empty.relax(5);
    CHECK(empty.energy() == 0.0);

    ExperienceMap single;
    single.add_experience_raw(Pose(2, 3, 0.5));
    single.relax(5);
    CHECK(single.experiences()[0].map_pose.x == 2.0);
    CHECK(single.experiences()[0].map_pose.y == 3.0);
}

TEST_CASE("pose accessors mirror the experience list") {
    ExperienceMap m;
    m.update(MatchResult::novel(0, 1.0), MatchResult::no_contact(), {5, 5, 0}, Pose(), 0);
    m.update(MatchResult::novel(1, 1.0), MatchResult::no_contact(), {10, 5, 0},
             Pose(2.0, 0.0, 0.1), 1);
    const std::vector<Pose> mp = m.map_poses();
    const std::vector<Pose> op = m.odo_poses();
    REQUIRE(mp.size() == 2);
    REQUIRE(op.size() == 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(mp[static_cast<std::size_t>(i)].x == m.experiences()[static_cast<std::size_t>(i)].map_pose.x);
        CHECK(op[static_cast<std::size_t>(i)].x == m.experiences()[static_cast<std::size_t>(i)].odo_pose.x);
    }
}
