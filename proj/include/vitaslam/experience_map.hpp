#ifndef VITASLAM_EXPERIENCE_MAP_HPP
#define VITASLAM_EXPERIENCE_MAP_HPP

#include <iosfwd>
#include <vector>

#include "vitaslam/geometry.hpp"
#include "vitaslam/matching.hpp"

namespace vitaslam {

// One node of the semi-metric map. map_pose is the relaxed estimate; odo_pose
// is the same chain dead-reckoned from raw odometry and never touched by
// relaxation, kept so before/after-relaxation trajectory error can be
// compared on identical node sets.
struct Experience {
    int id = -1;
    CellCoords cell_coords;  // pose-cell coordinates at creation
    int view_id = -1;        // -1 = absent
    int tactile_id = -1;     // -1 = absent
    Pose map_pose;
    Pose odo_pose;
    int cycle = 0;           // creation cycle, for ground-truth lookup
};

struct Link {
    int from = -1;
    int to = -1;
    Pose delta; // relative transform measured by odometry, in from's frame
    int cycle = 0;
};

struct LoopClosureEvent {
    int current_exp = -1;
    int matched_exp = -1;
    int cycle = 0;
};

struct UpdateOutcome {
    enum class Kind { NewExperience, SameExperience, LoopClosure };
    Kind kind = Kind::NewExperience;
    int experience_id = -1;     // active experience after the update
    LoopClosureEvent event;     // meaningful only when kind == LoopClosure
};

struct AteResult {
    double rmse_position = 0.0; // meters
    double rmse_heading = 0.0;  // radians
};

/// RMSE between an estimated trajectory and ground truth after the optimal
/// rigid 2D alignment (rotation + translation, no scale), computed in closed
/// form. Heading error is wrapped. Throws for fewer than 2 poses.
AteResult absolute_trajectory_error(const std::vector<Pose>& estimate,
                                    const std::vector<Pose>& truth);

struct ExperienceMapParams {
    double r_pc = 2.0;         // loop-closure gate radius, pose cells
    double alpha = 0.5;        // relaxation learning rate, in (0, 1]
    int relax_iterations = 20; // per loop closure and at shutdown
    int nx = 21;               // pose-cell dims, for wrapped cell distance
    int ny = 21;
    int nth = 36;
};

// Experience graph driven by per-cycle template match results and the decoded
// pose-cell peak. Odometry between update events accumulates internally and
// becomes the delta of the next link.
class ExperienceMap {
public:
    explicit ExperienceMap(const ExperienceMapParams& params = {},
                           const Pose& origin = Pose());

    /// One pipeline cycle. Scores every stored experience (+1 when its view
    /// id equals a Matched v_match id, +1 likewise for t_match), keeps only
    /// candidates whose creation cell coordinates lie within r_pc wrapped
    /// cells of the current peak, and picks the best score (ties to the
    /// lowest id). No candidate or best score 0 creates a new experience;
    /// best == active re-confirms it; anything else is a loop closure linking
    /// active -> candidate with the accumulated odometry as measurement.
    UpdateOutcome update(const MatchResult& v_match, const MatchResult& t_match,
                         const CellCoords& peak, const Pose& odom_step, int cycle);

    /// Iterative graph relaxation (Jacobi; each sweep reads a snapshot of the
    /// poses). Correction for experience e is the sum of link disagreements
    ///   outgoing: pose(to) (-) (pose(e) (+) delta)
    ///   incoming: (pose(from) (+) delta) (-) pose(e)
    /// applied as pose(e) += alpha/degree(e) * correction with wrapped angle.
    void relax(int iterations);

    /// Residual energy: sum over links of dx^2 + dy^2 + wrap(dtheta)^2 of the
    /// link disagreement (1 m^2 counts the same as 1 rad^2).
    double energy() const;

    const std::vector<Experience>& experiences() const { return experiences_; }
    const std::vector<Link>& links() const { return links_; }
    const std::vector<LoopClosureEvent>& events() const { return events_; }
    int active_id() const { return active_; }
    int size() const { return static_cast<int>(experiences_.size()); }

    std::vector<Pose> map_poses() const;
    std::vector<Pose> odo_poses() const;

    // Direct pose access for relaxation tests that build graphs by hand.
    void set_map_pose(int id, const Pose& p);
    int add_experience_raw(const Pose& map_pose, const CellCoords& cells = {},
                           int view_id = -1, int tactile_id = -1, int cycle = 0);
    void add_link_raw(int from, int to, const Pose& delta, int cycle = 0);

    void write_experiences_csv(std::ostream& os) const;
    void write_links_csv(std::ostream& os) const;

    const ExperienceMapParams& params() const { return params_; }

private:
    double wrapped_cell_distance(const CellCoords& a, const CellCoords& b) const;

    ExperienceMapParams params_;
    std::vector<Experience> experiences_;
    std::vector<Link> links_;
    std::vector<LoopClosureEvent> events_;
    int active_ = -1;
    Pose origin_;
    Pose pending_;      // odometry accumulated since the last graph event
    Pose odo_current_;  // raw dead-reckoned pose, never reset by closures
};

} // namespace vitaslam

#endif
