#ifndef VITASLAM_TACTILE_HPP
#define VITASLAM_TACTILE_HPP

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "vitaslam/geometry.hpp"
#include "vitaslam/matching.hpp"

namespace vitaslam {

inline constexpr int kWhiskerCount = 24;

// Everything one whisk cycle produced: per-whisker contact points in the head
// frame and per-whisker peak deflections (radians of arrested sweep, 0 = no
// contact).
struct WhiskerContact {
    int whisker_id = -1;
    Point2 point_head; // head frame
};

struct WhiskCycleData {
    std::vector<WhiskerContact> contacts;
    std::array<double, kWhiskerCount> deflections{}; // all zeros by default
};

// Tactile signature: joint PFH over contact-pair geometry plus the deflection
// distribution across the whisker array.
struct TactileTemplate {
    int id = -1;
    std::vector<double> pfh; // length bins^3, unit sum (all zero if <2 contacts)
    std::array<double, kWhiskerCount> sda{};
    CellCoords learned_pose_cell;

    bool empty() const;
};

struct NoSurfaceError : std::runtime_error {
    NoSurfaceError() : std::runtime_error("normal estimation needs at least 2 points") {}
};

/// Whisker contact points mapped from the head frame into the world frame.
std::vector<Point2> contacts_to_world(const std::vector<Point2>& contacts_head,
                                      const Pose& head_pose);

/// Per-point surface normals from a total-least-squares line fit over the k
/// nearest neighbors (self included). Normal signs point toward the head so
/// the surflet features are consistent across whisk cycles. Throws
/// NoSurfaceError for fewer than 2 points.
std::vector<Point2> estimate_normals(const std::vector<Point2>& points,
                                     const Point2& head, int k);

/// Planar point-feature histogram over all unordered point pairs.
/// Per pair: f1 = angle(n_s, n_t), f2 = angle(n_s, p_t - p_s), f3 = pair
/// distance over the point-set diameter; each binned uniformly into
/// bins_per_feature bins and counted jointly, then normalized to unit sum.
/// The source point of a pair is the one whose normal is closer in angle to
/// the connecting vector (ties to the lower index). Fewer than 2 points give
/// the all-zero histogram.
std::vector<double> compute_pfh(const std::vector<Point2>& points,
                                const std::vector<Point2>& normals,
                                int bins_per_feature = 5);

/// Flat index into the PFH for feature bins (b1, b2, b3).
inline int pfh_bin_index(int b1, int b2, int b3, int bins) {
    return (b1 * bins + b2) * bins + b3;
}

/// Deflections normalized by the array maximum; all zeros when nothing bent.
std::array<double, kWhiskerCount> compute_sda(const std::array<double, kWhiskerCount>& deflections);

/// Weighted tactile distance in [0,1]: w_pfh * (half L1 between histograms)
/// + w_sda * (mean absolute SDA difference).
double tactile_distance(const TactileTemplate& a, const TactileTemplate& b,
                        double w_pfh, double w_sda);

/// Same contract as view matching, plus: an empty current template (no
/// contact this cycle) yields NoContact and must never be stored.
MatchResult match_tactile_template(const TactileTemplate& current,
                                   const std::vector<TactileTemplate>& store,
                                   double w_pfh, double w_sda, double threshold);

// Line-delimited template records for replay fixtures.
std::string tactile_template_to_record(const TactileTemplate& t);
TactileTemplate tactile_template_from_record(const std::string& line);

class TactileTemplateStore {
public:
    TactileTemplateStore(double w_pfh, double w_sda, double threshold)
        : w_pfh_(w_pfh), w_sda_(w_sda), threshold_(threshold) {}

    MatchResult match(const TactileTemplate& current) const {
        return match_tactile_template(current, templates_, w_pfh_, w_sda_, threshold_);
    }

    int add(TactileTemplate t, const CellCoords& learned_at) {
        t.id = static_cast<int>(templates_.size());
        t.learned_pose_cell = learned_at;
        templates_.push_back(std::move(t));
        return templates_.back().id;
    }

    const std::vector<TactileTemplate>& templates() const { return templates_; }
    int size() const { return static_cast<int>(templates_.size()); }

private:
    std::vector<TactileTemplate> templates_;
    double w_pfh_;
    double w_sda_;
    double threshold_;
};

} // namespace vitaslam

#endif
