#ifndef VITASLAM_VISUAL_HPP
#define VITASLAM_VISUAL_HPP

#include <cstdint>
#include <vector>

#include "vitaslam/matching.hpp"

namespace vitaslam {

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // row-major RGB triples

    std::uint8_t at(int row, int col, int chan) const {
        return pixels[static_cast<std::size_t>((row * width + col) * 3 + chan)];
    }
};

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> intensity; // row-major, values in [0,1]

    double at(int row, int col) const {
        return intensity[static_cast<std::size_t>(row * width + col)];
    }
};

// One learned view signature: a brightness-normalized 1D intensity profile.
struct ViewTemplate {
    int id = -1;
    std::vector<double> profile;
    CellCoords learned_pose_cell;
};

/// Rec.601 luma conversion, intensities scaled into [0,1].
GrayImage to_grayscale(const RgbImage& img);

/// Column-mean the image into a 1D profile, box-average down to profile_len,
/// then mean-normalize so a global brightness shift cancels out. Values stay
/// in [0,1] with the profile mean pinned at 0.5.
std::vector<double> extract_view_template(const GrayImage& gray, int profile_len);

/// Mean absolute difference between a and b with b read at a circular offset.
double profile_distance(const std::vector<double>& a, const std::vector<double>& b,
                        int shift);

/// Best distance over circular shifts in [-max_shift, max_shift].
double best_shift_distance(const std::vector<double>& a, const std::vector<double>& b,
                           int max_shift);

/// RatSLAM-style template matching: min over the store and over shifts.
/// Ties on distance go to the lowest template id. A Novel result carries the
/// id the caller should use when appending the profile to the store.
MatchResult match_view_template(const std::vector<double>& current,
                                const std::vector<ViewTemplate>& store,
                                double threshold, int max_shift);

// Owns the learned view templates for one run.
class ViewTemplateStore {
public:
    ViewTemplateStore(double threshold, int max_shift)
        : threshold_(threshold), max_shift_(max_shift) {}

    MatchResult match(const std::vector<double>& profile) const {
        return match_view_template(profile, templates_, threshold_, max_shift_);
    }

    int add(std::vector<double> profile, const CellCoords& learned_at) {
        const int id = static_cast<int>(templates_.size());
        templates_.push_back(ViewTemplate{id, std::move(profile), learned_at});
        return id;
    }

    const std::vector<ViewTemplate>& templates() const { return templates_; }
    int size() const { return static_cast<int>(templates_.size()); }

private:
    std::vector<ViewTemplate> templates_;
    double threshold_;
    int max_shift_;
};

} // namespace vitaslam

#endif
