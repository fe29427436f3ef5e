#include "vitaslam/visual.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vitaslam {

GrayImage to_grayscale(const RgbImage& img) {
    if (img.width <= 0 || img.height <= 0) {
        throw std::invalid_argument("to_grayscale: zero-sized image");
    }
    if (img.pixels.size() != static_cast<std::size_t>(img.width) * img.height * 3) {
        throw std::invalid_argument("to_grayscale: pixel buffer size mismatch");
    }
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    out.intensity.resize(static_cast<std::size_t>(img.width) * img.height);
    for (std::size_t i = 0; i < out.intensity.size(); ++i) {
        const double r = img.pixels[i * 3 + 0];
        const double g = img.pixels[i * 3 + 1];
        const double b = img.pixels[i * 3 + 2];
        out.intensity[i] = (0.299 * r + 0.587 * g + 0.114 * b) / 255.0;
    }
    return out;
}

std::vector<double> extract_view_template(const GrayImage& gray, int profile_len) {
    if (profile_len <= 0) {
        throw std::invalid_argument("extract_view_template: profile_len must be positive");
    }
    if (gray.width < profile_len) {
        throw std::invalid_argument("extract_view_template: image narrower than profile");
    }

    // Column means collapse the frame to a 1D brightness signature.
    std::vector<double> cols(static_cast<std::size_t>(gray.width), 0.0);
    for (int r = 0; r < gray.height; ++r) {
        for (int c = 0; c < gray.width; ++c) {
            cols[static_cast<std::size_t>(c)] += gray.at(r, c);
        }
    }
    for (double& v : cols) v /= gray.height;

    // Box-average down to profile_len bins; bin edges at floor(i*W/P) so the
    // whole width is covered even when W is not a multiple of P.
    std::vector<double> profile(static_cast<std::size_t>(profile_len), 0.0);
    for (int i = 0; i < profile_len; ++i) {
        const int lo = static_cast<int>(static_cast<long long>(i) * gray.width / profile_len);
        const int hi = static_cast<int>(static_cast<long long>(i + 1) * gray.width / profile_len);
        double acc = 0.0;
        for (int c = lo; c < hi; ++c) acc += cols[static_cast<std::size_t>(c)];
        profile[static_cast<std::size_t>(i)] = acc / (hi - lo);
    }

    // Mean-normalize: center on the profile mean, then shift/scale back into
    // [0,1]. Centered values lie in [-1,1], so 0.5*(v-mean)+0.5 never clips.
    double mean = 0.0;
    for (double v : profile) mean += v;
    mean /= profile_len;
    for (double& v : profile) v = 0.5 * (v - mean) + 0.5;
    return profile;
}

double profile_distance(const std::vector<double>& a, const std::vector<double>& b,
                        int shift) {
    const int n = static_cast<int>(a.size());
    if (n == 0 || b.size() != a.size()) {
        throw std::invalid_argument("profile_distance: length mismatch");
    }
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        int j = (i + shift) % n;
        if (j < 0) j += n;
        acc += std::fabs(a[static_cast<std::size_t>(j)] - b[static_cast<std::size_t>(i)]);
    }
    return acc / n;
}

double best_shift_distance(const std::vector<double>& a, const std::vector<double>& b,
                           int max_shift) {
    double best = std::numeric_limits<double>::infinity();
    for (int s = -max_shift; s <= max_shift; ++s) {
        best = std::min(best, profile_distance(a, b, s));
    }
    return best;
}

MatchResult match_view_template(const std::vector<double>& current,
                                const std::vector<ViewTemplate>& store,
                                double threshold, int max_shift) {
    if (threshold <= 0.0) {
        throw std::invalid_argument("match_view_template: threshold must be positive");
    }
    double best = std::numeric_limits<double>::infinity();
    int best_id = -1;
    for (const ViewTemplate& t : store) {
        const double d = best_shift_distance(current, t.profile, max_shift);
        if (d < best) { // strict: ties keep the lowest id
            best = d;
            best_id = t.id;
        }
    }
    if (best_id >= 0 && best <= threshold) {
        return MatchResult::matched(best_id, best);
    }
    return MatchResult::novel(static_cast<int>(store.size()), best);
}

} // namespace vitaslam
