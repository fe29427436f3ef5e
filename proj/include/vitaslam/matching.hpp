#ifndef VITASLAM_MATCHING_HPP
#define VITASLAM_MATCHING_HPP

namespace vitaslam {

// Outcome of matching a freshly extracted template against a store.
// Matched   -> id of the best stored template, distance <= threshold.
// Novel     -> id the template will get once the caller appends it.
// NoContact -> tactile only: empty template, nothing to match or store.
struct MatchResult {
    enum class Kind { Matched, Novel, NoContact };

    Kind kind = Kind::Novel;
    int id = -1;
    double distance = 0.0;

    static MatchResult matched(int id, double d) { return {Kind::Matched, id, d}; }
    static MatchResult novel(int next_id, double d) { return {Kind::Novel, next_id, d}; }
    static MatchResult no_contact() { return {Kind::NoContact, -1, 0.0}; }

    bool is_matched() const { return kind == Kind::Matched; }
    bool is_novel() const { return kind == Kind::Novel; }
};

// Pose-cell coordinates a template was learned at (continuous cell units).
struct CellCoords {
    double x = 0.0;
    double y = 0.0;
    double th = 0.0;
};

} // namespace vitaslam

#endif
